#include <algorithm>
#include <cmath>

#include "viz/gateway.hpp"

namespace viz::gateway {

using nlohmann::json;
using lang::Event;
using lang::EventKind;

namespace {

json vecJson(const Vec3& v) { return {v.x, v.y, v.z}; }

std::vector<Event> pointerEvents(const Session& before, const Session& after) {
  std::vector<Event> events;
  if (!(before.camera == after.camera)) {
    events.push_back({EventKind::CameraChanged, {{"camera", lang::cameraToJson(after.camera)}}});
  }
  for (std::size_t i = 0; i < after.views.size(); ++i) {
    const View& a = after.views[i];
    const View& b = before.views[i];
    if (a.objectRotation == b.objectRotation && a.objectTranslation == b.objectTranslation) continue;
    events.push_back({EventKind::ObjectTransformChanged,
                      {{"viewId", a.id},
                       {"transform",
                        {{"viewId", a.id},
                         {"rotation", {a.objectRotation.w, a.objectRotation.x, a.objectRotation.y, a.objectRotation.z}},
                         {"translation", vecJson(a.objectTranslation)}}}}});
  }
  return events;
}

json sliceJson(const SliceImage& s) {
  json samples = json::array();
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    samples.push_back(s.sampleMask[i] ? json(s.samples[i]) : json(nullptr));
  }
  return {{"width", s.width},   {"height", s.height},   {"origin", vecJson(s.origin)},
          {"uStep", vecJson(s.uStep)}, {"vStep", vecJson(s.vStep)}, {"samples", std::move(samples)}};
}

double minSpacing(const ScalarField& f) { return *std::min_element(f.spacing().begin(), f.spacing().end()); }

}  // namespace

SessionHost::SessionHost(lang::EvalContext ctx, Session initial) : ctx_(std::move(ctx)), session_(std::move(initial)) {
  ctx_.observer = nullptr;
}

std::vector<Outgoing> SessionHost::handle(const std::string& text) {
  ClientMessage m;
  try {
    m = parseClientMessage(text);
  } catch (const ProtocolError& e) {
    return {errorMessage(e.what(), "protocol")};
  }
  return std::visit([this](const auto& x) { return apply(x); }, m);
}

Outgoing SessionHost::ack() const {
  return {Outgoing::Target::Sender, false, json{{"type", "Ack"}, {"sessionVersion", version_}}.dump()};
}

std::vector<Outgoing> SessionHost::apply(const msg::Command& m) {
  std::optional<lang::Command> cmd;
  try {
    cmd = lang::parseLine(m.text, 1);
  } catch (const lang::ParseError& e) {
    return {errorMessage(e.what(), "parse", e.position())};
  }
  if (!cmd) return {ack()};
  lang::EvalResult r;
  try {
    r = lang::evaluate(session_, *cmd, ctx_);
  } catch (const lang::EvalError& e) {
    return {errorMessage(std::string(lang::evalErrorCodeName(e.code())) + ": " + e.what(), "eval")};
  }
  std::vector<Outgoing> out;
  for (const auto& e : r.nestedErrors) {
    out.push_back(errorMessage(e.file + ":" + std::to_string(e.line) + ": " + e.message, "source",
                               lang::SourcePos{e.line, e.column}));
  }
  if (r.events.empty()) {
    out.push_back(ack());
    return out;
  }
  auto committed = commit(std::move(r.session), std::move(r.events));
  out.insert(out.end(), std::make_move_iterator(committed.begin()), std::make_move_iterator(committed.end()));
  return out;
}

std::vector<Outgoing> SessionHost::apply(const msg::Pointer& m) {
  Session next;
  try {
    next = handlePointer(session_, m.event);
  } catch (const Error& e) {
    return {errorMessage(e.what(), "eval")};
  }
  auto events = pointerEvents(session_, next);
  if (events.empty()) return {ack()};
  return commit(std::move(next), std::move(events));
}

std::vector<Outgoing> SessionHost::apply(const msg::Key& m) {
  std::optional<Mode> mode;
  if (m.key == "c") mode = Mode::Camera;
  else if (m.key == "o") mode = Mode::Object;
  else if (m.key == "s") mode = Mode::Sync;
  else if (m.key == "u") return {ack()};
  else return {errorMessage("unbound key: " + m.key + "; bound keys are c, o, s, u", "protocol")};
  std::vector<Event> events = {{EventKind::ModeChanged, {{"mode", modeName(*mode)}}}};
  return commit(setMode(session_, *mode), std::move(events));
}

std::vector<Outgoing> SessionHost::apply(const msg::RequestScene&) {
  const Session& s = session_;
  std::vector<Event> events;
  json views = json::array();
  for (const auto& v : s.views) {
    views.push_back({{"viewId", v.id},
                     {"row", v.cell.row},
                     {"col", v.cell.col},
                     {"basePosition", vecJson(v.basePosition)}});
  }
  events.push_back({EventKind::LayoutChanged,
                    {{"cols", s.layout.cols},
                     {"cellWidth", s.layout.cellWidth},
                     {"cellHeight", s.layout.cellHeight},
                     {"views", views}}});
  events.push_back({EventKind::ModeChanged, {{"mode", modeName(s.mode)}}});
  events.push_back({EventKind::CameraChanged, {{"camera", lang::cameraToJson(s.camera)}}});
  for (const auto& [name, f] : s.datasets) {
    events.push_back({EventKind::DatasetAdded, {{"name", name}, {"dims", f->dims()}, {"axisNames", f->axisNames()}}});
  }
  for (const auto& v : s.views) {
    const json vj = lang::viewToJson(v);
    events.push_back({EventKind::ViewAdded, {{"viewId", v.id}, {"view", vj}}});
    if (!v.isoLevels.empty()) events.push_back({EventKind::IsoChanged, {{"viewId", v.id}, {"levels", v.isoLevels}}});
    if (!v.cutPlanes.empty()) events.push_back({EventKind::CutChanged, {{"viewId", v.id}, {"planes", vj["cutPlanes"]}}});
    if (v.showColorbar) events.push_back({EventKind::ColorbarChanged, {{"viewId", v.id}, {"visible", true}}});
    if (v.showHistogram) {
      const Histogram h = histogram(derivedField(s, v), v.histBins);
      events.push_back({EventKind::HistogramComputed,
                        {{"viewId", v.id},
                         {"visible", true},
                         {"edges", h.binEdges},
                         {"counts", h.counts},
                         {"totalCounted", h.totalCounted}}});
    }
  }
  json delta = {{"type", "SceneDelta"}, {"sessionVersion", version_}, {"snapshot", true}, {"events", json::array()}};
  for (const auto& e : events) delta["events"].push_back(eventToJson(e));
  std::vector<Outgoing> out = {{Outgoing::Target::Sender, false, delta.dump()}};
  for (const auto& e : events) appendPayloads(e, Outgoing::Target::Sender, out);
  return out;
}

std::vector<Outgoing> SessionHost::apply(const msg::RequestRender& m) {
  if (!session_.findView(m.viewId)) return {errorMessage("unknown view: " + std::to_string(m.viewId), "render")};
  const std::size_t w = std::min(m.width, kMaxStreamSide), h = std::min(m.height, kMaxStreamSide);
  Image img;
  try {
    img = renderView(session_, m.viewId, w, h);
  } catch (const Error& e) {
    return {errorMessage(e.what(), "render")};
  }
  const std::string raw(img.pixels.begin(), img.pixels.end());
  json j = {{"type", "VolumeFrame"},
            {"viewId", m.viewId},
            {"sessionVersion", version_},
            {"image", {{"width", w}, {"height", h}, {"encoding", "rgba8-base64"}, {"data", base64Encode(raw)}}}};
  return {{Outgoing::Target::Sender, false, j.dump()}};
}

std::vector<Outgoing> SessionHost::commit(Session next, std::vector<Event> events) {
  session_ = std::move(next);
  ++version_;
  json delta = {{"type", "SceneDelta"}, {"sessionVersion", version_}, {"events", json::array()}};
  for (const auto& e : events) delta["events"].push_back(eventToJson(e));
  std::vector<Outgoing> out = {{Outgoing::Target::All, false, delta.dump()}};
  for (const auto& e : events) appendPayloads(e, Outgoing::Target::All, out);
  return out;
}

void SessionHost::appendPayloads(const Event& e, Outgoing::Target target, std::vector<Outgoing>& out) {
  if (!e.data.contains("viewId")) return;
  const int id = e.data.at("viewId").get<int>();
  const View* v = session_.findView(id);
  if (!v) return;
  try {
    if (e.kind == EventKind::IsoChanged) {
      const ScalarField f = derivedField(session_, *v);
      for (double level : v->isoLevels) {
        const TriangleMesh mesh = weldVertices(marchingCubes(f, level));
        json j = {{"type", "Mesh"},
                  {"viewId", id},
                  {"level", level},
                  {"binaryRef", ++binaryRef_},
                  {"vertexCount", mesh.vertexCount()},
                  {"triangleCount", mesh.triangleCount()}};
        out.push_back({target, false, j.dump()});
        out.push_back({target, true, encodeMeshFrame(mesh)});
      }
    } else if (e.kind == EventKind::CutChanged) {
      const ScalarField f = derivedField(session_, *v);
      for (std::size_t i = 0; i < v->cutPlanes.size(); ++i) {
        json j = {{"type", "SliceData"}, {"viewId", id}, {"planeIndex", i}};
        try {
          j["image"] = sliceJson(extractCutPlane(f, v->cutPlanes[i], 1.0 / minSpacing(f)));
        } catch (const EmptyGeometryError&) {
          j["image"] = nullptr;
        }
        out.push_back({target, false, j.dump()});
      }
    } else if (e.kind == EventKind::HistogramComputed && e.data.value("visible", false)) {
      json j = {{"type", "Histogram"}, {"viewId", id}, {"edges", e.data.at("edges")}, {"counts", e.data.at("counts")}};
      out.push_back({target, false, j.dump()});
    }
  } catch (const Error& err) {
    Outgoing o = errorMessage(err.what(), "render");
    o.target = target;
    out.push_back(std::move(o));
  }
}

}  // namespace viz::gateway
