#include "viz/viewlang.hpp"

namespace viz::lang {

using nlohmann::json;

namespace {

constexpr int kSessionSchemaVersion = 1;

json vecJson(const Vec3& v) { return {v.x, v.y, v.z}; }

Vec3 vecFrom(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

json quatJson(const Quat& q) { return {q.w, q.x, q.y, q.z}; }

Quat quatFrom(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(), j.at(3).get<double>()};
}

json derivationJson(const Derivation& d) {
  if (const auto* s = std::get_if<SliceSpec>(&d)) return {{"kind", "slice"}, {"axis", s->axis}, {"index", s->index}};
  if (const auto* p = std::get_if<ProjectionSpec>(&d)) {
    return {{"kind", "project"}, {"axis", p->axis}, {"reducer", reducerName(p->reducer)}};
  }
  return {{"kind", "none"}};
}

Derivation derivationFrom(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "none") return std::monostate{};
  if (kind == "slice") return SliceSpec{j.at("axis").get<std::size_t>(), j.at("index").get<std::size_t>()};
  if (kind == "project") {
    const auto r = reducerFromName(j.at("reducer").get<std::string>());
    if (!r) throw FormatError("unknown reducer in session document");
    return ProjectionSpec{j.at("axis").get<std::size_t>(), *r};
  }
  throw FormatError("unknown derivation kind: " + kind);
}

json tfJson(const TransferFunction& tf) {
  json colors = json::array(), opacity = json::array();
  for (const auto& c : tf.colorPoints) colors.push_back({c.scalar, c.color.r, c.color.g, c.color.b});
  for (const auto& o : tf.opacityPoints) opacity.push_back({o.scalar, o.alpha});
  return {{"palette", tf.paletteName}, {"colorPoints", colors}, {"opacityPoints", opacity}};
}

TransferFunction tfFrom(const json& j) {
  TransferFunction tf;
  tf.paletteName = j.at("palette").get<std::string>();
  for (const auto& c : j.at("colorPoints")) {
    tf.colorPoints.push_back({c.at(0).get<double>(), {c.at(1).get<double>(), c.at(2).get<double>(), c.at(3).get<double>()}});
  }
  for (const auto& o : j.at("opacityPoints")) tf.opacityPoints.push_back({o.at(0).get<double>(), o.at(1).get<double>()});
  tf.validate();
  return tf;
}

json planeJson(const CutPlane& p) {
  return {{"kind", p.kind == CutPlane::Kind::Axis ? "axis" : "oblique"},
          {"axis", p.axis},
          {"normal", vecJson(p.normal)},
          {"offset", p.offset}};
}

CutPlane planeFrom(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "axis") return CutPlane::axisAligned(j.at("axis").get<int>(), j.at("offset").get<double>());
  if (kind == "oblique") return CutPlane::oblique(vecFrom(j.at("normal")), j.at("offset").get<double>());
  throw FormatError("unknown cut plane kind: " + kind);
}

View viewFrom(const json& j) {
  View v;
  v.id = j.at("id").get<int>();
  v.cell = {j.at("row").get<std::size_t>(), j.at("col").get<std::size_t>()};
  v.sourceName = j.at("source").get<std::string>();
  v.derivation = derivationFrom(j.at("derivation"));
  v.showVolume = j.at("showVolume").get<bool>();
  v.isoLevels = j.at("isoLevels").get<std::vector<double>>();
  for (const auto& p : j.at("cutPlanes")) v.cutPlanes.push_back(planeFrom(p));
  v.tf = tfFrom(j.at("tf"));
  v.showColorbar = j.at("showColorbar").get<bool>();
  v.showHistogram = j.at("showHistogram").get<bool>();
  v.histBins = j.at("histBins").get<std::size_t>();
  v.basePosition = vecFrom(j.at("basePosition"));
  v.objectOrigin = vecFrom(j.at("objectOrigin"));
  v.objectRotation = quatFrom(j.at("objectRotation"));
  v.objectTranslation = vecFrom(j.at("objectTranslation"));
  return v;
}

}  // namespace

json viewToJson(const View& v) {
  json planes = json::array();
  for (const auto& p : v.cutPlanes) planes.push_back(planeJson(p));
  return {{"id", v.id},
          {"row", v.cell.row},
          {"col", v.cell.col},
          {"source", v.sourceName},
          {"derivation", derivationJson(v.derivation)},
          {"showVolume", v.showVolume},
          {"isoLevels", v.isoLevels},
          {"cutPlanes", planes},
          {"tf", tfJson(v.tf)},
          {"showColorbar", v.showColorbar},
          {"showHistogram", v.showHistogram},
          {"histBins", v.histBins},
          {"basePosition", vecJson(v.basePosition)},
          {"objectOrigin", vecJson(v.objectOrigin)},
          {"objectRotation", quatJson(v.objectRotation)},
          {"objectTranslation", vecJson(v.objectTranslation)}};
}

json cameraToJson(const Camera& c) {
  return {{"position", vecJson(c.position)},
          {"focalPoint", vecJson(c.focalPoint)},
          {"viewUp", vecJson(c.viewUp)},
          {"fov", c.verticalFovDegrees}};
}

Camera cameraFromJson(const json& j) {
  Camera c;
  c.position = vecFrom(j.at("position"));
  c.focalPoint = vecFrom(j.at("focalPoint"));
  c.viewUp = vecFrom(j.at("viewUp"));
  c.verticalFovDegrees = j.at("fov").get<double>();
  c.validate();
  return c;
}

json sessionToJson(const Session& s) {
  json views = json::array();
  for (const auto& v : s.views) views.push_back(viewToJson(v));
  return {{"schemaVersion", kSessionSchemaVersion},
          {"datasetLog", s.datasetLog},
          {"views", views},
          {"layout", {{"cols", s.layout.cols}, {"cellWidth", s.layout.cellWidth}, {"cellHeight", s.layout.cellHeight}}},
          {"camera", cameraToJson(s.camera)},
          {"cameraAuto", s.cameraAuto},
          {"mode", modeName(s.mode)},
          {"nextViewId", s.nextViewId}};
}

Session sessionFromJson(const json& doc, const EvalContext& ctx) {
  try {
    if (doc.at("schemaVersion").get<int>() != kSessionSchemaVersion) {
      throw FormatError("unsupported session schema version");
    }
    Session s;
    EvalContext replay = ctx;
    replay.observer = nullptr;
    for (const auto& line : doc.at("datasetLog")) {
      const auto text = line.get<std::string>();
      try {
        s = evaluate(s, parse(text), replay).session;
      } catch (const Error& e) {
        throw FormatError("replaying '" + text + "': " + e.what());
      }
    }
    const auto& l = doc.at("layout");
    s.layout = {l.at("cols").get<std::size_t>(), l.at("cellWidth").get<double>(), l.at("cellHeight").get<double>()};
    for (const auto& vj : doc.at("views")) {
      View v = viewFrom(vj);
      if (!s.findDataset(v.sourceName)) throw FormatError("view " + std::to_string(v.id) + " uses unknown dataset " + v.sourceName);
      s.views.push_back(std::move(v));
    }
    s.camera = cameraFromJson(doc.at("camera"));
    s.cameraAuto = doc.at("cameraAuto").get<bool>();
    const auto mode = modeFromName(doc.at("mode").get<std::string>());
    if (!mode) throw FormatError("unknown mode in session document");
    s.mode = *mode;
    s.nextViewId = doc.at("nextViewId").get<int>();
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed session document: ") + e.what());
  }
}

}  // namespace viz::lang
