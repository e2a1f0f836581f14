#include <algorithm>
#include <cmath>
#include <sstream>

#include "viz/io.hpp"
#include "viz/viewlang.hpp"

namespace viz::lang {

using nlohmann::json;

const char* eventKindName(EventKind k) {
  switch (k) {
    case EventKind::DatasetAdded: return "DatasetAdded";
    case EventKind::DatasetUpdated: return "DatasetUpdated";
    case EventKind::ViewAdded: return "ViewAdded";
    case EventKind::ViewRemoved: return "ViewRemoved";
    case EventKind::IsoChanged: return "IsoChanged";
    case EventKind::CutChanged: return "CutChanged";
    case EventKind::TransferFunctionChanged: return "TransferFunctionChanged";
    case EventKind::HistogramComputed: return "HistogramComputed";
    case EventKind::ColorbarChanged: return "ColorbarChanged";
    case EventKind::ModeChanged: return "ModeChanged";
    case EventKind::CameraChanged: return "CameraChanged";
    case EventKind::ObjectTransformChanged: return "ObjectTransformChanged";
    case EventKind::LayoutChanged: return "LayoutChanged";
    case EventKind::SnapshotRequested: return "SnapshotRequested";
    case EventKind::AnimationFrame: return "AnimationFrame";
  }
  return "?";
}

const char* evalErrorCodeName(EvalErrorCode c) {
  switch (c) {
    case EvalErrorCode::UnknownDataset: return "unknown-dataset";
    case EvalErrorCode::UnknownView: return "unknown-view";
    case EvalErrorCode::UnknownAxis: return "unknown-axis";
    case EvalErrorCode::MissingAxis: return "missing-axis";
    case EvalErrorCode::InvalidArgument: return "invalid-argument";
    case EvalErrorCode::NotThreeD: return "not-3d";
    case EvalErrorCode::CellOccupied: return "cell-occupied";
    case EvalErrorCode::Io: return "io";
    case EvalErrorCode::SourceDepth: return "source-depth";
  }
  return "?";
}

namespace {

constexpr std::int64_t kMaxHistBins = 4096;
constexpr std::int64_t kMaxAnimFrames = 10000;
constexpr std::int64_t kDefaultSnapshotWidth = 1920;
constexpr std::int64_t kDefaultSnapshotHeight = 1200;

[[noreturn]] void fail(EvalErrorCode code, const std::string& msg) { throw EvalError(code, msg); }

std::string axisText(const AxisRef& a) {
  if (const auto* s = std::get_if<std::string>(&a.value)) return *s;
  return std::to_string(std::get<std::int64_t>(a.value));
}

std::size_t resolveAxis(const ScalarField& f, const AxisRef& a, const std::string& what) {
  if (const auto* i = std::get_if<std::int64_t>(&a.value)) {
    if (*i < 0 || static_cast<std::size_t>(*i) >= f.rank()) {
      fail(EvalErrorCode::MissingAxis, what + " is " + std::to_string(f.rank()) + "D and has no axis " + std::to_string(*i));
    }
    return static_cast<std::size_t>(*i);
  }
  const auto& label = std::get<std::string>(a.value);
  if (auto idx = f.axisByName(label)) return *idx;
  const auto known = defaultAxisNames(kMaxAxes);
  if (std::find(known.begin(), known.end(), label) != known.end()) {
    fail(EvalErrorCode::MissingAxis, what + " is " + std::to_string(f.rank()) + "D and has no axis " + label);
  }
  std::string names;
  for (const auto& n : f.axisNames()) names += (names.empty() ? "" : "|") + n;
  fail(EvalErrorCode::UnknownAxis, "unknown axis " + label + " for " + what + "; expected " + names);
}

int worldAxis(const AxisRef& a) {
  if (const auto* i = std::get_if<std::int64_t>(&a.value)) {
    if (*i >= 0 && *i <= 2) return static_cast<int>(*i);
  } else {
    const auto& s = std::get<std::string>(a.value);
    if (s == "x") return 0;
    if (s == "y") return 1;
    if (s == "z") return 2;
  }
  fail(EvalErrorCode::UnknownAxis, "unknown world axis " + axisText(a) + "; expected x|y|z");
}

std::size_t checkedIndex(std::int64_t i, const ScalarField& f, std::size_t axis, const std::string& what) {
  if (i < 0 || static_cast<std::size_t>(i) >= f.dims()[axis]) {
    fail(EvalErrorCode::InvalidArgument, "index " + std::to_string(i) + " outside axis " + f.axisNames()[axis] +
                                             " of " + what + " (0.." + std::to_string(f.dims()[axis] - 1) + ")");
  }
  return static_cast<std::size_t>(i);
}

void checkFinite(double v, const char* what) {
  if (!std::isfinite(v)) fail(EvalErrorCode::InvalidArgument, std::string(what) + " must be finite");
}

json dimsJson(const ScalarField& f) { return {{"dims", f.dims()}, {"axisNames", f.axisNames()}}; }

class Evaluator {
 public:
  Evaluator(const Session& s, const EvalContext& ctx) : ctx_(ctx) { r_.session = s; }

  EvalResult run(const Command& c) {
    std::visit([this](const auto& cmd) { apply(cmd); }, c);
    return std::move(r_);
  }

 private:
  Session& s() { return r_.session; }

  void emit(EventKind k, json data) { r_.events.push_back({k, std::move(data)}); }

  void logDataset(const Command& c) { s().datasetLog.push_back(format(c)); }

  std::shared_ptr<const ScalarField> dataset(const std::string& name) {
    auto it = s().datasets.find(name);
    if (it == s().datasets.end()) fail(EvalErrorCode::UnknownDataset, "unknown dataset: " + name);
    return it->second;
  }

  void putDataset(const std::string& name, ScalarField f) {
    const bool existed = s().datasets.count(name) > 0;
    json data = dimsJson(f);
    data["name"] = name;
    s().datasets[name] = std::make_shared<const ScalarField>(std::move(f));
    emit(existed ? EventKind::DatasetUpdated : EventKind::DatasetAdded, std::move(data));
  }

  View& view(int id) {
    for (auto& v : s().views) {
      if (v.id == id) return v;
    }
    fail(EvalErrorCode::UnknownView, "unknown view: " + std::to_string(id));
  }

  std::vector<View*> targets(const ViewTarget& t) {
    std::vector<View*> out;
    if (t.id) {
      if (*t.id < 0 || *t.id > INT32_MAX) fail(EvalErrorCode::UnknownView, "unknown view: " + std::to_string(*t.id));
      out.push_back(&view(static_cast<int>(*t.id)));
      return out;
    }
    for (auto& v : s().views) out.push_back(&v);
    if (out.empty()) fail(EvalErrorCode::UnknownView, "view=all matches no views");
    return out;
  }

  ScalarField derived(const View& v) { return derivedField(s(), v); }

  // Datasets -----------------------------------------------------------------

  void apply(const cmd::Load& c) {
    std::filesystem::path p = c.path;
    if (p.is_relative() && !ctx_.dataRoot.empty()) p = ctx_.dataRoot / p;
    ScalarField f;
    try {
      f = loadField(p);
    } catch (const Error& e) {
      fail(EvalErrorCode::Io, e.what());
    }
    putDataset(c.name, std::move(f));
    logDataset(c);
  }

  void apply(const cmd::Synth& c) {
    std::map<std::string, double> params;
    for (const auto& [k, v] : c.params) {
      if (params.count(k)) fail(EvalErrorCode::InvalidArgument, "duplicate parameter " + k);
      params[k] = v;
    }
    auto take = [&](const std::string& key, double def, double lo, double hi) {
      auto it = params.find(key);
      if (it == params.end()) return static_cast<std::uint64_t>(def);
      const double v = it->second;
      params.erase(it);
      if (std::floor(v) != v || v < lo || v > hi) {
        fail(EvalErrorCode::InvalidArgument, key + " must be an integer in [" + formatNumber(lo) + ", " +
                                                 formatNumber(hi) + "]");
      }
      return static_cast<std::uint64_t>(v);
    };
    constexpr double kMaxSeed = 9007199254740992.0;
    ScalarField f;
    if (c.generator == "qcd_lumps") {
      const std::vector<std::size_t> dims = {take("nx", 16, 1, 4096), take("ny", 16, 1, 4096), take("nz", 16, 1, 4096),
                                             take("nt", 16, 1, 4096)};
      const auto lumps = take("lumps", 12, 1, 10000);
      const auto seed = take("seed", 1, 0, kMaxSeed);
      rejectLeftovers(params, c.generator);
      checkVoxels(dims);
      f = synthQcdLumps(dims, lumps, seed);
    } else if (c.generator == "meteorite") {
      const std::vector<std::size_t> dims = {take("nx", 64, 4, 4096), take("ny", 64, 4, 4096), take("nz", 64, 4, 4096)};
      const auto seed = take("seed", 1, 0, kMaxSeed);
      rejectLeftovers(params, c.generator);
      checkVoxels(dims);
      f = synthMeteoritePhantom(dims, seed);
    } else {
      fail(EvalErrorCode::InvalidArgument, "unknown generator: " + c.generator + "; expected qcd_lumps|meteorite");
    }
    putDataset(c.name, std::move(f));
    logDataset(c);
  }

  static void rejectLeftovers(const std::map<std::string, double>& params, const std::string& gen) {
    if (!params.empty()) fail(EvalErrorCode::InvalidArgument, "unknown parameter " + params.begin()->first + " for " + gen);
  }

  static void checkVoxels(const std::vector<std::size_t>& dims) {
    std::uint64_t n = 1;
    for (auto d : dims) n *= d;
    if (n > kMaxVoxels) fail(EvalErrorCode::InvalidArgument, "field too large: " + std::to_string(n) + " voxels");
  }

  void apply(const cmd::Slice& c) {
    const auto srcPtr = dataset(c.source);
    const ScalarField& src = *srcPtr;
    const std::size_t axis = resolveAxis(src, c.axis, c.source);
    if (src.rank() < 2) fail(EvalErrorCode::InvalidArgument, "cannot slice a 1D dataset");
    if (const auto* r = std::get_if<IndexRange>(&c.index)) {
      if (r->first > r->last) fail(EvalErrorCode::InvalidArgument, "index range must satisfy first <= last");
      checkedIndex(r->first, src, axis, c.source);
      checkedIndex(r->last, src, axis, c.source);
      for (std::int64_t i = r->first; i <= r->last; ++i) {
        putDataset(c.name + std::to_string(i), slice(src, axis, static_cast<std::size_t>(i)));
      }
    } else {
      const auto i = checkedIndex(std::get<std::int64_t>(c.index), src, axis, c.source);
      putDataset(c.name, slice(src, axis, i));
    }
    logDataset(c);
  }

  void apply(const cmd::Project& c) {
    const auto srcPtr = dataset(c.source);
    const ScalarField& src = *srcPtr;
    const std::size_t axis = resolveAxis(src, c.axis, c.source);
    if (src.rank() < 2) fail(EvalErrorCode::InvalidArgument, "cannot project a 1D dataset");
    putDataset(c.name, project(src, axis, c.reducer));
    logDataset(c);
  }

  void apply(const cmd::Filter& c) {
    const auto src = dataset(c.source);
    if (c.lo) checkFinite(*c.lo, "min");
    if (c.hi) checkFinite(*c.hi, "max");
    if (c.lo && c.hi && *c.lo > *c.hi) fail(EvalErrorCode::InvalidArgument, "filter needs min <= max");
    putDataset(c.source, filterRange(*src, c.lo, c.hi));
    logDataset(c);
  }

  // Views --------------------------------------------------------------------

  void apply(const cmd::ViewAdd& c) {
    const auto srcPtr = dataset(c.source);
    const ScalarField& src = *srcPtr;
    Derivation d;
    if (const auto* sd = std::get_if<SliceDerivation>(&c.derivation)) {
      const auto axis = resolveAxis(src, sd->axis, c.source);
      d = SliceSpec{axis, checkedIndex(sd->index, src, axis, c.source)};
    } else if (const auto* pd = std::get_if<ProjectDerivation>(&c.derivation)) {
      d = ProjectionSpec{resolveAxis(src, pd->axis, c.source), pd->reducer};
    }
    const std::size_t derivedRank = std::holds_alternative<std::monostate>(d) ? src.rank() : src.rank() - 1;
    if (derivedRank != 3) {
      fail(EvalErrorCode::NotThreeD,
           "view data must be 3D; " + c.source + " yields " + std::to_string(derivedRank) + "D");
    }
    std::optional<Cell> cell;
    if (c.cell) {
      if (c.cell->row < 0 || c.cell->col < 0) fail(EvalErrorCode::InvalidArgument, "cell indices must be >= 0");
      if (static_cast<std::uint64_t>(c.cell->col) >= s().layout.cols) {
        fail(EvalErrorCode::InvalidArgument, "cell column " + std::to_string(c.cell->col) + " outside a " +
                                                 std::to_string(s().layout.cols) + "-column layout");
      }
      cell = Cell{static_cast<std::size_t>(c.cell->row), static_cast<std::size_t>(c.cell->col)};
      for (const auto& v : s().views) {
        if (v.cell == *cell) {
          fail(EvalErrorCode::CellOccupied, "cell (" + std::to_string(c.cell->row) + "," + std::to_string(c.cell->col) +
                                                ") is occupied by view " + std::to_string(v.id));
        }
      }
    }
    const Camera before = s().camera;
    auto added = addView(s(), c.source, d, cell);
    r_.session = std::move(added.session);
    View& v = view(added.viewId);
    if (c.volume) v.showVolume = *c.volume;
    emit(EventKind::ViewAdded, {{"viewId", v.id}, {"view", viewToJson(v)}});
    if (!(s().camera == before)) emit(EventKind::CameraChanged, {{"camera", cameraToJson(s().camera)}});
  }

  void apply(const cmd::ViewRemove& c) {
    if (c.view < 0 || c.view > INT32_MAX) fail(EvalErrorCode::UnknownView, "unknown view: " + std::to_string(c.view));
    const int id = static_cast<int>(c.view);
    view(id);
    r_.session = removeView(s(), id);
    emit(EventKind::ViewRemoved, {{"viewId", id}});
  }

  void apply(const cmd::IsoAdd& c) {
    checkFinite(c.level, "level");
    for (View* v : targets(c.view)) {
      if (std::find(v->isoLevels.begin(), v->isoLevels.end(), c.level) == v->isoLevels.end()) {
        v->isoLevels.push_back(c.level);
      }
      emit(EventKind::IsoChanged, {{"viewId", v->id}, {"levels", v->isoLevels}});
    }
  }

  void apply(const cmd::IsoRemove& c) {
    for (View* v : targets(c.view)) {
      if (c.level) {
        auto it = std::find(v->isoLevels.begin(), v->isoLevels.end(), *c.level);
        if (it == v->isoLevels.end()) {
          fail(EvalErrorCode::InvalidArgument,
               "view " + std::to_string(v->id) + " has no isosurface at " + formatNumber(*c.level));
        }
        v->isoLevels.erase(it);
      } else {
        v->isoLevels.clear();
      }
      emit(EventKind::IsoChanged, {{"viewId", v->id}, {"levels", v->isoLevels}});
    }
  }

  void apply(const cmd::CutAdd& c) {
    if (c.offset) checkFinite(*c.offset, "offset");
    for (View* v : targets(c.view)) {
      const ScalarField f = derived(*v);
      const Vec3 mid = boundingBox(f).center();
      CutPlane plane;
      if (c.axis) {
        const auto axis = resolveAxis(f, *c.axis, "view " + std::to_string(v->id));
        plane = CutPlane::axisAligned(static_cast<int>(axis), c.offset.value_or(mid[axis]));
      } else {
        const Vec3 n = *c.normal;
        const double len = norm(n);
        if (!std::isfinite(len) || !(len > 1e-12)) fail(EvalErrorCode::InvalidArgument, "cut normal must be non-zero");
        const Vec3 u = n / len;
        plane = CutPlane::oblique(u, c.offset.value_or(dot(u, mid)));
      }
      v->cutPlanes.push_back(plane);
      emitCuts(*v);
    }
  }

  void apply(const cmd::CutRemove& c) {
    for (View* v : targets(c.view)) {
      if (c.index) {
        if (*c.index < 0 || static_cast<std::uint64_t>(*c.index) >= v->cutPlanes.size()) {
          fail(EvalErrorCode::InvalidArgument, "view " + std::to_string(v->id) + " has no cut plane " +
                                                   std::to_string(*c.index));
        }
        v->cutPlanes.erase(v->cutPlanes.begin() + *c.index);
      } else {
        v->cutPlanes.clear();
      }
      emitCuts(*v);
    }
  }

  void emitCuts(const View& v) {
    json planes = json::array();
    for (const auto& p : v.cutPlanes) planes.push_back(cutPlaneJson(p));
    emit(EventKind::CutChanged, {{"viewId", v.id}, {"planes", std::move(planes)}});
  }

  static json cutPlaneJson(const CutPlane& p) {
    const Vec3 n = p.unitNormal();
    return {{"kind", p.kind == CutPlane::Kind::Axis ? "axis" : "oblique"},
            {"axis", p.axis},
            {"normal", {n.x, n.y, n.z}},
            {"offset", p.offset}};
  }

  void setTf(View& v, TransferFunction tf) {
    try {
      tf.validate();
    } catch (const Error& e) {
      fail(EvalErrorCode::InvalidArgument, e.what());
    }
    v.tf = std::move(tf);
    emit(EventKind::TransferFunctionChanged, {{"viewId", v.id}, {"transferFunction", viewToJson(v)["tf"]}});
  }

  void apply(const cmd::PaletteSet& c) {
    if (!paletteStops(c.name)) {
      std::string names;
      for (const auto& n : paletteNames()) names += (names.empty() ? "" : "|") + n;
      fail(EvalErrorCode::InvalidArgument, "unknown palette: " + c.name + "; expected " + names);
    }
    for (View* v : targets(c.view)) {
      TransferFunction tf = TransferFunction::fromPalette(c.name, v->tf.lo(), v->tf.hi());
      tf.opacityPoints = v->tf.opacityPoints;
      setTf(*v, std::move(tf));
    }
  }

  void apply(const cmd::OpacitySet& c) {
    std::vector<OpacityPoint> pts;
    for (const auto& [scalar, alpha] : c.points) {
      checkFinite(scalar, "opacity scalar");
      pts.push_back({scalar, alpha});
    }
    for (View* v : targets(c.view)) {
      TransferFunction tf = v->tf;
      tf.opacityPoints = pts;
      setTf(*v, std::move(tf));
    }
  }

  void apply(const cmd::RangeSet& c) {
    checkFinite(c.lo, "min");
    checkFinite(c.hi, "max");
    if (!(c.lo < c.hi)) fail(EvalErrorCode::InvalidArgument, "range needs min < max");
    for (View* v : targets(c.view)) {
      const double oldLo = v->tf.lo(), oldHi = v->tf.hi();
      TransferFunction tf = TransferFunction::fromPalette(v->tf.paletteName, c.lo, c.hi);
      tf.opacityPoints.clear();
      for (const auto& p : v->tf.opacityPoints) {
        const double t = (p.scalar - oldLo) / (oldHi - oldLo);
        tf.opacityPoints.push_back({c.lo + t * (c.hi - c.lo), p.alpha});
      }
      setTf(*v, std::move(tf));
    }
  }

  void apply(const cmd::HistShow& c) {
    if (c.bins < 0 || c.bins > kMaxHistBins) {
      fail(EvalErrorCode::InvalidArgument, "bins must lie in [0, " + std::to_string(kMaxHistBins) + "]");
    }
    for (View* v : targets(c.view)) {
      if (c.bins == 0) {
        v->showHistogram = false;
        emit(EventKind::HistogramComputed, {{"viewId", v->id}, {"visible", false}});
        continue;
      }
      v->showHistogram = true;
      v->histBins = static_cast<std::size_t>(c.bins);
      const Histogram h = histogram(derived(*v), v->histBins);
      emit(EventKind::HistogramComputed, {{"viewId", v->id},
                                          {"visible", true},
                                          {"edges", h.binEdges},
                                          {"counts", h.counts},
                                          {"totalCounted", h.totalCounted}});
    }
  }

  void apply(const cmd::ColorbarShow& c) {
    for (View* v : targets(c.view)) {
      v->showColorbar = c.visible;
      emit(EventKind::ColorbarChanged, {{"viewId", v->id}, {"visible", c.visible}});
    }
  }

  void apply(const cmd::ModeSet& c) {
    r_.session = setMode(s(), c.mode);
    emit(EventKind::ModeChanged, {{"mode", modeName(c.mode)}});
  }

  void apply(const cmd::CameraSet& c) {
    Camera cam = s().camera;
    if (c.position) cam.position = *c.position;
    if (c.focal) cam.focalPoint = *c.focal;
    if (c.up) cam.viewUp = *c.up;
    if (c.fov) cam.verticalFovDegrees = *c.fov;
    try {
      cam.validate();
    } catch (const Error& e) {
      fail(EvalErrorCode::InvalidArgument, e.what());
    }
    s().camera = cam;
    s().cameraAuto = false;
    emit(EventKind::CameraChanged, {{"camera", cameraToJson(cam)}});
  }

  void apply(const cmd::Anim& c) {
    checkFinite(c.degrees, "degrees");
    if (c.frames < 1 || c.frames > kMaxAnimFrames) {
      fail(EvalErrorCode::InvalidArgument, "frames must lie in [1, " + std::to_string(kMaxAnimFrames) + "]");
    }
    AnimSpec spec{c.kind, worldAxis(c.axis), c.degrees, c.frames};
    const Session start = s();
    AnimResult res = animate(start, spec);
    for (const auto& f : res.frames) {
      json transforms = json::array();
      for (const auto& t : f.transforms) transforms.push_back(transformJson(t));
      emit(EventKind::AnimationFrame,
           {{"frame", f.frame}, {"frames", c.frames}, {"camera", cameraToJson(f.camera)}, {"transforms", transforms}});
    }
    r_.session = std::move(res.session);
    r_.frames = std::move(res.frames);
    if (!(s().camera == start.camera)) emit(EventKind::CameraChanged, {{"camera", cameraToJson(s().camera)}});
    for (std::size_t i = 0; i < s().views.size(); ++i) {
      const View& v = s().views[i];
      if (!(v.objectRotation == start.views[i].objectRotation)) {
        emit(EventKind::ObjectTransformChanged,
             {{"viewId", v.id}, {"transform", transformJson({v.id, v.objectRotation, v.objectTranslation})}});
      }
    }
  }

  static json transformJson(const ViewTransform& t) {
    return {{"viewId", t.viewId},
            {"rotation", {t.rotation.w, t.rotation.x, t.rotation.y, t.rotation.z}},
            {"translation", {t.translation.x, t.translation.y, t.translation.z}}};
  }

  void apply(const cmd::Snapshot& c) {
    const std::int64_t w = c.size ? c.size->width : kDefaultSnapshotWidth;
    const std::int64_t h = c.size ? c.size->height : kDefaultSnapshotHeight;
    if (w < 1 || h < 1 || w > static_cast<std::int64_t>(kMaxCompositeWidth) ||
        h > static_cast<std::int64_t>(kMaxCompositeHeight)) {
      fail(EvalErrorCode::InvalidArgument, "snapshot size must be between 1x1 and " +
                                               std::to_string(kMaxCompositeWidth) + "x" +
                                               std::to_string(kMaxCompositeHeight));
    }
    if (c.path.empty()) fail(EvalErrorCode::InvalidArgument, "snapshot path is empty");
    emit(EventKind::SnapshotRequested,
         {{"path", c.path}, {"width", w}, {"height", h}, {"explicitSize", c.size.has_value()}});
  }

  void apply(const cmd::Source& c) {
    if (ctx_.sourceDepth + 1 > kMaxSourceDepth) {
      fail(EvalErrorCode::SourceDepth, "source nesting deeper than " + std::to_string(kMaxSourceDepth));
    }
    std::filesystem::path p = c.path;
    if (p.is_relative() && !ctx_.scriptDir.empty()) p = ctx_.scriptDir / p;
    std::string text;
    try {
      text = readFile(p);
    } catch (const Error& e) {
      fail(EvalErrorCode::Io, e.what());
    }
    EvalContext nested = ctx_;
    nested.scriptDir = p.parent_path();
    nested.sourceDepth = ctx_.sourceDepth + 1;
    ScriptResult sr = runScript(s(), text, nested, p.string());
    if (sr.aborted) {
      const LineError& e = sr.errors.front();
      fail(EvalErrorCode::InvalidArgument, e.file + ":" + std::to_string(e.line) + ": " + e.message);
    }
    r_.session = std::move(sr.session);
    for (auto& e : sr.events) r_.events.push_back(std::move(e));
    r_.nestedErrors = std::move(sr.errors);
  }

  void apply(const cmd::LayoutSet& c) {
    Layout l = s().layout;
    if (c.cols) {
      if (*c.cols < 1 || *c.cols > 1024) fail(EvalErrorCode::InvalidArgument, "cols must lie in [1, 1024]");
      l.cols = static_cast<std::size_t>(*c.cols);
    }
    if (c.cellWidth) l.cellWidth = *c.cellWidth;
    if (c.cellHeight) l.cellHeight = *c.cellHeight;
    try {
      r_.session = setLayout(s(), l);
    } catch (const Error& e) {
      fail(EvalErrorCode::InvalidArgument, e.what());
    }
    json views = json::array();
    for (const auto& v : s().views) {
      views.push_back({{"viewId", v.id},
                       {"row", v.cell.row},
                       {"col", v.cell.col},
                       {"basePosition", {v.basePosition.x, v.basePosition.y, v.basePosition.z}}});
    }
    emit(EventKind::LayoutChanged,
         {{"cols", l.cols}, {"cellWidth", l.cellWidth}, {"cellHeight", l.cellHeight}, {"views", views}});
  }

  const EvalContext& ctx_;
  EvalResult r_;
};

}  // namespace

EvalResult evaluate(const Session& session, const Command& command, const EvalContext& ctx) {
  try {
    return Evaluator(session, ctx).run(command);
  } catch (const EvalError&) {
    throw;
  } catch (const DimensionError& e) {
    throw EvalError(EvalErrorCode::NotThreeD, e.what());
  } catch (const Error& e) {
    throw EvalError(EvalErrorCode::InvalidArgument, e.what());
  }
}

ScriptResult runScript(const Session& session, const std::string& text, const EvalContext& ctx,
                       const std::string& fileLabel) {
  ScriptResult out;
  out.session = session;
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    try {
      const auto cmd = parseLine(line, lineNo);
      if (!cmd) continue;
      EvalResult r = evaluate(out.session, *cmd, ctx);
      for (auto& e : r.nestedErrors) out.errors.push_back(std::move(e));
      // Lines of a sourced file were already reported to the observer.
      if (ctx.observer && !std::holds_alternative<cmd::Source>(*cmd)) ctx.observer(r);
      out.session = std::move(r.session);
      for (auto& e : r.events) out.events.push_back(std::move(e));
    } catch (const ParseError& e) {
      out.errors.push_back({fileLabel, lineNo, e.position().column, e.what()});
    } catch (const EvalError& e) {
      // Runaway nesting unwinds to the outermost script.
      if (e.code() == EvalErrorCode::SourceDepth && ctx.sourceDepth > 0) throw;
      out.errors.push_back({fileLabel, lineNo, 1, std::string(evalErrorCodeName(e.code())) + ": " + e.what()});
    }
    if (ctx.strict && !out.errors.empty()) {
      out.aborted = true;
      break;
    }
  }
  return out;
}

}  // namespace viz::lang
