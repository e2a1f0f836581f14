#include <algorithm>
#include <cmath>
#include <set>

#include "viz/errors.hpp"
#include "viz/session.hpp"

namespace viz {

const char* modeName(Mode m) {
  switch (m) {
    case Mode::Camera: return "camera";
    case Mode::Object: return "object";
    case Mode::Sync: return "sync";
  }
  return "?";
}

std::optional<Mode> modeFromName(const std::string& name) {
  if (name == "camera") return Mode::Camera;
  if (name == "object") return Mode::Object;
  if (name == "sync") return Mode::Sync;
  return std::nullopt;
}

RigidTransform View::placement() const {
  const Vec3 localCenter = objectOrigin - basePosition;
  return RigidTransform::aboutPivot(objectRotation, localCenter, basePosition + objectTranslation);
}

const View* Session::findView(int id) const {
  for (const auto& v : views) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

const ScalarField* Session::findDataset(const std::string& name) const {
  auto it = datasets.find(name);
  return it == datasets.end() ? nullptr : it->second.get();
}

bool operator==(const Session& a, const Session& b) {
  if (a.datasets.size() != b.datasets.size()) return false;
  for (auto ia = a.datasets.begin(), ib = b.datasets.begin(); ia != a.datasets.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (ia->second != ib->second && !(*ia->second == *ib->second)) return false;
  }
  return a.datasetLog == b.datasetLog && a.views == b.views && a.layout == b.layout && a.camera == b.camera &&
         a.cameraAuto == b.cameraAuto && a.mode == b.mode && a.nextViewId == b.nextViewId;
}

ScalarField deriveField(const ScalarField& source, const Derivation& derivation) {
  if (const auto* s = std::get_if<SliceSpec>(&derivation)) return slice(source, s->axis, s->index);
  if (const auto* p = std::get_if<ProjectionSpec>(&derivation)) return project(source, p->axis, p->reducer);
  return source;
}

ScalarField derivedField(const Session& session, const View& view) {
  const ScalarField* src = session.findDataset(view.sourceName);
  if (!src) throw ArgumentError("unknown dataset: " + view.sourceName);
  return deriveField(*src, view.derivation);
}

Vec3 basePositionFor(const Layout& layout, const Cell& cell) {
  return {static_cast<double>(cell.col) * layout.cellWidth, -static_cast<double>(cell.row) * layout.cellHeight, 0.0};
}

Cell nextFreeCell(const Session& session) {
  std::set<Cell> used;
  for (const auto& v : session.views) used.insert(v.cell);
  for (std::size_t k = 0;; ++k) {
    const Cell c{k / session.layout.cols, k % session.layout.cols};
    if (!used.count(c)) return c;
  }
}

Camera frameBox(const Aabb& box, double fovDegrees) {
  Camera cam;
  cam.verticalFovDegrees = fovDegrees;
  cam.focalPoint = box.center();
  const double radius = std::max(0.5 * norm(box.extent()), 1e-6);
  const double distance = 1.15 * radius / std::sin(degToRad(fovDegrees) * 0.5);
  cam.position = cam.focalPoint + normalized(Vec3{0.55, -1.0, 0.75}) * distance;
  cam.viewUp = {0.0, 0.0, 1.0};
  return cam;
}

AddViewResult addView(const Session& session, const std::string& sourceName, const Derivation& derivation,
                      std::optional<Cell> cell) {
  const ScalarField* src = session.findDataset(sourceName);
  if (!src) throw ArgumentError("unknown dataset: " + sourceName);
  const ScalarField derived = deriveField(*src, derivation);
  if (derived.rank() != 3) {
    throw DimensionError("view data must be 3D; " + sourceName + " yields " + std::to_string(derived.rank()) + "D");
  }
  Session out = session;
  const Cell target = cell.value_or(nextFreeCell(session));
  if (target.col >= session.layout.cols) throw RangeError("cell column outside the layout");
  for (const auto& v : session.views) {
    if (v.cell == target) {
      throw ArgumentError("cell (" + std::to_string(target.row) + "," + std::to_string(target.col) +
                          ") is occupied by view " + std::to_string(v.id));
    }
  }

  View v;
  v.id = out.nextViewId++;
  v.cell = target;
  v.sourceName = sourceName;
  v.derivation = derivation;
  const Aabb box = boundingBox(derived);
  v.basePosition = basePositionFor(session.layout, target);
  v.objectOrigin = box.center() + v.basePosition;

  const FieldStats st = stats(derived);
  double lo = st.min.value_or(0.0), hi = st.max.value_or(1.0);
  if (!(lo < hi)) {
    const double half = lo == 0.0 ? 0.5 : std::abs(lo) * 0.5;
    lo -= half;
    hi += half;
  }
  v.tf = TransferFunction::fromPalette("rainbow", lo, hi);

  if (out.cameraAuto && out.views.empty()) out.camera = frameBox(box);
  const int id = v.id;
  out.views.push_back(std::move(v));
  return {std::move(out), id};
}

Session removeView(const Session& session, int viewId) {
  Session out = session;
  auto it = std::find_if(out.views.begin(), out.views.end(), [viewId](const View& v) { return v.id == viewId; });
  if (it == out.views.end()) throw ArgumentError("unknown view: " + std::to_string(viewId));
  out.views.erase(it);
  return out;
}

Session setMode(const Session& session, Mode mode) {
  Session out = session;
  out.mode = mode;
  return out;
}

Session setLayout(const Session& session, const Layout& layout) {
  if (layout.cols < 1) throw ArgumentError("layout needs at least one column");
  if (!(layout.cellWidth > 0.0) || !(layout.cellHeight > 0.0) || !std::isfinite(layout.cellWidth) ||
      !std::isfinite(layout.cellHeight)) {
    throw ArgumentError("cell sizes must be positive");
  }
  for (const auto& v : session.views) {
    if (v.cell.col >= layout.cols) {
      throw RangeError("view " + std::to_string(v.id) + " sits in column " + std::to_string(v.cell.col) +
                       ", outside a " + std::to_string(layout.cols) + "-column layout");
    }
  }
  Session out = session;
  out.layout = layout;
  for (auto& v : out.views) {
    const Vec3 localCenter = v.objectOrigin - v.basePosition;
    v.basePosition = basePositionFor(layout, v.cell);
    v.objectOrigin = localCenter + v.basePosition;
  }
  return out;
}

std::size_t layoutRows(const Session& session) {
  std::size_t rows = 1;
  for (const auto& v : session.views) rows = std::max(rows, v.cell.row + 1);
  return rows;
}

std::size_t layoutCols(const Session& session) {
  std::size_t cols = 1;
  for (const auto& v : session.views) cols = std::max(cols, v.cell.col + 1);
  return cols;
}

}  // namespace viz
