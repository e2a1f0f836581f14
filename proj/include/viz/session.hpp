#pragma once

// Multiview session state and the operations that mutate it.
//
// Every operation takes a session by const reference and returns a new one:
// a failed operation leaves the caller's session untouched.
//
// Layout: a view in cell (row, col) is translated by
//   basePosition = (col * cellWidth, -row * cellHeight, 0)
// so views tile the xy plane left to right, top to bottom. Each view's
// object rotates about objectOrigin, the centre of its dataset's bounding
// box in world space. The shared camera is expressed relative to a view's
// basePosition: every tile is rendered with the same relative viewpoint.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "viz/field.hpp"
#include "viz/geometry.hpp"
#include "viz/math.hpp"
#include "viz/render.hpp"

namespace viz {

enum class Mode { Camera, Object, Sync };

const char* modeName(Mode m);
std::optional<Mode> modeFromName(const std::string& name);

struct SliceSpec {
  std::size_t axis = 0;
  std::size_t index = 0;
  friend bool operator==(const SliceSpec&, const SliceSpec&) = default;
};

struct ProjectionSpec {
  std::size_t axis = 0;
  Reducer reducer = Reducer::Max;
  friend bool operator==(const ProjectionSpec&, const ProjectionSpec&) = default;
};

using Derivation = std::variant<std::monostate, SliceSpec, ProjectionSpec>;

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct View {
  int id = 0;
  Cell cell;
  std::string sourceName;
  Derivation derivation;
  bool showVolume = true;
  std::vector<double> isoLevels;
  std::vector<CutPlane> cutPlanes;
  TransferFunction tf;
  bool showColorbar = false;
  bool showHistogram = false;
  std::size_t histBins = 64;
  Vec3 basePosition;
  Vec3 objectOrigin;
  Quat objectRotation;
  Vec3 objectTranslation;

  /// Local (dataset) to world placement.
  RigidTransform placement() const;
  friend bool operator==(const View&, const View&) = default;
};

struct Layout {
  std::size_t cols = 4;
  double cellWidth = 20.0;
  double cellHeight = 20.0;
  friend bool operator==(const Layout&, const Layout&) = default;
};

struct Session {
  std::map<std::string, std::shared_ptr<const ScalarField>> datasets;
  /// Canonical commands that produced the datasets, in order; replaying
  /// them rebuilds `datasets`.
  std::vector<std::string> datasetLog;
  std::vector<View> views;
  Layout layout;
  Camera camera;
  /// Camera is re-framed when the first view is added until the user moves it.
  bool cameraAuto = true;
  Mode mode = Mode::Camera;
  int nextViewId = 0;

  const View* findView(int id) const;
  const ScalarField* findDataset(const std::string& name) const;

  friend bool operator==(const Session& a, const Session& b);
};

/// Dataset of a view after its derivation (slice/projection) is applied.
ScalarField derivedField(const Session& session, const View& view);
ScalarField deriveField(const ScalarField& source, const Derivation& derivation);

/// First free cell in row-major order.
Cell nextFreeCell(const Session& session);
Vec3 basePositionFor(const Layout& layout, const Cell& cell);

struct AddViewResult {
  Session session;
  int viewId;
};

/// Errors: unknown dataset (ArgumentError), occupied cell (ArgumentError),
/// derived data not 3D (DimensionError).
AddViewResult addView(const Session& session, const std::string& sourceName, const Derivation& derivation,
                      std::optional<Cell> cell = std::nullopt);
Session removeView(const Session& session, int viewId);
Session setMode(const Session& session, Mode mode);
Session setLayout(const Session& session, const Layout& layout);

struct PointerEvent {
  enum class Kind { RotateDrag, PanDrag, ZoomDrag };
  Kind kind = Kind::RotateDrag;
  double dx = 0.0;
  double dy = 0.0;
  std::optional<int> targetView;
};

const char* pointerKindName(PointerEvent::Kind k);
std::optional<PointerEvent::Kind> pointerKindFromName(const std::string& name);

inline constexpr double kMaxElevationDegrees = 89.0;

/// Camera mode moves the shared camera; Object mode moves the target view's
/// object; Sync mode applies the same increment to every view's object, each
/// about its own origin.
Session handlePointer(const Session& session, const PointerEvent& ev);

struct PlacedView {
  int viewId = 0;
  RigidTransform placement;
  std::array<Vec3, 8> volumeCorners;  // world-space corners of the dataset box
  std::vector<TriangleMesh> isoMeshes;
  struct PlaneFrame {
    Vec3 origin, u, v;  // world-space origin and full-extent edge vectors
  };
  std::vector<PlaneFrame> cutFrames;
};

std::vector<PlacedView> worldAssembly(const Session& session);

struct AnimSpec {
  enum class Kind { Rotate, Orbit };
  Kind kind = Kind::Rotate;
  int axis = 2;  // world axis 0/1/2
  double degrees = 360.0;
  std::int64_t frames = 1;
};

struct ViewTransform {
  int viewId;
  Quat rotation;
  Vec3 translation;
  friend bool operator==(const ViewTransform&, const ViewTransform&) = default;
};

struct FrameState {
  std::int64_t frame = 0;
  Camera camera;
  std::vector<ViewTransform> transforms;
  friend bool operator==(const FrameState&, const FrameState&) = default;
};

struct AnimResult {
  Session session;  // at the final frame
  std::vector<FrameState> frames;
};

/// Rotate: camera orbit in Camera mode, rotation of every object about its
/// own origin in Object/Sync mode. Orbit: camera orbit in any mode. Frame k
/// (1-based) is at k * degrees / frames from the starting state.
AnimResult animate(const Session& session, const AnimSpec& spec);
Session applyFrame(const Session& session, const FrameState& frame);

/// Camera looking at `box` from a fixed three-quarter direction.
Camera frameBox(const Aabb& box, double fovDegrees = 30.0);

// Rendering ---------------------------------------------------------------

inline constexpr Rgb kViewBackground{0.06, 0.06, 0.08};

/// Deterministic render of one view's enabled content.
Image renderView(const Session& session, int viewId, std::size_t width, std::size_t height);

/// All views composited into one image. The grid spans the occupied rows and
/// columns, so a single view fills the image.
Image renderComposite(const Session& session, std::size_t width, std::size_t height);

/// Grid rows and columns used by renderComposite (at least 1 each).
std::size_t layoutRows(const Session& session);
std::size_t layoutCols(const Session& session);

}  // namespace viz
