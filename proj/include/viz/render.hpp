#pragma once

// CPU rendering: transfer functions, emission-absorption ray casting, mesh
// rasterization, colorbar/histogram overlays and multiview composition.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "viz/field.hpp"
#include "viz/geometry.hpp"
#include "viz/math.hpp"

namespace viz {

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Rgba {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  double a = 0.0;
  friend bool operator==(const Rgba&, const Rgba&) = default;
};

struct ColorPoint {
  double scalar;
  Rgb color;
  friend bool operator==(const ColorPoint&, const ColorPoint&) = default;
};

struct OpacityPoint {
  double scalar;
  double alpha;
  friend bool operator==(const OpacityPoint&, const OpacityPoint&) = default;
};

/// Piecewise-linear scalar -> colour and scalar -> opacity maps. Alpha is
/// opacity per world unit of ray length.
struct TransferFunction {
  std::vector<ColorPoint> colorPoints;
  std::vector<OpacityPoint> opacityPoints;
  std::string paletteName;

  /// Named palette stretched over [lo, hi] with a linear 0 -> `maxAlpha` ramp.
  static TransferFunction fromPalette(const std::string& palette, double lo, double hi, double maxAlpha = 0.5);

  /// Opacity `alpha` inside [lo, hi], zero outside.
  static std::vector<OpacityPoint> window(double lo, double hi, double alpha);

  double lo() const { return colorPoints.front().scalar; }
  double hi() const { return colorPoints.back().scalar; }

  void validate() const;
  friend bool operator==(const TransferFunction&, const TransferFunction&) = default;
};

/// Built-in palettes: "gray", "rainbow", "heat". Stops are on [0, 1].
const std::vector<std::string>& paletteNames();
std::optional<std::vector<ColorPoint>> paletteStops(const std::string& name);

Rgba tfEval(const TransferFunction& tf, double scalar);

struct Camera {
  Vec3 position{0, 0, 10};
  Vec3 focalPoint{0, 0, 0};
  Vec3 viewUp{0, 1, 0};
  double verticalFovDegrees = 30.0;

  Vec3 forward() const { return normalized(focalPoint - position); }
  Vec3 right() const { return normalized(cross(forward(), viewUp)); }
  /// Orthonormalized up vector.
  Vec3 up() const { return cross(right(), forward()); }
  double distance() const { return norm(focalPoint - position); }

  /// Unit ray direction through the centre of pixel (px, py).
  Vec3 rayDirection(double px, double py, std::size_t width, std::size_t height) const;

  void validate() const;
  friend bool operator==(const Camera&, const Camera&) = default;
};

/// Row-major RGBA8 image with a top-left origin.
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(std::size_t w, std::size_t h, Rgb fill = {});

  std::uint8_t* at(std::size_t x, std::size_t y) { return &pixels[4 * (x + y * width)]; }
  const std::uint8_t* at(std::size_t x, std::size_t y) const { return &pixels[4 * (x + y * width)]; }
  void set(std::size_t x, std::size_t y, Rgb c);
  friend bool operator==(const Image&, const Image&) = default;
};

/// Colour image plus per-pixel view depth (distance along the camera's
/// forward axis; +inf where nothing was drawn).
struct DepthImage {
  Image image;
  std::vector<double> depth;

  DepthImage() = default;
  DepthImage(std::size_t w, std::size_t h, Rgb background);
};

struct VolumeStyle {
  double stepLength = 0.5;
  Rgb background{0.0, 0.0, 0.0};
};

inline constexpr std::size_t kMaxCompositeWidth = 3840;
inline constexpr std::size_t kMaxCompositeHeight = 2400;

std::uint8_t toByte(double v);

struct RayResult {
  Rgb color;                   // accumulated premultiplied emission
  double transmittance = 1.0;  // remaining fraction of the background
  std::size_t samples = 0;     // valid samples composited
};

/// Marches one ray (field-local coordinates) from `tStart` to `tEnd`,
/// clipped to the hull of valid voxels. Segments have length `stepLength`
/// except the last, which is shortened to end exactly at the exit; each
/// segment is sampled at its midpoint with alpha corrected to its length.
RayResult traceRay(const ScalarField& field, const TransferFunction& tf, const Vec3& origin, const Vec3& dir,
                   double stepLength, double tStart = 0.0,
                   double tEnd = std::numeric_limits<double>::infinity());

Image raycast(const ScalarField& field, const TransferFunction& tf, const Camera& cam, const VolumeStyle& style,
              std::size_t width, std::size_t height);

/// Composites a volume front-to-back over `target`, stopping each ray at the
/// depth already stored there. `objectToWorld` places the field in the scene.
void raycastInto(const ScalarField& field, const TransferFunction& tf, const Camera& cam, double stepLength,
                 const RigidTransform& objectToWorld, DepthImage& target);

/// Z-buffered rasterization with headlight Lambert shading.
DepthImage rasterizeMesh(const TriangleMesh& mesh, const Camera& cam, std::size_t width, std::size_t height,
                         Rgb color, Rgb background = {});
void rasterizeMeshInto(const TriangleMesh& mesh, const Camera& cam, Rgb color, DepthImage& target);

/// Draws a cut-plane sample grid as an opaque textured quad; masked samples
/// leave the target untouched.
void rasterizeSliceInto(const SliceImage& slice, const TransferFunction& tf, const Camera& cam,
                        const RigidTransform& objectToWorld, DepthImage& target);

Image colorbarImage(const TransferFunction& tf, std::size_t width, std::size_t height);
Image histogramImage(const Histogram& hist, std::size_t width, std::size_t height);

/// Pixel rows of the gradient band in a colorbar of the given height.
std::size_t colorbarGradientRows(std::size_t height);

struct Tile {
  Image image;
  std::size_t row = 0;
  std::size_t col = 0;
};

Image compositeViews(const std::vector<Tile>& tiles, std::size_t rows, std::size_t cols, std::size_t cellWidth,
                     std::size_t cellHeight, Rgb background = {});

/// Copies `src` into `dst` with its top-left corner at (x, y), clipping.
void blit(Image& dst, const Image& src, std::size_t x, std::size_t y);

/// Draws `text` with a 3x5 pixel font scaled by `scale`.
void drawText(Image& img, std::size_t x, std::size_t y, const std::string& text, Rgb color, int scale = 1);

/// Binary PPM (P6); alpha is composited over `background`.
std::string encodePpm(const Image& image, Rgb background = {});

namespace serial {

Image raycast(const ScalarField& field, const TransferFunction& tf, const Camera& cam, const VolumeStyle& style,
              std::size_t width, std::size_t height);
void raycastInto(const ScalarField& field, const TransferFunction& tf, const Camera& cam, double stepLength,
                 const RigidTransform& objectToWorld, DepthImage& target);

}  // namespace serial

}  // namespace viz
