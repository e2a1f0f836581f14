// Scanline-free triangle rasterizer: edge functions over each triangle's
// pixel bounding box, perspective-correct barycentrics, strict less-than
// depth test. Rows are split into bands processed in parallel; inside a band
// triangles are visited in index order, so output does not depend on the
// thread count.
//
// Triangles with any vertex closer than kNear to the eye plane are dropped
// rather than clipped.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "viz/errors.hpp"
#include "viz/render.hpp"

namespace viz {

namespace {

constexpr double kNear = 1e-3;
constexpr std::size_t kBandRows = 16;

struct ScreenVertex {
  double x, y;  // pixel coordinates
  double z;     // forward distance
};

struct ScreenTriangle {
  std::array<ScreenVertex, 3> v;
  double area;  // signed, twice the pixel-space area
  std::size_t id;
  double ymin, ymax, xmin, xmax;
};

class Projector {
 public:
  Projector(const Camera& cam, std::size_t w, std::size_t h)
      : pos_(cam.position), fwd_(cam.forward()), right_(cam.right()), up_(cam.up()), w_(static_cast<double>(w)),
        h_(static_cast<double>(h)) {
    tanHalf_ = std::tan(degToRad(cam.verticalFovDegrees) * 0.5);
    aspect_ = w_ / h_;
  }

  std::optional<ScreenVertex> project(const Vec3& p) const {
    const Vec3 d = p - pos_;
    const double z = dot(d, fwd_);
    if (z < kNear) return std::nullopt;
    const double sx = dot(d, right_) / (z * tanHalf_ * aspect_);
    const double sy = dot(d, up_) / (z * tanHalf_);
    return ScreenVertex{(sx + 1.0) * 0.5 * w_, (1.0 - sy) * 0.5 * h_, z};
  }

 private:
  Vec3 pos_, fwd_, right_, up_;
  double w_, h_, tanHalf_, aspect_;
};

/// Perspective-correct barycentrics at a covered pixel.
using Shader = std::function<std::optional<Rgb>(std::size_t id, const std::array<double, 3>& bary)>;

std::vector<ScreenTriangle> setup(const std::vector<std::array<Vec3, 3>>& tris, const Projector& proj) {
  std::vector<ScreenTriangle> out;
  out.reserve(tris.size());
  for (std::size_t i = 0; i < tris.size(); ++i) {
    ScreenTriangle st{};
    bool ok = true;
    for (int k = 0; k < 3 && ok; ++k) {
      auto sv = proj.project(tris[i][k]);
      if (!sv) ok = false;
      else st.v[k] = *sv;
    }
    if (!ok) continue;
    st.area = (st.v[1].x - st.v[0].x) * (st.v[2].y - st.v[0].y) - (st.v[2].x - st.v[0].x) * (st.v[1].y - st.v[0].y);
    if (st.area == 0.0) continue;
    st.id = i;
    st.xmin = std::min({st.v[0].x, st.v[1].x, st.v[2].x});
    st.xmax = std::max({st.v[0].x, st.v[1].x, st.v[2].x});
    st.ymin = std::min({st.v[0].y, st.v[1].y, st.v[2].y});
    st.ymax = std::max({st.v[0].y, st.v[1].y, st.v[2].y});
    out.push_back(st);
  }
  return out;
}

void drawTriangleRows(const ScreenTriangle& t, std::size_t rowBegin, std::size_t rowEnd, DepthImage& target,
                      const Shader& shade) {
  const auto w = static_cast<double>(target.image.width);
  const double yLo = std::max(t.ymin - 0.5, static_cast<double>(rowBegin));
  const double yHi = std::min(t.ymax - 0.5, static_cast<double>(rowEnd) - 1.0);
  if (yHi < yLo) return;
  const double xLo = std::max(t.xmin - 0.5, 0.0);
  const double xHi = std::min(t.xmax - 0.5, w - 1.0);
  if (xHi < xLo) return;
  const auto y0 = static_cast<std::size_t>(std::ceil(yLo));
  const auto y1 = static_cast<std::size_t>(std::floor(yHi));
  const auto x0 = static_cast<std::size_t>(std::ceil(xLo));
  const auto x1 = static_cast<std::size_t>(std::floor(xHi));
  const auto& v = t.v;
  for (std::size_t y = y0; y <= y1; ++y) {
    const double py = static_cast<double>(y) + 0.5;
    for (std::size_t x = x0; x <= x1; ++x) {
      const double px = static_cast<double>(x) + 0.5;
      double e0 = (v[2].x - v[1].x) * (py - v[1].y) - (v[2].y - v[1].y) * (px - v[1].x);
      double e1 = (v[0].x - v[2].x) * (py - v[2].y) - (v[0].y - v[2].y) * (px - v[2].x);
      double e2 = (v[1].x - v[0].x) * (py - v[0].y) - (v[1].y - v[0].y) * (px - v[0].x);
      if (t.area < 0) {
        e0 = -e0;
        e1 = -e1;
        e2 = -e2;
      }
      if (e0 < 0 || e1 < 0 || e2 < 0) continue;
      const double a = std::abs(t.area);
      const double b0 = e0 / a / v[0].z, b1 = e1 / a / v[1].z, b2 = e2 / a / v[2].z;
      const double inv = b0 + b1 + b2;
      const double z = 1.0 / inv;
      const std::size_t idx = x + y * target.image.width;
      if (!(z < target.depth[idx])) continue;
      const auto color = shade(t.id, {b0 * z, b1 * z, b2 * z});
      if (!color) continue;
      target.depth[idx] = z;
      target.image.set(x, y, *color);
    }
  }
}

void rasterize(const std::vector<std::array<Vec3, 3>>& tris, const Camera& cam, DepthImage& target,
               const Shader& shade) {
  const Projector proj(cam, target.image.width, target.image.height);
  const auto screen = setup(tris, proj);
  const std::size_t h = target.image.height;
  const auto bands = static_cast<std::ptrdiff_t>((h + kBandRows - 1) / kBandRows);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < bands; ++b) {
    const std::size_t r0 = static_cast<std::size_t>(b) * kBandRows;
    const std::size_t r1 = std::min(h, r0 + kBandRows);
    for (const auto& t : screen) {
      if (t.ymax - 0.5 < static_cast<double>(r0) || t.ymin - 0.5 > static_cast<double>(r1)) continue;
      drawTriangleRows(t, r0, r1, target, shade);
    }
  }
}

}  // namespace

void rasterizeMeshInto(const TriangleMesh& mesh, const Camera& cam, Rgb color, DepthImage& target) {
  std::vector<std::array<Vec3, 3>> tris(mesh.triangleCount());
  std::vector<double> shade(mesh.triangleCount());
  for (std::size_t t = 0; t < mesh.triangleCount(); ++t) {
    tris[t] = {mesh.vertex(mesh.triangles[3 * t]), mesh.vertex(mesh.triangles[3 * t + 1]),
               mesh.vertex(mesh.triangles[3 * t + 2])};
    const Vec3 n = normalized(cross(tris[t][1] - tris[t][0], tris[t][2] - tris[t][0]));
    const Vec3 centroid = (tris[t][0] + tris[t][1] + tris[t][2]) / 3.0;
    const Vec3 light = normalized(cam.position - centroid);
    shade[t] = 0.2 + 0.8 * std::abs(dot(n, light));
  }
  rasterize(tris, cam, target, [&](std::size_t id, const std::array<double, 3>&) -> std::optional<Rgb> {
    const double s = shade[id];
    return Rgb{color.r * s, color.g * s, color.b * s};
  });
}

DepthImage rasterizeMesh(const TriangleMesh& mesh, const Camera& cam, std::size_t width, std::size_t height,
                         Rgb color, Rgb background) {
  if (width < 1 || height < 1) throw SizeError("image must be at least 1x1");
  DepthImage target(width, height, background);
  rasterizeMeshInto(mesh, cam, color, target);
  return target;
}

void rasterizeSliceInto(const SliceImage& slice, const TransferFunction& tf, const Camera& cam,
                        const RigidTransform& objectToWorld, DepthImage& target) {
  if (slice.width == 0 || slice.height == 0) return;
  // Quad spanning the sample centres, extended by half a sample on each side.
  const Vec3 o = slice.origin - slice.uStep * 0.5 - slice.vStep * 0.5;
  const Vec3 u = slice.uStep * static_cast<double>(slice.width);
  const Vec3 v = slice.vStep * static_cast<double>(slice.height);
  const Vec3 c00 = objectToWorld.apply(o);
  const Vec3 c10 = objectToWorld.apply(o + u);
  const Vec3 c11 = objectToWorld.apply(o + u + v);
  const Vec3 c01 = objectToWorld.apply(o + v);
  const std::vector<std::array<Vec3, 3>> tris = {{c00, c10, c11}, {c00, c11, c01}};
  // (s, t) texture coordinates of each triangle's corners.
  const std::array<std::array<std::array<double, 2>, 3>, 2> uv = {{{{{0, 0}, {1, 0}, {1, 1}}},
                                                                  {{{0, 0}, {1, 1}, {0, 1}}}}};
  rasterize(tris, cam, target, [&](std::size_t id, const std::array<double, 3>& b) -> std::optional<Rgb> {
    const double s = b[0] * uv[id][0][0] + b[1] * uv[id][1][0] + b[2] * uv[id][2][0];
    const double t = b[0] * uv[id][0][1] + b[1] * uv[id][1][1] + b[2] * uv[id][2][1];
    const auto i = std::min(slice.width - 1, static_cast<std::size_t>(std::max(0.0, s * static_cast<double>(slice.width))));
    const auto j = std::min(slice.height - 1, static_cast<std::size_t>(std::max(0.0, t * static_cast<double>(slice.height))));
    const std::size_t k = i + j * slice.width;
    if (!slice.sampleMask[k]) return std::nullopt;
    const Rgba c = tfEval(tf, slice.samples[k]);
    return Rgb{c.r, c.g, c.b};
  });
}

}  // namespace viz
