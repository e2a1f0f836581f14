#pragma once

// Per-pixel ray-casting kernel shared by the OpenMP and serial drivers.

#include <algorithm>
#include <cmath>
#include <optional>

#include "viz/errors.hpp"
#include "viz/render.hpp"

namespace viz::detail {

inline bool clipToBox(const Aabb& box, const Vec3& o, const Vec3& d, double& t0, double& t1) {
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < box.min[a] || o[a] > box.max[a]) return false;
      continue;
    }
    double ta = (box.min[a] - o[a]) / d[a];
    double tb = (box.max[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t1 > t0;
}

inline RayResult marchRay(const ScalarField& field, const TransferFunction& tf, const std::optional<Aabb>& validBox,
                          const Vec3& o, const Vec3& d, double step, double tStart, double tEnd) {
  RayResult r;
  if (!validBox) return r;
  double t0 = tStart, t1 = tEnd;
  if (!clipToBox(*validBox, o, d, t0, t1)) return r;
  const double length = t1 - t0;
  const auto segments = static_cast<std::size_t>(std::ceil(length / step));
  constexpr double kCutoff = 1.0 / 255.0;
  for (std::size_t k = 0; k < segments; ++k) {
    const double s0 = t0 + static_cast<double>(k) * step;
    const double seg = std::min(step, t1 - s0);
    if (seg <= 0.0) break;
    const Sample s = trilinearSample(field, o + d * (s0 + 0.5 * seg));
    if (!s.valid) continue;
    const Rgba c = tfEval(tf, s.value);
    ++r.samples;
    if (c.a <= 0.0) continue;
    const double alpha = 1.0 - std::pow(1.0 - std::min(c.a, 1.0), seg);
    const double w = r.transmittance * alpha;
    r.color.r += w * c.r;
    r.color.g += w * c.g;
    r.color.b += w * c.b;
    r.transmittance *= 1.0 - alpha;
    if (r.transmittance < kCutoff) break;
  }
  return r;
}

struct VolumePass {
  const ScalarField& field;
  const TransferFunction& tf;
  const Camera& cam;
  double step;
  RigidTransform toLocal;
  std::optional<Aabb> validBox;
  Vec3 forward;
  Vec3 localOrigin;

  VolumePass(const ScalarField& f, const TransferFunction& t, const Camera& c, double s, const RigidTransform& xf)
      : field(f), tf(t), cam(c), step(s), toLocal(xf.inverse()), validBox(validBoundingBox(f)),
        forward(c.forward()), localOrigin(toLocal.apply(c.position)) {}

  void shadePixel(DepthImage& target, std::size_t x, std::size_t y) const {
    const std::size_t w = target.image.width, h = target.image.height;
    const Vec3 dir = cam.rayDirection(static_cast<double>(x) + 0.5, static_cast<double>(y) + 0.5, w, h);
    const double depth = target.depth[x + y * w];
    const double tEnd = std::isinf(depth) ? depth : depth / dot(dir, forward);
    const RayResult r = marchRay(field, tf, validBox, localOrigin, toLocal.applyVector(dir), step, 0.0, tEnd);
    if (r.samples == 0) return;
    std::uint8_t* p = target.image.at(x, y);
    p[0] = toByte(r.color.r + r.transmittance * p[0] / 255.0);
    p[1] = toByte(r.color.g + r.transmittance * p[1] / 255.0);
    p[2] = toByte(r.color.b + r.transmittance * p[2] / 255.0);
  }
};

inline void checkVolume(const ScalarField& field, double step) {
  if (field.rank() != 3) throw DimensionError("ray casting needs a 3D field");
  if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("step length must be positive");
}

}  // namespace viz::detail
