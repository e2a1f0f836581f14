#include "raycast_kernel.hpp"

namespace viz {

RayResult traceRay(const ScalarField& field, const TransferFunction& tf, const Vec3& origin, const Vec3& dir,
                   double stepLength, double tStart, double tEnd) {
  detail::checkVolume(field, stepLength);
  return detail::marchRay(field, tf, validBoundingBox(field), origin, normalized(dir), stepLength, tStart, tEnd);
}

void raycastInto(const ScalarField& field, const TransferFunction& tf, const Camera& cam, double stepLength,
                 const RigidTransform& objectToWorld, DepthImage& target) {
  detail::checkVolume(field, stepLength);
  const detail::VolumePass pass(field, tf, cam, stepLength, objectToWorld);
  const auto h = static_cast<std::ptrdiff_t>(target.image.height);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < target.image.width; ++x) pass.shadePixel(target, x, static_cast<std::size_t>(y));
  }
}

Image raycast(const ScalarField& field, const TransferFunction& tf, const Camera& cam, const VolumeStyle& style,
              std::size_t width, std::size_t height) {
  if (width < 1 || height < 1) throw SizeError("image must be at least 1x1");
  DepthImage target(width, height, style.background);
  raycastInto(field, tf, cam, style.stepLength, RigidTransform{}, target);
  return std::move(target.image);
}

}  // namespace viz
