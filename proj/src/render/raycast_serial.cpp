#include "raycast_kernel.hpp"

namespace viz::serial {

void raycastInto(const ScalarField& field, const TransferFunction& tf, const Camera& cam, double stepLength,
                 const RigidTransform& objectToWorld, DepthImage& target) {
  detail::checkVolume(field, stepLength);
  const detail::VolumePass pass(field, tf, cam, stepLength, objectToWorld);
  for (std::size_t y = 0; y < target.image.height; ++y) {
    for (std::size_t x = 0; x < target.image.width; ++x) pass.shadePixel(target, x, y);
  }
}

Image raycast(const ScalarField& field, const TransferFunction& tf, const Camera& cam, const VolumeStyle& style,
              std::size_t width, std::size_t height) {
  if (width < 1 || height < 1) throw SizeError("image must be at least 1x1");
  DepthImage target(width, height, style.background);
  serial::raycastInto(field, tf, cam, style.stepLength, RigidTransform{}, target);
  return std::move(target.image);
}

}  // namespace viz::serial
