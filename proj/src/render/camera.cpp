#include <algorithm>
#include <cmath>

#include "viz/errors.hpp"
#include "viz/render.hpp"

namespace viz {

Vec3 Camera::rayDirection(double px, double py, std::size_t width, std::size_t height) const {
  const double tanHalf = std::tan(degToRad(verticalFovDegrees) * 0.5);
  const double aspect = static_cast<double>(width) / static_cast<double>(height);
  const double sx = (2.0 * px / static_cast<double>(width) - 1.0) * tanHalf * aspect;
  const double sy = (1.0 - 2.0 * py / static_cast<double>(height)) * tanHalf;
  return normalized(forward() + right() * sx + up() * sy);
}

void Camera::validate() const {
  for (const Vec3& v : {position, focalPoint, viewUp}) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
      throw ArgumentError("camera vectors must be finite");
    }
  }
  if (position == focalPoint) throw ArgumentError("camera position equals focal point");
  if (!(verticalFovDegrees > 0.0 && verticalFovDegrees < 180.0)) throw ArgumentError("fov must lie in (0, 180)");
  const Vec3 up = normalized(viewUp);
  if (norm(viewUp) == 0.0 || std::abs(dot(up, forward())) > 1.0 - 1e-12) {
    throw ArgumentError("view up is parallel to the view direction");
  }
}

std::uint8_t toByte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

Image::Image(std::size_t w, std::size_t h, Rgb fill) : width(w), height(h), pixels(4 * w * h) {
  const std::uint8_t r = toByte(fill.r), g = toByte(fill.g), b = toByte(fill.b);
  for (std::size_t i = 0; i < w * h; ++i) {
    pixels[4 * i] = r;
    pixels[4 * i + 1] = g;
    pixels[4 * i + 2] = b;
    pixels[4 * i + 3] = 255;
  }
}

void Image::set(std::size_t x, std::size_t y, Rgb c) {
  std::uint8_t* p = at(x, y);
  p[0] = toByte(c.r);
  p[1] = toByte(c.g);
  p[2] = toByte(c.b);
  p[3] = 255;
}

DepthImage::DepthImage(std::size_t w, std::size_t h, Rgb background)
    : image(w, h, background), depth(w * h, std::numeric_limits<double>::infinity()) {}

}  // namespace viz
