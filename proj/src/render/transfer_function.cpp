#include <algorithm>
#include <cmath>
#include <map>

#include "viz/errors.hpp"
#include "viz/render.hpp"

namespace viz {

namespace {

// Palette stops on [0, 1]; see docs/palettes.md.
const std::map<std::string, std::vector<ColorPoint>>& palettes() {
  static const std::map<std::string, std::vector<ColorPoint>> p = {
      {"gray", {{0.0, {0, 0, 0}}, {1.0, {1, 1, 1}}}},
      {"rainbow",
       {{0.0, {0, 0, 1}}, {0.25, {0, 1, 1}}, {0.5, {0, 1, 0}}, {0.75, {1, 1, 0}}, {1.0, {1, 0, 0}}}},
      {"heat", {{0.0, {0, 0, 0}}, {0.4, {1, 0, 0}}, {0.8, {1, 1, 0}}, {1.0, {1, 1, 1}}}},
  };
  return p;
}

}  // namespace

const std::vector<std::string>& paletteNames() {
  static const std::vector<std::string> names = {"gray", "heat", "rainbow"};
  return names;
}

std::optional<std::vector<ColorPoint>> paletteStops(const std::string& name) {
  auto it = palettes().find(name);
  if (it == palettes().end()) return std::nullopt;
  return it->second;
}

TransferFunction TransferFunction::fromPalette(const std::string& palette, double lo, double hi, double maxAlpha) {
  auto stops = paletteStops(palette);
  if (!stops) throw ArgumentError("unknown palette: " + palette);
  if (!(lo < hi)) throw ArgumentError("transfer function range must satisfy lo < hi");
  TransferFunction tf;
  tf.paletteName = palette;
  for (const auto& s : *stops) tf.colorPoints.push_back({lo + (hi - lo) * s.scalar, s.color});
  tf.colorPoints.front().scalar = lo;
  tf.colorPoints.back().scalar = hi;
  tf.opacityPoints = {{lo, 0.0}, {hi, maxAlpha}};
  return tf;
}

std::vector<OpacityPoint> TransferFunction::window(double lo, double hi, double alpha) {
  if (!(lo < hi)) throw ArgumentError("opacity window must satisfy lo < hi");
  const double eps = (hi - lo) * 1e-6;
  return {{lo - eps, 0.0}, {lo, alpha}, {hi, alpha}, {hi + eps, 0.0}};
}

void TransferFunction::validate() const {
  if (colorPoints.size() < 2 || opacityPoints.size() < 2) {
    throw ArgumentError("transfer function needs at least two colour and two opacity points");
  }
  for (std::size_t i = 0; i < colorPoints.size(); ++i) {
    const auto& c = colorPoints[i];
    if (i > 0 && !(c.scalar > colorPoints[i - 1].scalar)) throw ArgumentError("colour points must ascend strictly");
    for (double v : {c.color.r, c.color.g, c.color.b}) {
      if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("colour components must lie in [0, 1]");
    }
  }
  for (std::size_t i = 0; i < opacityPoints.size(); ++i) {
    const auto& o = opacityPoints[i];
    if (i > 0 && !(o.scalar > opacityPoints[i - 1].scalar)) throw ArgumentError("opacity points must ascend strictly");
    if (!(o.alpha >= 0.0 && o.alpha <= 1.0)) throw ArgumentError("opacity must lie in [0, 1]");
  }
}

Rgba tfEval(const TransferFunction& tf, double s) {
  Rgb c;
  const auto& cp = tf.colorPoints;
  if (!(s > cp.front().scalar)) {
    c = cp.front().color;
  } else if (!(s < cp.back().scalar)) {
    c = cp.back().color;
  } else {
    auto it = std::upper_bound(cp.begin(), cp.end(), s, [](double v, const ColorPoint& p) { return v < p.scalar; });
    const ColorPoint& b = *it;
    const ColorPoint& a = *(it - 1);
    const double t = (s - a.scalar) / (b.scalar - a.scalar);
    c = {a.color.r + t * (b.color.r - a.color.r), a.color.g + t * (b.color.g - a.color.g),
         a.color.b + t * (b.color.b - a.color.b)};
  }
  double alpha;
  const auto& op = tf.opacityPoints;
  if (!(s > op.front().scalar)) {
    alpha = op.front().alpha;
  } else if (!(s < op.back().scalar)) {
    alpha = op.back().alpha;
  } else {
    auto it = std::upper_bound(op.begin(), op.end(), s, [](double v, const OpacityPoint& p) { return v < p.scalar; });
    const OpacityPoint& b = *it;
    const OpacityPoint& a = *(it - 1);
    const double t = (s - a.scalar) / (b.scalar - a.scalar);
    alpha = a.alpha + t * (b.alpha - a.alpha);
  }
  return {c.r, c.g, c.b, alpha};
}

}  // namespace viz
