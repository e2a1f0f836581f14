#include "viz/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "viz/errors.hpp"

namespace viz {

std::vector<std::string> defaultAxisNames(std::size_t rank) {
  static const char* kNames[] = {"x", "y", "z", "t"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rank; ++i) {
    names.emplace_back(i < 4 ? kNames[i] : "a" + std::to_string(i));
  }
  return names;
}

ScalarField::ScalarField(std::vector<std::size_t> dims, std::vector<double> spacing,
                         std::vector<double> origin, std::vector<double> values,
                         std::vector<std::string> axisNames)
    : ScalarField(dims, std::move(spacing), std::move(origin), std::move(values),
                  std::vector<std::uint8_t>{}, std::move(axisNames)) {}

ScalarField::ScalarField(std::vector<std::size_t> dims, std::vector<double> spacing,
                         std::vector<double> origin, std::vector<double> values,
                         std::vector<std::uint8_t> mask, std::vector<std::string> axisNames)
    : dims_(std::move(dims)),
      spacing_(std::move(spacing)),
      origin_(std::move(origin)),
      values_(std::move(values)),
      mask_(std::move(mask)),
      axisNames_(std::move(axisNames)) {
  if (mask_.empty()) mask_.assign(values_.size(), 1);
  if (axisNames_.empty()) axisNames_ = defaultAxisNames(dims_.size());
  validate();
}

void ScalarField::validate() const {
  if (dims_.empty() || dims_.size() > kMaxAxes) {
    throw DimensionError("field must have 1 to 4 axes, got " + std::to_string(dims_.size()));
  }
  if (spacing_.size() != dims_.size() || origin_.size() != dims_.size() ||
      axisNames_.size() != dims_.size()) {
    throw ArgumentError("dims, spacing, origin and axis names must have equal length");
  }
  std::size_t product = 1;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 1) throw RangeError("extent of axis " + std::to_string(i) + " must be >= 1");
    if (!(spacing_[i] > 0.0) || !std::isfinite(spacing_[i])) {
      throw ArgumentError("spacing of axis " + std::to_string(i) + " must be positive");
    }
    if (!std::isfinite(origin_[i])) throw ArgumentError("origin must be finite");
    product *= dims_[i];
  }
  if (values_.size() != product) {
    throw ArgumentError("expected " + std::to_string(product) + " values, got " +
                        std::to_string(values_.size()));
  }
  if (mask_.size() != product) throw ArgumentError("mask length does not match values");
}

ScalarField ScalarField::fromValues(std::vector<std::size_t> dims, std::vector<double> values) {
  const std::size_t n = dims.size();
  return ScalarField(std::move(dims), std::vector<double>(n, 1.0), std::vector<double>(n, 0.0),
                     std::move(values));
}

ScalarField ScalarField::constant(std::vector<std::size_t> dims, double value) {
  const std::size_t count =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  return fromValues(std::move(dims), std::vector<double>(count, value));
}

std::size_t ScalarField::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t i = 0; i < axis; ++i) s *= dims_[i];
  return s;
}

std::size_t ScalarField::flatIndex(std::span<const std::size_t> multi) const {
  std::size_t flat = 0;
  for (std::size_t i = dims_.size(); i-- > 0;) flat = flat * dims_[i] + multi[i];
  return flat;
}

std::vector<std::size_t> ScalarField::multiIndex(std::size_t flat) const {
  std::vector<std::size_t> multi(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    multi[i] = flat % dims_[i];
    flat /= dims_[i];
  }
  return multi;
}

std::optional<std::size_t> ScalarField::axisByName(const std::string& name) const {
  for (std::size_t i = 0; i < axisNames_.size(); ++i) {
    if (axisNames_[i] == name) return i;
  }
  return std::nullopt;
}

bool ScalarField::fullyValid() const {
  return std::all_of(mask_.begin(), mask_.end(), [](std::uint8_t m) { return m != 0; });
}

std::size_t ScalarField::validCount() const {
  return static_cast<std::size_t>(std::count_if(mask_.begin(), mask_.end(), [](std::uint8_t m) { return m != 0; }));
}

ScalarField ScalarField::withMask(std::vector<std::uint8_t> mask) const {
  return ScalarField(dims_, spacing_, origin_, values_, std::move(mask), axisNames_);
}

ScalarField ScalarField::withOrigin(std::vector<double> origin) const {
  return ScalarField(dims_, spacing_, std::move(origin), values_, mask_, axisNames_);
}

const char* reducerName(Reducer r) {
  switch (r) {
    case Reducer::Sum: return "sum";
    case Reducer::Mean: return "mean";
    case Reducer::Max: return "max";
    case Reducer::Min: return "min";
  }
  return "?";
}

std::optional<Reducer> reducerFromName(const std::string& name) {
  if (name == "sum") return Reducer::Sum;
  if (name == "mean") return Reducer::Mean;
  if (name == "max") return Reducer::Max;
  if (name == "min") return Reducer::Min;
  return std::nullopt;
}

}  // namespace viz
