#pragma once

// Per-voxel kernels shared by the OpenMP and serial reduction paths.

#include <cstddef>
#include <limits>
#include <string>

#include "viz/errors.hpp"
#include "viz/field.hpp"

namespace viz::detail {

struct LineResult {
  double value;
  bool valid;
};

struct AxisSplit {
  std::size_t inner;   // stride of the removed axis
  std::size_t extent;  // extent of the removed axis
};

inline AxisSplit splitAxis(const ScalarField& field, std::size_t axis) {
  return {field.stride(axis), field.dims()[axis]};
}

inline std::size_t sourceIndex(const AxisSplit& s, std::size_t out, std::size_t k) {
  const std::size_t lo = out % s.inner;
  const std::size_t hi = out / s.inner;
  return lo + k * s.inner + hi * s.inner * s.extent;
}

inline LineResult reduceLine(const ScalarField& field, const AxisSplit& s, Reducer reducer,
                             std::size_t out) {
  double acc = 0.0;
  std::size_t n = 0;
  switch (reducer) {
    case Reducer::Max: acc = -std::numeric_limits<double>::infinity(); break;
    case Reducer::Min: acc = std::numeric_limits<double>::infinity(); break;
    default: break;
  }
  for (std::size_t k = 0; k < s.extent; ++k) {
    const std::size_t src = sourceIndex(s, out, k);
    if (!field.valid(src)) continue;
    const double v = field.value(src);
    ++n;
    switch (reducer) {
      case Reducer::Sum:
      case Reducer::Mean: acc += v; break;
      case Reducer::Max: acc = v > acc ? v : acc; break;
      case Reducer::Min: acc = v < acc ? v : acc; break;
    }
  }
  if (n == 0) return {0.0, false};
  if (reducer == Reducer::Mean) acc /= static_cast<double>(n);
  return {acc, true};
}

template <class T>
std::vector<T> dropAxis(const std::vector<T>& v, std::size_t axis) {
  std::vector<T> out;
  out.reserve(v.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != axis) out.push_back(v[i]);
  }
  return out;
}

inline void checkReducibleAxis(const ScalarField& field, std::size_t axis) {
  if (field.rank() < 2) {
    throw DimensionError("cannot remove an axis from a " + std::to_string(field.rank()) + "D field");
  }
  if (axis >= field.rank()) {
    throw RangeError("axis " + std::to_string(axis) + " out of range for " +
                     std::to_string(field.rank()) + "D field");
  }
}

struct HistogramDomain {
  double lo;
  double hi;
};

HistogramDomain histogramDomain(const ScalarField& field, std::size_t bins,
                                std::optional<std::pair<double, double>> range);
std::vector<double> histogramEdges(const HistogramDomain& d, std::size_t bins);

}  // namespace viz::detail
