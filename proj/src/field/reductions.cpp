#include <algorithm>
#include <cmath>
#include <limits>

#include "reduce_line.hpp"
#include "viz/errors.hpp"
#include "viz/field.hpp"

namespace viz {

namespace detail {

HistogramDomain histogramDomain(const ScalarField& field, std::size_t bins,
                                std::optional<std::pair<double, double>> range) {
  if (bins < 1) throw ArgumentError("histogram needs at least one bin");
  if (range) {
    if (!std::isfinite(range->first) || !std::isfinite(range->second) || !(range->first < range->second)) {
      throw ArgumentError("histogram range must satisfy lo < hi");
    }
    return {range->first, range->second};
  }
  const FieldStats s = stats(field);
  if (s.validCount == 0) throw EmptyDomainError("histogram of a field with no valid voxels");
  double lo = *s.min;
  double hi = *s.max;
  if (lo == hi) {
    const double half = lo == 0.0 ? 0.5 : std::abs(lo) * 0.5;
    lo -= half;
    hi += half;
  }
  return {lo, hi};
}

std::vector<double> histogramEdges(const HistogramDomain& d, std::size_t bins) {
  std::vector<double> edges(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    edges[k] = d.lo + (d.hi - d.lo) * static_cast<double>(k) / static_cast<double>(bins);
  }
  edges.back() = d.hi;
  return edges;
}

}  // namespace detail

std::optional<std::size_t> binIndex(std::span<const double> edges, double v) {
  const std::size_t bins = edges.size() - 1;
  const double lo = edges.front();
  const double hi = edges.back();
  if (!(v >= lo) || !(v <= hi)) return std::nullopt;
  if (v == hi) return bins - 1;
  auto k = static_cast<std::size_t>(std::floor((v - lo) / (hi - lo) * static_cast<double>(bins)));
  k = std::min(k, bins - 1);
  while (k > 0 && v < edges[k]) --k;
  while (k + 1 < bins && v >= edges[k + 1]) ++k;
  return k;
}

ScalarField slice(const ScalarField& field, std::size_t axis, std::size_t index) {
  detail::checkReducibleAxis(field, axis);
  if (index >= field.dims()[axis]) {
    throw RangeError("index " + std::to_string(index) + " out of range for axis " +
                     field.axisNames()[axis] + " of extent " + std::to_string(field.dims()[axis]));
  }
  const detail::AxisSplit s = detail::splitAxis(field, axis);
  const std::size_t n = field.size() / s.extent;
  std::vector<double> values(n);
  std::vector<std::uint8_t> mask(n);
  for (std::size_t o = 0; o < n; ++o) {
    const std::size_t src = detail::sourceIndex(s, o, index);
    values[o] = field.value(src);
    mask[o] = field.mask()[src];
  }
  return ScalarField(detail::dropAxis(field.dims(), axis), detail::dropAxis(field.spacing(), axis),
                     detail::dropAxis(field.origin(), axis), std::move(values), std::move(mask),
                     detail::dropAxis(field.axisNames(), axis));
}

ScalarField project(const ScalarField& field, std::size_t axis, Reducer reducer) {
  detail::checkReducibleAxis(field, axis);
  const detail::AxisSplit s = detail::splitAxis(field, axis);
  const std::size_t n = field.size() / s.extent;
  std::vector<double> values(n);
  std::vector<std::uint8_t> mask(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t o = 0; o < static_cast<std::ptrdiff_t>(n); ++o) {
    const auto r = detail::reduceLine(field, s, reducer, static_cast<std::size_t>(o));
    values[o] = r.value;
    mask[o] = r.valid ? 1 : 0;
  }
  return ScalarField(detail::dropAxis(field.dims(), axis), detail::dropAxis(field.spacing(), axis),
                     detail::dropAxis(field.origin(), axis), std::move(values), std::move(mask),
                     detail::dropAxis(field.axisNames(), axis));
}

ScalarField filterRange(const ScalarField& field, std::optional<double> lo, std::optional<double> hi) {
  if (!lo && !hi) throw ArgumentError("filter needs at least one of lo, hi");
  if (lo && hi && *lo > *hi) throw ArgumentError("filter bounds reversed: lo > hi");
  std::vector<std::uint8_t> mask(field.mask().begin(), field.mask().end());
  const auto values = field.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if ((lo && values[i] < *lo) || (hi && values[i] > *hi)) mask[i] = 0;
  }
  return field.withMask(std::move(mask));
}

Histogram histogram(const ScalarField& field, std::size_t bins,
                    std::optional<std::pair<double, double>> range) {
  const auto domain = detail::histogramDomain(field, bins, range);
  Histogram h;
  h.binEdges = detail::histogramEdges(domain, bins);
  h.counts.assign(bins, 0);
  const auto values = field.values();
  const auto mask = field.mask();
  const std::span<const double> edges = h.binEdges;
  const auto n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (!mask[i]) continue;
      if (auto k = binIndex(edges, values[i])) ++local[*k];
    }
#pragma omp critical(viz_histogram_merge)
    for (std::size_t k = 0; k < bins; ++k) h.counts[k] += local[k];
  }
  for (auto c : h.counts) h.totalCounted += c;
  return h;
}

FieldStats stats(const ScalarField& field) {
  FieldStats s;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!field.valid(i)) continue;
    const double v = field.value(i);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
    ++s.validCount;
  }
  if (s.validCount > 0) {
    s.min = lo;
    s.max = hi;
    s.mean = sum / static_cast<double>(s.validCount);
  }
  return s;
}

}  // namespace viz
