#include "reduce_line.hpp"
#include "viz/field.hpp"

namespace viz::serial {

ScalarField project(const ScalarField& field, std::size_t axis, Reducer reducer) {
  detail::checkReducibleAxis(field, axis);
  const detail::AxisSplit s = detail::splitAxis(field, axis);
  const std::size_t n = field.size() / s.extent;
  std::vector<double> values(n);
  std::vector<std::uint8_t> mask(n);
  for (std::size_t o = 0; o < n; ++o) {
    const auto r = detail::reduceLine(field, s, reducer, o);
    values[o] = r.value;
    mask[o] = r.valid ? 1 : 0;
  }
  return ScalarField(detail::dropAxis(field.dims(), axis), detail::dropAxis(field.spacing(), axis),
                     detail::dropAxis(field.origin(), axis), std::move(values), std::move(mask),
                     detail::dropAxis(field.axisNames(), axis));
}

Histogram histogram(const ScalarField& field, std::size_t bins,
                    std::optional<std::pair<double, double>> range) {
  const auto domain = detail::histogramDomain(field, bins, range);
  Histogram h;
  h.binEdges = detail::histogramEdges(domain, bins);
  h.counts.assign(bins, 0);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!field.valid(i)) continue;
    if (auto k = binIndex(h.binEdges, field.value(i))) ++h.counts[*k];
  }
  for (auto c : h.counts) h.totalCounted += c;
  return h;
}

}  // namespace viz::serial
