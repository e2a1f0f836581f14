#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "support/oracles.hpp"
#include "viz/errors.hpp"
#include "viz/field.hpp"

using namespace viz;
using viz::testing::Rng;

namespace {

ScalarField ramp4d() {
  std::vector<double> v(2 * 3 * 4 * 5);
  std::iota(v.begin(), v.end(), 0.0);
  return ScalarField::fromValues({2, 3, 4, 5}, v);
}

}  // namespace

TEST_CASE("flat index puts axis 0 fastest") {
  const ScalarField f = ramp4d();
  const std::vector<std::size_t> idx = {1, 2, 3, 4};
  CHECK(f.flatIndex(idx) == 1 + 2 * (2 + 3 * (3 + 4 * 4)));
  CHECK(f.multiIndex(f.flatIndex(idx)) == idx);
  CHECK(f.stride(0) == 1);
  CHECK(f.stride(3) == 24);
}

TEST_CASE("construction validates its invariants") {
  CHECK_THROWS_AS(ScalarField({2, 2}, {1, 1}, {0, 0}, {1, 2, 3}), ArgumentError);
  CHECK_THROWS_AS(ScalarField({2, 0}, {1, 1}, {0, 0}, {}), RangeError);
  CHECK_THROWS_AS(ScalarField({1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {0, 0, 0, 0, 0}, {1}), DimensionError);
  CHECK_THROWS_AS(ScalarField({2}, {0.0}, {0}, {1, 2}), ArgumentError);
}

TEST_CASE("axis labels resolve") {
  const ScalarField f = ramp4d();
  CHECK(f.axisByName("t") == 3u);
  CHECK(f.axisByName("x") == 0u);
  CHECK_FALSE(f.axisByName("w").has_value());
}

TEST_CASE("slice of a 4D ramp pins t") {
  const ScalarField f = ramp4d();
  const ScalarField s = slice(f, 3, 2);
  REQUIRE(s.dims() == std::vector<std::size_t>{2, 3, 4});
  CHECK(s.axisNames() == std::vector<std::string>{"x", "y", "z"});
  // The t = 2 block is contiguous.
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.value(i) == static_cast<double>(2 * 24 + i));
  CHECK_THROWS_AS(slice(f, 3, 5), RangeError);
  CHECK_THROWS_AS(slice(f, 4, 0), RangeError);
  CHECK_THROWS_AS(slice(ScalarField::constant({3}, 1.0), 0, 0), DimensionError);
}

TEST_CASE("projection reducers on a small ramp") {
  const ScalarField f = ScalarField::fromValues({2, 3}, {1, 2, 3, 4, 5, 6});
  CHECK(project(f, 1, Reducer::Sum).values()[0] == 9.0);
  CHECK(project(f, 1, Reducer::Mean).values()[1] == 4.0);
  CHECK(project(f, 0, Reducer::Max).values()[2] == 6.0);
  CHECK(project(f, 0, Reducer::Min).values()[1] == 3.0);
}

TEST_CASE("projection skips masked voxels and masks empty lines") {
  const ScalarField f({2, 2}, {1, 1}, {0, 0}, {1, 100, 3, 4}, {1, 0, 1, 0});
  const ScalarField p = project(f, 0, Reducer::Max);
  CHECK(p.values()[0] == 1.0);
  CHECK(p.mask()[0] == 1);
  CHECK(p.mask()[1] == 1);
  CHECK(p.values()[1] == 3.0);
  const ScalarField q = project(f, 1, Reducer::Sum);
  CHECK(q.mask()[1] == 0);
  CHECK(q.values()[0] == 4.0);
}

TEST_CASE("slice and project match the voxel oracle on random fields") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const ScalarField f = viz::testing::randomField(rng, 2, 4, 4, 0.2);
    const auto axis = static_cast<std::size_t>(viz::testing::uniformInt(rng, 0, static_cast<std::int64_t>(f.rank()) - 1));
    const auto index = static_cast<std::size_t>(viz::testing::uniformInt(rng, 0, static_cast<std::int64_t>(f.dims()[axis]) - 1));
    CHECK(slice(f, axis, index) == viz::testing::bruteSlice(f, axis, index));
    for (Reducer r : {Reducer::Sum, Reducer::Mean, Reducer::Max, Reducer::Min}) {
      const ScalarField expected = viz::testing::bruteProject(f, axis, r);
      CHECK(project(f, axis, r) == expected);
      CHECK(serial::project(f, axis, r) == expected);
    }
  }
}

TEST_CASE("slice commutes with slice on distinct axes") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ScalarField f = viz::testing::randomField(rng, 3, 4, 4, 0.1);
    // Slicing axis 0 then (old) axis 2, versus axis 2 then axis 0.
    const ScalarField a = slice(slice(f, 0, 0), 1, 0);
    const ScalarField b = slice(slice(f, 2, 0), 0, 0);
    CHECK(a == b);
  }
}

TEST_CASE("filter masks outside the range and keeps values") {
  const ScalarField f = ScalarField::fromValues({5}, {0.001, 0.002, 0.0025, 0.01, 0.03});
  const ScalarField g = filterRange(f, 0.0025, 0.02);
  CHECK(std::vector<std::uint8_t>(g.mask().begin(), g.mask().end()) == std::vector<std::uint8_t>{0, 0, 1, 1, 0});
  CHECK(std::equal(g.values().begin(), g.values().end(), f.values().begin()));
  CHECK(filterRange(g, 0.0025, std::nullopt).mask()[4] == 0);
  CHECK_THROWS_AS(filterRange(f, std::nullopt, std::nullopt), ArgumentError);
  CHECK_THROWS_AS(filterRange(f, 2.0, 1.0), ArgumentError);
}

TEST_CASE("histogram bins are half-open with a closed last bin") {
  const ScalarField f = ScalarField::fromValues({6}, {0.0, 0.25, 0.5, 0.75, 1.0, 0.9999});
  const Histogram h = histogram(f, 4);
  CHECK(h.binEdges == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(h.counts == std::vector<std::uint64_t>{1, 1, 1, 3});
  CHECK(h.totalCounted == 6);
  const Histogram r = histogram(f, 2, std::make_pair(0.3, 0.8));
  CHECK(r.counts == std::vector<std::uint64_t>{1, 1});
  CHECK(r.totalCounted == 2);
}

TEST_CASE("histogram of a constant field widens the range") {
  const Histogram h = histogram(ScalarField::constant({3, 3}, 2.0), 3);
  CHECK(h.binEdges.front() == 1.0);
  CHECK(h.binEdges.back() == 3.0);
  CHECK(h.counts == std::vector<std::uint64_t>{0, 9, 0});
  CHECK_THROWS_AS(histogram(ScalarField::constant({2}, 1.0).withMask({0, 0}), 4), EmptyDomainError);
  CHECK_THROWS_AS(histogram(ScalarField::constant({2}, 1.0), 0), ArgumentError);
}

TEST_CASE("histogram counts equal valid voxels in range, OpenMP equals serial") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const ScalarField f = viz::testing::randomField(rng, 1, 4, 6, 0.3);
    if (f.validCount() == 0) continue;
    const auto bins = static_cast<std::size_t>(viz::testing::uniformInt(rng, 1, 40));
    const Histogram h = histogram(f, bins);
    CHECK(h.totalCounted == f.validCount());
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}) == h.totalCounted);
    CHECK(h == serial::histogram(f, bins));
    // Independent bin check for every valid voxel.
    std::vector<std::uint64_t> expected(bins, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!f.valid(i)) continue;
      const double v = f.value(i);
      std::size_t k = bins - 1;
      for (std::size_t b = 0; b < bins; ++b) {
        if (v >= h.binEdges[b] && v < h.binEdges[b + 1]) {
          k = b;
          break;
        }
      }
      ++expected[k];
    }
    CHECK(h.counts == expected);
  }
}

TEST_CASE("binIndex agrees with linear search around the edges") {
  const std::vector<double> edges = {0.0, 0.1, 0.2, 0.30000000000000004, 0.4};
  CHECK(binIndex(edges, -1e-300) == std::nullopt);
  CHECK(binIndex(edges, 0.0) == 0u);
  CHECK(binIndex(edges, 0.1) == 1u);
  CHECK(binIndex(edges, 0.3) == 2u);
  CHECK(binIndex(edges, 0.30000000000000004) == 3u);
  CHECK(binIndex(edges, 0.4) == 3u);
  CHECK(binIndex(edges, 0.4000000001) == std::nullopt);
}

TEST_CASE("stats ignore masked voxels") {
  const ScalarField f({4}, {1}, {0}, {1, 2, 3, 100}, {1, 1, 1, 0});
  const FieldStats s = stats(f);
  CHECK(s.validCount == 3);
  CHECK(*s.min == 1.0);
  CHECK(*s.max == 3.0);
  CHECK(*s.mean == doctest::Approx(2.0));
  CHECK_FALSE(stats(f.withMask({0, 0, 0, 0})).min.has_value());
}

TEST_CASE("reducer names round trip") {
  for (Reducer r : {Reducer::Sum, Reducer::Mean, Reducer::Max, Reducer::Min}) {
    CHECK(reducerFromName(reducerName(r)) == r);
  }
  CHECK_FALSE(reducerFromName("median").has_value());
}
