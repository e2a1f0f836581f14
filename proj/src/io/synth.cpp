#include <algorithm>
#include <cmath>
#include <random>

#include "viz/errors.hpp"
#include "viz/io.hpp"

namespace viz {

namespace {

/// Uniform [0, 1) from the top 53 bits of one draw.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double periodicDelta(double a, double b, double extent) {
  const double d = std::abs(a - b);
  return std::min(d, extent - d);
}

}  // namespace

std::vector<QcdLump> qcdLumpParameters(const std::vector<std::size_t>& dims, std::size_t nLumps, std::uint64_t seed) {
  if (dims.size() != 4) throw DimensionError("QCD lump generator needs 4 dims");
  if (nLumps < 1) throw ArgumentError("need at least one lump");
  std::mt19937_64 rng(seed);
  std::vector<QcdLump> lumps;
  for (std::size_t i = 0; i < nLumps; ++i) {
    QcdLump l{};
    for (int a = 0; a < 4; ++a) l.center[a] = static_cast<std::size_t>(rng() % dims[a]);
    l.width = 1.5 + 1.5 * unit(rng);
    const bool positive = (rng() & 1) != 0;
    l.sign = (i == 0 || positive) ? 1.0 : -1.0;
    lumps.push_back(l);
  }
  return lumps;
}

ScalarField synthQcdLumps(const std::vector<std::size_t>& dims, std::size_t nLumps, std::uint64_t seed) {
  const auto lumps = qcdLumpParameters(dims, nLumps, seed);
  const std::size_t n = dims[0] * dims[1] * dims[2] * dims[3];
  std::vector<double> values(n, 0.0);
  std::size_t flat = 0;
  for (std::size_t t = 0; t < dims[3]; ++t) {
    for (std::size_t z = 0; z < dims[2]; ++z) {
      for (std::size_t y = 0; y < dims[1]; ++y) {
        for (std::size_t x = 0; x < dims[0]; ++x, ++flat) {
          const std::array<std::size_t, 4> p{x, y, z, t};
          double v = 0.0;
          for (const auto& l : lumps) {
            double r2 = 0.0;
            for (int a = 0; a < 4; ++a) {
              const double d = periodicDelta(static_cast<double>(p[a]), static_cast<double>(l.center[a]),
                                             static_cast<double>(dims[a]));
              r2 += d * d;
            }
            v += l.sign * std::exp(-r2 / (2.0 * l.width * l.width));
          }
          values[flat] = v;
        }
      }
    }
  }
  double peak = *std::max_element(values.begin(), values.end());
  if (!(peak > 0.0)) {
    peak = 0.0;
    for (double v : values) peak = std::max(peak, std::abs(v));
  }
  const double scale = 0.01 / peak;
  for (auto& v : values) v *= scale;
  return ScalarField(dims, std::vector<double>(4, 1.0), std::vector<double>(4, 0.0), std::move(values));
}

MeteoriteLayout meteoriteLayout(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  if (dims.size() != 3) throw DimensionError("meteorite phantom needs 3 dims");
  for (auto d : dims) {
    if (d < 4) throw RangeError("meteorite phantom needs every extent >= 4");
  }
  MeteoriteLayout m;
  for (int a = 0; a < 3; ++a) m.center[a] = 0.5 * static_cast<double>(dims[a] - 1);
  m.semiAxes = {0.42 * static_cast<double>(dims[0]), 0.34 * static_cast<double>(dims[1]),
                0.30 * static_cast<double>(dims[2])};
  const double minAxis = std::min({m.semiAxes.x, m.semiAxes.y, m.semiAxes.z});
  m.coreCenter = m.center + Vec3{0.35 * m.semiAxes.x, -0.2 * m.semiAxes.y, 0.15 * m.semiAxes.z};
  m.coreRadius = std::max(1.0, 0.22 * minAxis);

  std::mt19937_64 rng(seed);
  const std::size_t wanted = 12;
  for (std::size_t attempt = 0; attempt < 400 && m.pores.size() < wanted; ++attempt) {
    const Vec3 e{2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0};
    const double radius = std::max(1.0, (0.05 + 0.05 * unit(rng)) * minAxis);
    if (dot(e, e) > 0.8 * 0.8) continue;
    const Vec3 c{m.center.x + e.x * m.semiAxes.x, m.center.y + e.y * m.semiAxes.y, m.center.z + e.z * m.semiAxes.z};
    if (norm(c - m.coreCenter) < m.coreRadius + radius + 1.0) continue;
    m.pores.emplace_back(c, radius);
  }
  return m;
}

ScalarField synthMeteoritePhantom(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  const MeteoriteLayout m = meteoriteLayout(dims, seed);
  // Separate stream for texture so layout does not depend on grid size.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::array<Vec3, 3> freq;
  std::array<double, 3> phase{};
  for (int i = 0; i < 3; ++i) {
    freq[i] = {0.15 + 0.3 * unit(rng), 0.15 + 0.3 * unit(rng), 0.15 + 0.3 * unit(rng)};
    phase[i] = 2.0 * kPi * unit(rng);
  }

  const std::size_t n = dims[0] * dims[1] * dims[2];
  std::vector<double> values(n);
  std::size_t flat = 0;
  for (std::size_t z = 0; z < dims[2]; ++z) {
    for (std::size_t y = 0; y < dims[1]; ++y) {
      for (std::size_t x = 0; x < dims[0]; ++x, ++flat) {
        const Vec3 p{static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
        const double airNoise = 0.0003 * (2.0 * unit(rng) - 1.0);
        const Vec3 q = p - m.center;
        const double e = q.x * q.x / (m.semiAxes.x * m.semiAxes.x) + q.y * q.y / (m.semiAxes.y * m.semiAxes.y) +
                         q.z * q.z / (m.semiAxes.z * m.semiAxes.z);
        double v = kAirLevel + airNoise;
        if (e <= 1.0) {
          double texture = 0.5;
          for (int i = 0; i < 3; ++i) texture += std::sin(dot(freq[i], p) + phase[i]) / 6.0;
          v = kRockMin + (kRockMax - kRockMin) * std::clamp(texture, 0.0, 1.0);
          const double dc = norm(p - m.coreCenter);
          if (dc <= m.coreRadius) {
            v = kCoreMin + (kCoreMax - kCoreMin) * (1.0 - dc / m.coreRadius);
          } else {
            for (const auto& [c, r] : m.pores) {
              if (norm(p - c) <= r) {
                v = kAirLevel + airNoise;
                break;
              }
            }
          }
        }
        values[flat] = v;
      }
    }
  }
  return ScalarField(dims, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, std::move(values));
}

}  // namespace viz
