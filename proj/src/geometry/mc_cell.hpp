#pragma once

// Per-layer marching-cubes kernel shared by the OpenMP and serial drivers.

#include "viz/errors.hpp"
#include "viz/geometry.hpp"

namespace viz::detail {

inline void checkMarchable(const ScalarField& field) {
  if (field.rank() != 3) throw DimensionError("marching cubes needs a 3D field");
}

/// Appends the triangles of every cell in z-layer `k` (cells k..k+1).
inline void marchLayer(const ScalarField& field, double iso, std::size_t k, TriangleMesh& out) {
  const auto& dims = field.dims();
  const std::size_t nx = dims[0], ny = dims[1];
  const auto& tri = mc::triangleTable();
  const auto& edgeMask = mc::edgeTable();
  const auto& edges = mc::edgeCorners();
  const auto& sp = field.spacing();
  const auto& org = field.origin();

  std::array<std::size_t, 8> idx{};
  std::array<std::uint32_t, 12> vert{};
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      int config = 0;
      bool skip = false;
      for (int c = 0; c < 8; ++c) {
        idx[c] = (i + (c & 1)) + nx * ((j + ((c >> 1) & 1)) + ny * (k + ((c >> 2) & 1)));
        if (!field.valid(idx[c])) {
          skip = true;
          break;
        }
        if (field.value(idx[c]) >= iso) config |= 1 << c;
      }
      if (skip || edgeMask[config] == 0) continue;

      for (int e = 0; e < 12; ++e) {
        if (!(edgeMask[config] & (1u << e))) continue;
        const int a = edges[e][0];
        const int b = edges[e][1];
        const double va = field.value(idx[a]);
        const double vb = field.value(idx[b]);
        const double t = (iso - va) / (vb - va);
        const Vec3 pa{org[0] + sp[0] * static_cast<double>(i + (a & 1)),
                      org[1] + sp[1] * static_cast<double>(j + ((a >> 1) & 1)),
                      org[2] + sp[2] * static_cast<double>(k + ((a >> 2) & 1))};
        const Vec3 pb{org[0] + sp[0] * static_cast<double>(i + (b & 1)),
                      org[1] + sp[1] * static_cast<double>(j + ((b >> 1) & 1)),
                      org[2] + sp[2] * static_cast<double>(k + ((b >> 2) & 1))};
        const Vec3 p = pa + (pb - pa) * t;
        vert[e] = static_cast<std::uint32_t>(out.vertexCount());
        out.vertices.insert(out.vertices.end(), {p.x, p.y, p.z});
        out.vertexScalars.push_back(va + (vb - va) * t);
      }
      for (int n = 0; tri[config][n] >= 0; n += 3) {
        out.triangles.insert(out.triangles.end(),
                             {vert[tri[config][n]], vert[tri[config][n + 1]], vert[tri[config][n + 2]]});
      }
    }
  }
}

inline void appendMesh(TriangleMesh& dst, const TriangleMesh& src) {
  const auto base = static_cast<std::uint32_t>(dst.vertexCount());
  dst.vertices.insert(dst.vertices.end(), src.vertices.begin(), src.vertices.end());
  dst.vertexScalars.insert(dst.vertexScalars.end(), src.vertexScalars.begin(), src.vertexScalars.end());
  dst.triangles.reserve(dst.triangles.size() + src.triangles.size());
  for (auto i : src.triangles) dst.triangles.push_back(i + base);
}

}  // namespace viz::detail
