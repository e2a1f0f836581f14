// Marching-cubes case table.
//
// Rather than transcribing a 256-entry table, the table is derived from one
// rule applied to every cube face: walking a face boundary counter-clockwise
// as seen from outside the cube, each edge where the walk enters the inside
// region (value >= isovalue) is joined to the next edge where it leaves.
// On the two-diagonal ambiguous face this always separates the inside
// corners. Because the decision depends only on the four corner signs of a
// face, neighbouring cubes agree on every shared face and the extracted
// surface is crack-free. Joined segments are chained into closed loops and
// each loop is fan-triangulated from the first edge that yields no
// triangle lying flat in a cube face. See
// docs/marching_cubes_table.md for the corner/edge numbering.

#include <cassert>

#include "viz/geometry.hpp"

namespace viz::mc {

namespace {

constexpr Vec3 cornerPosition(int c) {
  return {static_cast<double>(c & 1), static_cast<double>((c >> 1) & 1), static_cast<double>((c >> 2) & 1)};
}

struct Tables {
  std::array<std::array<std::int8_t, 32>, 256> triangles{};
  std::array<std::uint16_t, 256> edges{};
  std::array<std::array<int, 2>, 12> edgeCorners{};
};

int edgeBetween(const std::array<std::array<int, 2>, 12>& edges, int a, int b) {
  if (a > b) std::swap(a, b);
  for (int e = 0; e < 12; ++e) {
    if (edges[e][0] == a && edges[e][1] == b) return e;
  }
  return -1;
}

/// True when all three edges lie on one face of the cube. A triangle like
/// that would also be emitted by the neighbouring cube.
bool onCommonFace(const std::array<std::array<int, 2>, 12>& edges, int a, int b, int c) {
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side < 2; ++side) {
      auto on = [&](int e) {
        return ((edges[e][0] >> axis) & 1) == side && ((edges[e][1] >> axis) & 1) == side;
      };
      if (on(a) && on(b) && on(c)) return true;
    }
  }
  return false;
}

Tables buildTables() {
  Tables t;
  // x-edges, y-edges, z-edges; lower corner first.
  int e = 0;
  for (int axis = 0; axis < 3; ++axis) {
    const int bit = 1 << axis;
    for (int c = 0; c < 8; ++c) {
      if (c & bit) continue;
      t.edgeCorners[e++] = {c, c | bit};
    }
  }

  // Face corner cycles, counter-clockwise seen from outside.
  std::array<std::array<int, 4>, 6> faces{};
  int f = 0;
  for (int axis = 0; axis < 3; ++axis) {
    const int b = (axis + 1) % 3;
    const int c = (axis + 2) % 3;
    for (int side = 0; side < 2; ++side) {
      const int base = side << axis;
      std::array<int, 4> cyc = {base, base | (1 << b), base | (1 << b) | (1 << c), base | (1 << c)};
      if (side == 0) std::swap(cyc[1], cyc[3]);
      faces[f++] = cyc;
    }
  }

  for (int config = 0; config < 256; ++config) {
    auto hot = [config](int corner) { return (config >> corner) & 1; };
    std::array<int, 12> successor;
    successor.fill(-1);
    std::uint16_t crossed = 0;

    for (const auto& face : faces) {
      // Crossings in walk order: (edge, entering?)
      std::array<std::pair<int, bool>, 4> crossings{};
      int n = 0;
      for (int i = 0; i < 4; ++i) {
        const int a = face[i];
        const int b = face[(i + 1) % 4];
        if (hot(a) == hot(b)) continue;
        crossings[n++] = {edgeBetween(t.edgeCorners, a, b), hot(b) != 0};
      }
      for (int i = 0; i < n; ++i) {
        if (!crossings[i].second) continue;
        for (int j = 1; j < n; ++j) {
          const auto& next = crossings[(i + j) % n];
          if (!next.second) {
            successor[crossings[i].first] = next.first;
            break;
          }
        }
      }
    }

    std::vector<std::vector<int>> loops;
    std::array<bool, 12> used{};
    for (int start = 0; start < 12; ++start) {
      if (successor[start] < 0 || used[start]) continue;
      std::vector<int> loop;
      for (int cur = start; !used[cur]; cur = successor[cur]) {
        used[cur] = true;
        loop.push_back(cur);
        crossed |= static_cast<std::uint16_t>(1u << cur);
      }
      loops.push_back(std::move(loop));
    }

    int k = 0;
    for (const auto& loop : loops) {
      const std::size_t n = loop.size();
      std::size_t start = 0;
      for (; start < n; ++start) {
        bool flat = false;
        for (std::size_t i = 1; i + 1 < n && !flat; ++i) {
          flat = onCommonFace(t.edgeCorners, loop[start], loop[(start + i) % n], loop[(start + i + 1) % n]);
        }
        if (!flat) break;
      }
      assert(start < n);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        t.triangles[config][k++] = static_cast<std::int8_t>(loop[start]);
        t.triangles[config][k++] = static_cast<std::int8_t>(loop[(start + i) % n]);
        t.triangles[config][k++] = static_cast<std::int8_t>(loop[(start + i + 1) % n]);
      }
    }
    assert(k < 32);
    for (; k < 32; ++k) t.triangles[config][k] = -1;
    t.edges[config] = crossed;
  }

  // Orient so that normals point from inside to outside. With only corner 0
  // inside, the outside lies toward +x+y+z.
  auto mid = [&](int edge) {
    return (cornerPosition(t.edgeCorners[edge][0]) + cornerPosition(t.edgeCorners[edge][1])) * 0.5;
  };
  const auto& tri = t.triangles[1];
  const Vec3 n = cross(mid(tri[1]) - mid(tri[0]), mid(tri[2]) - mid(tri[0]));
  if (dot(n, Vec3{1, 1, 1}) < 0) {
    for (auto& row : t.triangles) {
      for (int i = 0; i + 2 < 32 && row[i] >= 0; i += 3) std::swap(row[i + 1], row[i + 2]);
    }
  }
  return t;
}

const Tables& tables() {
  static const Tables t = buildTables();
  return t;
}

}  // namespace

const std::array<std::array<std::int8_t, 32>, 256>& triangleTable() { return tables().triangles; }
const std::array<std::uint16_t, 256>& edgeTable() { return tables().edges; }
const std::array<std::array<int, 2>, 12>& edgeCorners() { return tables().edgeCorners; }

}  // namespace viz::mc
