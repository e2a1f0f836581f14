#pragma once

// Geometry extraction from 3D scalar fields: trilinear sampling, marching
// cubes isosurfaces, cut-plane sample grids and bounding boxes.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "viz/field.hpp"
#include "viz/math.hpp"

namespace viz {

struct Aabb {
  Vec3 min;
  Vec3 max;

  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 extent() const { return max - min; }
  bool contains(const Vec3& p, double tol = 0.0) const;
  std::array<Vec3, 8> corners() const;
  friend bool operator==(const Aabb&, const Aabb&) = default;
};

inline Vec3 center(const Aabb& box) { return box.center(); }

struct TriangleMesh {
  std::vector<double> vertices;          // xyz triples
  std::vector<std::uint32_t> triangles;  // index triples
  std::vector<double> vertexScalars;     // one per vertex

  std::size_t vertexCount() const { return vertices.size() / 3; }
  std::size_t triangleCount() const { return triangles.size() / 3; }
  bool empty() const { return triangles.empty(); }
  Vec3 vertex(std::size_t i) const { return {vertices[3 * i], vertices[3 * i + 1], vertices[3 * i + 2]}; }

  /// Throws ArgumentError when an invariant is broken.
  void validate() const;
  friend bool operator==(const TriangleMesh&, const TriangleMesh&) = default;
};

struct CutPlane {
  enum class Kind { Axis, Oblique };

  Kind kind = Kind::Axis;
  int axis = 2;             // Kind::Axis
  Vec3 normal{0, 0, 1};     // Kind::Oblique, unit length
  double offset = 0.0;      // world position along axis / normal

  static CutPlane axisAligned(int axis, double offset);
  static CutPlane oblique(const Vec3& unitNormal, double offset);

  Vec3 unitNormal() const;
  friend bool operator==(const CutPlane&, const CutPlane&) = default;
};

/// Regular grid of field samples on a plane. Sample (i, j) lives at
/// origin + i*uStep + j*vStep and is stored at index i + j*width.
struct SliceImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> samples;
  std::vector<std::uint8_t> sampleMask;
  Vec3 origin;
  Vec3 uStep;
  Vec3 vStep;

  Vec3 position(std::size_t i, std::size_t j) const {
    return origin + uStep * static_cast<double>(i) + vStep * static_cast<double>(j);
  }
  friend bool operator==(const SliceImage&, const SliceImage&) = default;
};

struct Sample {
  double value = 0.0;
  bool valid = false;
};

/// Hull of the voxel centres of a 3D field.
Aabb boundingBox(const ScalarField& field);
Aabb boundingBox(const TriangleMesh& mesh);

/// Hull of the valid voxel centres; nullopt when every voxel is masked.
std::optional<Aabb> validBoundingBox(const ScalarField& field);

Sample trilinearSample(const ScalarField& field, const Vec3& point);

/// Marching cubes over cells whose 8 corners are all valid. Corners with
/// value >= isovalue are inside; triangle normals (right-hand winding) point
/// from the inside toward the outside, i.e. down the gradient.
TriangleMesh marchingCubes(const ScalarField& field, double isovalue);

SliceImage extractCutPlane(const ScalarField& field, const CutPlane& plane, double resolution);

/// Merges vertices closer than `tolerance` (per component) and drops
/// triangles that collapse.
TriangleMesh weldVertices(const TriangleMesh& mesh, double tolerance = 1e-9);

TriangleMesh transformMesh(const TriangleMesh& mesh, const RigidTransform& xf);

double meshArea(const TriangleMesh& mesh);

/// Undirected edge -> number of incident triangles.
std::map<std::pair<std::uint32_t, std::uint32_t>, int> edgeUseCounts(const TriangleMesh& mesh);

void writeOff(std::ostream& out, const TriangleMesh& mesh);
TriangleMesh readOff(std::istream& in);

namespace mc {

/// Triangle table generated at first use. Entry `c` lists edge-index
/// triples for cube configuration `c`, terminated by -1.
const std::array<std::array<std::int8_t, 32>, 256>& triangleTable();
/// Bit e set when edge e is crossed in configuration c.
const std::array<std::uint16_t, 256>& edgeTable();
/// Corner pair (lower corner first) of each of the 12 cube edges.
const std::array<std::array<int, 2>, 12>& edgeCorners();

}  // namespace mc

namespace serial {

TriangleMesh marchingCubes(const ScalarField& field, double isovalue);

}  // namespace serial

}  // namespace viz
