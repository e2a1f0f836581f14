#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include "viz/errors.hpp"
#include "viz/geometry.hpp"

namespace viz {

namespace {

void require3d(const ScalarField& field, const char* what) {
  if (field.rank() != 3) {
    throw DimensionError(std::string(what) + " needs a 3D field, got " + std::to_string(field.rank()) + "D");
  }
}

std::string shortest(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

bool Aabb::contains(const Vec3& p, double tol) const {
  for (int a = 0; a < 3; ++a) {
    if (p[a] < min[a] - tol || p[a] > max[a] + tol) return false;
  }
  return true;
}

std::array<Vec3, 8> Aabb::corners() const {
  std::array<Vec3, 8> c;
  for (int i = 0; i < 8; ++i) {
    c[i] = {(i & 1) ? max.x : min.x, (i & 2) ? max.y : min.y, (i & 4) ? max.z : min.z};
  }
  return c;
}

void TriangleMesh::validate() const {
  if (vertices.size() % 3 != 0 || triangles.size() % 3 != 0) {
    throw ArgumentError("mesh arrays must hold whole triples");
  }
  if (vertexScalars.size() != vertexCount()) throw ArgumentError("one scalar per vertex required");
  for (auto i : triangles) {
    if (i >= vertexCount()) throw ArgumentError("triangle index out of range");
  }
}

CutPlane CutPlane::axisAligned(int axis, double offset) {
  if (axis < 0 || axis > 2) throw RangeError("cut plane axis must be 0, 1 or 2");
  CutPlane p;
  p.kind = Kind::Axis;
  p.axis = axis;
  p.normal = Vec3{};
  p.normal[axis] = 1.0;
  p.offset = offset;
  return p;
}

CutPlane CutPlane::oblique(const Vec3& unitNormal, double offset) {
  if (std::abs(norm(unitNormal) - 1.0) > 1e-9) throw ArgumentError("cut plane normal must have unit length");
  CutPlane p;
  p.kind = Kind::Oblique;
  p.normal = unitNormal;
  p.offset = offset;
  return p;
}

Vec3 CutPlane::unitNormal() const {
  if (kind == Kind::Oblique) return normal;
  Vec3 n;
  n[axis] = 1.0;
  return n;
}

Aabb boundingBox(const ScalarField& field) {
  require3d(field, "bounding box");
  Aabb box;
  for (int a = 0; a < 3; ++a) {
    box.min[a] = field.origin()[a];
    box.max[a] = field.origin()[a] + field.spacing()[a] * static_cast<double>(field.dims()[a] - 1);
  }
  return box;
}

std::optional<Aabb> validBoundingBox(const ScalarField& field) {
  require3d(field, "bounding box");
  std::array<std::size_t, 3> lo{SIZE_MAX, SIZE_MAX, SIZE_MAX};
  std::array<std::size_t, 3> hi{0, 0, 0};
  bool any = false;
  const auto& d = field.dims();
  std::size_t flat = 0;
  for (std::size_t k = 0; k < d[2]; ++k) {
    for (std::size_t j = 0; j < d[1]; ++j) {
      for (std::size_t i = 0; i < d[0]; ++i, ++flat) {
        if (!field.valid(flat)) continue;
        any = true;
        const std::array<std::size_t, 3> m{i, j, k};
        for (int a = 0; a < 3; ++a) {
          lo[a] = std::min(lo[a], m[a]);
          hi[a] = std::max(hi[a], m[a]);
        }
      }
    }
  }
  if (!any) return std::nullopt;
  Aabb box;
  for (int a = 0; a < 3; ++a) {
    box.min[a] = field.origin()[a] + field.spacing()[a] * static_cast<double>(lo[a]);
    box.max[a] = field.origin()[a] + field.spacing()[a] * static_cast<double>(hi[a]);
  }
  return box;
}

Aabb boundingBox(const TriangleMesh& mesh) {
  if (mesh.vertexCount() == 0) throw EmptyGeometryError("bounding box of an empty mesh");
  Aabb box{mesh.vertex(0), mesh.vertex(0)};
  for (std::size_t i = 1; i < mesh.vertexCount(); ++i) {
    box.min = componentMin(box.min, mesh.vertex(i));
    box.max = componentMax(box.max, mesh.vertex(i));
  }
  return box;
}

Sample trilinearSample(const ScalarField& field, const Vec3& point) {
  require3d(field, "trilinear sampling");
  const auto& d = field.dims();
  std::array<std::size_t, 3> i0{};
  std::array<double, 3> f{};
  for (int a = 0; a < 3; ++a) {
    double u = (point[a] - field.origin()[a]) / field.spacing()[a];
    const double last = static_cast<double>(d[a] - 1);
    if (!(u >= -1e-9 && u <= last + 1e-9)) return {};
    u = std::clamp(u, 0.0, last);
    if (d[a] == 1) {
      i0[a] = 0;
      f[a] = 0.0;
      continue;
    }
    const double fl = std::min(std::floor(u), last - 1.0);
    i0[a] = static_cast<std::size_t>(fl);
    f[a] = u - fl;
  }
  const std::size_t sx = 1, sy = d[0], sz = d[0] * d[1];
  const std::size_t base = i0[0] + i0[1] * sy + i0[2] * sz;
  double value = 0.0;
  for (int c = 0; c < 8; ++c) {
    const int bx = c & 1, by = (c >> 1) & 1, bz = (c >> 2) & 1;
    const double w = (bx ? f[0] : 1.0 - f[0]) * (by ? f[1] : 1.0 - f[1]) * (bz ? f[2] : 1.0 - f[2]);
    if (w == 0.0) continue;
    const std::size_t idx = base + bx * sx + by * sy + bz * sz;
    if (!field.valid(idx)) return {};
    value += w * field.value(idx);
  }
  return {value, true};
}

SliceImage extractCutPlane(const ScalarField& field, const CutPlane& plane, double resolution) {
  require3d(field, "cut plane extraction");
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw ArgumentError("resolution must be positive");
  const Aabb box = boundingBox(field);
  const Vec3 n = plane.unitNormal();

  Vec3 u, v;
  if (plane.kind == CutPlane::Kind::Axis) {
    static const int kU[3] = {1, 0, 0};
    static const int kV[3] = {2, 2, 1};
    u[kU[plane.axis]] = 1.0;
    v[kV[plane.axis]] = 1.0;
  } else {
    int least = 0;
    for (int a = 1; a < 3; ++a) {
      if (std::abs(n[a]) < std::abs(n[least])) least = a;
    }
    Vec3 e;
    e[least] = 1.0;
    u = normalized(cross(n, e));
    v = cross(n, u);
  }

  // Plane/box intersection polygon, expressed in (u, v).
  const double tol = 1e-9 * std::max(1.0, norm(box.extent()));
  const auto corners = box.corners();
  std::vector<Vec3> hits;
  for (int c = 0; c < 8; ++c) {
    const double dc = dot(n, corners[c]) - plane.offset;
    if (std::abs(dc) <= tol) hits.push_back(corners[c]);
    for (int a = 0; a < 3; ++a) {
      const int c2 = c | (1 << a);
      if (c2 == c) continue;
      const double d2 = dot(n, corners[c2]) - plane.offset;
      if ((dc < -tol && d2 > tol) || (dc > tol && d2 < -tol)) {
        const double t = dc / (dc - d2);
        hits.push_back(corners[c] + (corners[c2] - corners[c]) * t);
      }
    }
  }
  if (hits.empty()) throw EmptyGeometryError("cut plane does not intersect the field bounds");

  const Vec3 p0 = n * plane.offset;
  double umin = std::numeric_limits<double>::infinity(), umax = -umin;
  double vmin = umin, vmax = -umin;
  for (const auto& h : hits) {
    const double hu = dot(h - p0, u), hv = dot(h - p0, v);
    umin = std::min(umin, hu);
    umax = std::max(umax, hu);
    vmin = std::min(vmin, hv);
    vmax = std::max(vmax, hv);
  }
  if (plane.kind == CutPlane::Kind::Axis) {
    // Keep the frame exactly on the lattice hull.
    const int au = plane.axis == 0 ? 1 : 0;
    const int av = plane.axis == 2 ? 1 : 2;
    umin = box.min[au];
    umax = box.max[au];
    vmin = box.min[av];
    vmax = box.max[av];
  }

  SliceImage img;
  const double step = 1.0 / resolution;
  img.width = static_cast<std::size_t>(std::floor((umax - umin) * resolution + 1e-9)) + 1;
  img.height = static_cast<std::size_t>(std::floor((vmax - vmin) * resolution + 1e-9)) + 1;
  if (plane.kind == CutPlane::Kind::Axis) {
    img.origin = u * umin + v * vmin;
    img.origin[plane.axis] = plane.offset;
  } else {
    img.origin = p0 + u * umin + v * vmin;
  }
  img.uStep = u * step;
  img.vStep = v * step;
  img.samples.resize(img.width * img.height);
  img.sampleMask.resize(img.width * img.height);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(img.height); ++j) {
    for (std::size_t i = 0; i < img.width; ++i) {
      const Sample s = trilinearSample(field, img.position(i, static_cast<std::size_t>(j)));
      img.samples[i + j * img.width] = s.valid ? s.value : 0.0;
      img.sampleMask[i + j * img.width] = s.valid ? 1 : 0;
    }
  }
  return img;
}

TriangleMesh weldVertices(const TriangleMesh& mesh, double tolerance) {
  TriangleMesh out;
  std::map<std::tuple<long long, long long, long long>, std::uint32_t> seen;
  std::vector<std::uint32_t> remap(mesh.vertexCount());
  for (std::size_t i = 0; i < mesh.vertexCount(); ++i) {
    const Vec3 p = mesh.vertex(i);
    const auto key = std::make_tuple(std::llround(p.x / tolerance), std::llround(p.y / tolerance),
                                     std::llround(p.z / tolerance));
    auto [it, inserted] = seen.emplace(key, static_cast<std::uint32_t>(out.vertexCount()));
    if (inserted) {
      out.vertices.insert(out.vertices.end(), {p.x, p.y, p.z});
      out.vertexScalars.push_back(mesh.vertexScalars[i]);
    }
    remap[i] = it->second;
  }
  for (std::size_t t = 0; t < mesh.triangleCount(); ++t) {
    const std::uint32_t a = remap[mesh.triangles[3 * t]];
    const std::uint32_t b = remap[mesh.triangles[3 * t + 1]];
    const std::uint32_t c = remap[mesh.triangles[3 * t + 2]];
    if (a == b || b == c || a == c) continue;
    out.triangles.insert(out.triangles.end(), {a, b, c});
  }
  return out;
}

TriangleMesh transformMesh(const TriangleMesh& mesh, const RigidTransform& xf) {
  TriangleMesh out = mesh;
  for (std::size_t i = 0; i < mesh.vertexCount(); ++i) {
    const Vec3 p = xf.apply(mesh.vertex(i));
    out.vertices[3 * i] = p.x;
    out.vertices[3 * i + 1] = p.y;
    out.vertices[3 * i + 2] = p.z;
  }
  return out;
}

double meshArea(const TriangleMesh& mesh) {
  double area = 0.0;
  for (std::size_t t = 0; t < mesh.triangleCount(); ++t) {
    const Vec3 a = mesh.vertex(mesh.triangles[3 * t]);
    const Vec3 b = mesh.vertex(mesh.triangles[3 * t + 1]);
    const Vec3 c = mesh.vertex(mesh.triangles[3 * t + 2]);
    area += 0.5 * norm(cross(b - a, c - a));
  }
  return area;
}

std::map<std::pair<std::uint32_t, std::uint32_t>, int> edgeUseCounts(const TriangleMesh& mesh) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> counts;
  for (std::size_t t = 0; t < mesh.triangleCount(); ++t) {
    for (int e = 0; e < 3; ++e) {
      std::uint32_t a = mesh.triangles[3 * t + e];
      std::uint32_t b = mesh.triangles[3 * t + (e + 1) % 3];
      if (a > b) std::swap(a, b);
      ++counts[{a, b}];
    }
  }
  return counts;
}

void writeOff(std::ostream& out, const TriangleMesh& mesh) {
  out << "OFF\n" << mesh.vertexCount() << ' ' << mesh.triangleCount() << " 0\n";
  for (std::size_t i = 0; i < mesh.vertexCount(); ++i) {
    out << shortest(mesh.vertices[3 * i]) << ' ' << shortest(mesh.vertices[3 * i + 1]) << ' '
        << shortest(mesh.vertices[3 * i + 2]) << '\n';
  }
  for (std::size_t t = 0; t < mesh.triangleCount(); ++t) {
    out << "3 " << mesh.triangles[3 * t] << ' ' << mesh.triangles[3 * t + 1] << ' '
        << mesh.triangles[3 * t + 2] << '\n';
  }
}

TriangleMesh readOff(std::istream& in) {
  std::string magic;
  in >> magic;
  if (magic != "OFF") throw FormatError("OFF: bad header '" + magic + "'");
  std::size_t nv = 0, nf = 0, ne = 0;
  if (!(in >> nv >> nf >> ne)) throw FormatError("OFF: bad counts line");
  TriangleMesh mesh;
  mesh.vertices.resize(3 * nv);
  for (auto& c : mesh.vertices) {
    if (!(in >> c)) throw FormatError("OFF: truncated vertex list");
  }
  mesh.vertexScalars.assign(nv, 0.0);
  for (std::size_t f = 0; f < nf; ++f) {
    int k = 0;
    std::uint32_t a = 0, b = 0, c = 0;
    if (!(in >> k >> a >> b >> c) || k != 3) throw FormatError("OFF: only triangle faces are supported");
    mesh.triangles.insert(mesh.triangles.end(), {a, b, c});
  }
  mesh.validate();
  return mesh;
}

}  // namespace viz
