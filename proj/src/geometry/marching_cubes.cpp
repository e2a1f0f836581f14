#include "mc_cell.hpp"

namespace viz {

TriangleMesh marchingCubes(const ScalarField& field, double isovalue) {
  detail::checkMarchable(field);
  const auto& dims = field.dims();
  if (dims[0] < 2 || dims[1] < 2 || dims[2] < 2) return {};
  const std::size_t layers = dims[2] - 1;
  std::vector<TriangleMesh> parts(layers);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(layers); ++k) {
    detail::marchLayer(field, isovalue, static_cast<std::size_t>(k), parts[k]);
  }
  // Concatenating in layer order reproduces the serial storage-order output.
  TriangleMesh mesh;
  for (const auto& part : parts) detail::appendMesh(mesh, part);
  return mesh;
}

}  // namespace viz
