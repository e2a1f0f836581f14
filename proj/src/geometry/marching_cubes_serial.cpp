#include "mc_cell.hpp"

namespace viz::serial {

TriangleMesh marchingCubes(const ScalarField& field, double isovalue) {
  detail::checkMarchable(field);
  const auto& dims = field.dims();
  if (dims[0] < 2 || dims[1] < 2 || dims[2] < 2) return {};
  TriangleMesh mesh;
  for (std::size_t k = 0; k + 1 < dims[2]; ++k) detail::marchLayer(field, isovalue, k, mesh);
  return mesh;
}

}  // namespace viz::serial
