#include <algorithm>
#include <cmath>

#include "viz/errors.hpp"
#include "viz/session.hpp"

namespace viz {

namespace {

Camera cameraForView(const Camera& shared, const View& v) {
  Camera c = shared;
  c.position += v.basePosition;
  c.focalPoint += v.basePosition;
  return c;
}

double minSpacing(const ScalarField& f) { return *std::min_element(f.spacing().begin(), f.spacing().end()); }

}  // namespace

Image renderView(const Session& session, int viewId, std::size_t width, std::size_t height) {
  const View* v = session.findView(viewId);
  if (!v) throw ArgumentError("unknown view: " + std::to_string(viewId));
  if (width < 1 || height < 1) throw SizeError("view image must be at least 1x1");
  session.camera.validate();

  const ScalarField field = derivedField(session, *v);
  const RigidTransform xf = v->placement();
  const Camera cam = cameraForView(session.camera, *v);
  const double h = minSpacing(field);

  DepthImage target(width, height, kViewBackground);
  for (const auto& plane : v->cutPlanes) {
    rasterizeSliceInto(extractCutPlane(field, plane, 1.0 / h), v->tf, cam, xf, target);
  }
  for (double level : v->isoLevels) {
    const Rgba c = tfEval(v->tf, level);
    rasterizeMeshInto(transformMesh(marchingCubes(field, level), xf), cam, {c.r, c.g, c.b}, target);
  }
  if (v->showVolume) raycastInto(field, v->tf, cam, 0.5 * h, xf, target);

  Image img = std::move(target.image);
  const std::size_t insetW = std::max<std::size_t>(width * 2 / 5, 8);
  const std::size_t insetH = std::max<std::size_t>(height / 8, 16);
  if (insetW + 2 <= width && insetH + 2 <= height) {
    if (v->showColorbar) blit(img, colorbarImage(v->tf, insetW, insetH), 1, height - insetH - 1);
    if (v->showHistogram && v->histBins > 0 && field.validCount() > 0) {
      blit(img, histogramImage(histogram(field, v->histBins), insetW, insetH), width - insetW - 1, height - insetH - 1);
    }
  }
  return img;
}

Image renderComposite(const Session& session, std::size_t width, std::size_t height) {
  const std::size_t cols = layoutCols(session);
  const std::size_t rows = layoutRows(session);
  if (width > kMaxCompositeWidth || height > kMaxCompositeHeight) {
    throw SizeError("composite " + std::to_string(width) + "x" + std::to_string(height) + " exceeds " +
                    std::to_string(kMaxCompositeWidth) + "x" + std::to_string(kMaxCompositeHeight));
  }
  const std::size_t cellW = width / cols, cellH = height / rows;
  if (cellW < 1 || cellH < 1) throw SizeError("composite too small for the layout");
  std::vector<Tile> tiles;
  for (const auto& v : session.views) tiles.push_back({renderView(session, v.id, cellW, cellH), v.cell.row, v.cell.col});
  Image grid = compositeViews(tiles, rows, cols, cellW, cellH, kViewBackground);
  if (grid.width == width && grid.height == height) return grid;
  Image out(width, height, kViewBackground);
  blit(out, grid, 0, 0);
  return out;
}

}  // namespace viz
