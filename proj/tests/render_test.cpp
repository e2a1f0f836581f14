#include <cmath>

#include "doctest.h"
#include "support/oracles.hpp"
#include "viz/errors.hpp"
#include "viz/render.hpp"

using namespace viz;
using viz::testing::Rng;

namespace {

TransferFunction flatTf(double gray, double alpha) {
  TransferFunction tf;
  tf.paletteName = "flat";
  tf.colorPoints = {{-1e9, {gray, gray, gray}}, {1e9, {gray, gray, gray}}};
  tf.opacityPoints = {{-1e9, alpha}, {1e9, alpha}};
  return tf;
}

/// Distance the ray travels inside [lo, hi]^3, by the slab method.
double chordLength(const Vec3& o, const Vec3& d, double lo, double hi) {
  double t0 = -INFINITY, t1 = INFINITY;
  for (int a = 0; a < 3; ++a) {
    double ta = (lo - o[a]) / d[a], tb = (hi - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return std::max(0.0, t1 - std::max(t0, 0.0)) * norm(d);
}

ScalarField gaussianBlob(std::size_t n) {
  std::vector<double> v(n * n * n);
  const double c = 0.5 * static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const double dx = i - c, dy = j - c, dz = k - c;
        v[i + n * (j + n * k)] = std::exp(-(dx * dx + dy * dy + dz * dz) / (0.08 * n * n));
      }
  return ScalarField::fromValues({n, n, n}, v);
}

Camera lookAt(const Vec3& eye, const Vec3& at) {
  Camera c;
  c.position = eye;
  c.focalPoint = at;
  c.viewUp = {0, 0, 1};
  return c;
}

}  // namespace

TEST_CASE("transfer function interpolates and clamps") {
  const TransferFunction tf = TransferFunction::fromPalette("gray", 0.0, 2.0, 0.4);
  const Rgba mid = tfEval(tf, 1.0);
  CHECK(mid.r == doctest::Approx(0.5));
  CHECK(mid.a == doctest::Approx(0.2));
  CHECK(tfEval(tf, -5.0).r == 0.0);
  CHECK(tfEval(tf, 5.0).a == doctest::Approx(0.4));
  CHECK_THROWS_AS(TransferFunction::fromPalette("plasma", 0, 1), ArgumentError);
  CHECK_THROWS_AS(TransferFunction::fromPalette("gray", 1, 1), ArgumentError);
  for (const auto& name : paletteNames()) {
    const TransferFunction p = TransferFunction::fromPalette(name, -1, 1);
    p.validate();
    CHECK(p.lo() == -1.0);
    CHECK(p.hi() == 1.0);
  }
}

TEST_CASE("opacity window is zero outside and flat inside") {
  TransferFunction tf = TransferFunction::fromPalette("heat", 0.0, 0.02);
  tf.opacityPoints = TransferFunction::window(0.0125, 0.02, 0.6);
  tf.validate();
  CHECK(tfEval(tf, 0.012).a == 0.0);
  CHECK(tfEval(tf, 0.015).a == doctest::Approx(0.6));
  CHECK(tfEval(tf, 0.021).a == 0.0);
}

TEST_CASE("homogeneous cube matches the closed-form slab oracle") {
  const ScalarField cube = ScalarField::constant({16, 16, 16}, 0.5);
  const double gray = 0.8, alpha = 0.2;
  const TransferFunction tf = flatTf(gray, alpha);
  struct Ray {
    Vec3 o, d;
  };
  const Ray rays[] = {{{-5, 7.3, 7.7}, {1, 0, 0}},
                      {{7.5, -3, 6.1}, normalized(Vec3{0.1, 1, 0.05})},
                      {{-2, -2, -2}, normalized(Vec3{1, 1.1, 0.9})}};
  for (const auto& ray : rays) {
    for (double step : {0.5, 0.7, 0.25}) {
      const RayResult r = traceRay(cube, tf, ray.o, ray.d, step);
      const auto oracle = viz::testing::homogeneousSlab(gray, alpha, chordLength(ray.o, ray.d, 0.0, 15.0));
      CHECK(std::abs(r.transmittance - oracle.transmittance) < 1e-6);
      CHECK(std::abs(r.color.r - oracle.color) < 1e-6);
    }
  }
  const RayResult miss = traceRay(cube, tf, {-5, 20, 7}, {1, 0, 0}, 0.5);
  CHECK(miss.transmittance == 1.0);
  CHECK(miss.samples == 0);
}

TEST_CASE("ramp field matches explicit midpoint compositing") {
  std::vector<double> v(11 * 3 * 3);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < 11; ++i) v[i + 11 * (j + 3 * k)] = 0.1 * static_cast<double>(i);
  const ScalarField f = ScalarField::fromValues({11, 3, 3}, v);
  TransferFunction tf;
  tf.colorPoints = {{0.0, {0, 0, 0}}, {1.0, {1, 1, 1}}};
  tf.opacityPoints = {{0.0, 0.0}, {1.0, 0.5}};
  const double step = 0.75;
  const RayResult r = traceRay(f, tf, {-1, 1, 1}, {1, 0, 0}, step);
  // Chord x in [0, 10]: segments of 0.75 and a final 0.25.
  std::vector<double> e, a, len;
  for (double s0 = 0.0; s0 < 10.0 - 1e-12; s0 += step) {
    const double seg = std::min(step, 10.0 - s0);
    const double x = s0 + 0.5 * seg;
    e.push_back(0.1 * x);
    a.push_back(0.05 * x);
    len.push_back(seg);
  }
  const auto oracle = viz::testing::compositeSamples(e, a, len);
  CHECK(std::abs(r.color.r - oracle.color) < 1e-9);
  CHECK(std::abs(r.transmittance - oracle.transmittance) < 1e-9);
}

TEST_CASE("halving the step changes ray results by less than 1e-3") {
  const ScalarField blob = gaussianBlob(24);
  const TransferFunction tf = TransferFunction::fromPalette("rainbow", 0.0, 1.0, 0.3);
  const Camera cam = lookAt({40, -30, 25}, {11.5, 11.5, 11.5});
  double worst = 0.0;
  for (std::size_t y = 0; y < 32; ++y) {
    for (std::size_t x = 0; x < 32; ++x) {
      const Vec3 d = cam.rayDirection(x + 0.5, y + 0.5, 32, 32);
      const RayResult a = traceRay(blob, tf, cam.position, d, 0.25);
      const RayResult b = traceRay(blob, tf, cam.position, d, 0.125);
      worst = std::max({worst, std::abs(a.color.r - b.color.r), std::abs(a.color.g - b.color.g),
                        std::abs(a.color.b - b.color.b), std::abs(a.transmittance - b.transmittance)});
    }
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("OpenMP and serial ray casting agree bit for bit and are repeatable") {
  const ScalarField blob = gaussianBlob(20);
  const TransferFunction tf = TransferFunction::fromPalette("heat", 0.0, 1.0, 0.5);
  const Camera cam = lookAt({35, -25, 20}, {9.5, 9.5, 9.5});
  const VolumeStyle style{0.5, {0.1, 0.1, 0.1}};
  const Image a = raycast(blob, tf, cam, style, 64, 48);
  CHECK(a == serial::raycast(blob, tf, cam, style, 64, 48));
  CHECK(a == raycast(blob, tf, cam, style, 64, 48));
  CHECK_THROWS_AS(raycast(ScalarField::constant({3, 3}, 1.0), tf, cam, style, 8, 8), DimensionError);
  CHECK_THROWS_AS(raycast(blob, tf, cam, VolumeStyle{0.0, {}}, 8, 8), ArgumentError);
}

TEST_CASE("masked padding on the far side does not change the image") {
  const ScalarField blob = gaussianBlob(12);
  std::vector<double> v(15 * 14 * 13, 7.0);
  std::vector<std::uint8_t> mask(v.size(), 0);
  for (std::size_t k = 0; k < 12; ++k)
    for (std::size_t j = 0; j < 12; ++j)
      for (std::size_t i = 0; i < 12; ++i) {
        v[i + 15 * (j + 14 * k)] = blob.value(i + 12 * (j + 12 * k));
        mask[i + 15 * (j + 14 * k)] = 1;
      }
  const ScalarField padded({15, 14, 13}, {1, 1, 1}, {0, 0, 0}, v, mask);
  const TransferFunction tf = TransferFunction::fromPalette("gray", 0.0, 1.0, 0.6);
  const Camera cam = lookAt({30, -20, 18}, {5.5, 5.5, 5.5});
  const VolumeStyle style{0.4, {}};
  CHECK(raycast(blob, tf, cam, style, 40, 40) == raycast(padded, tf, cam, style, 40, 40));
}

TEST_CASE("depth buffer keeps the nearest triangle in either order") {
  TriangleMesh near, far;
  near.vertices = {-1, -1, 0, 1, -1, 0, 0, 1, 0};
  far.vertices = {-2, -2, -1, 2, -2, -1, 0, 2, -1};
  near.triangles = far.triangles = {0, 1, 2};
  near.vertexScalars = far.vertexScalars = {0, 0, 0};
  Camera cam;
  cam.position = {0, 0, 5};
  cam.focalPoint = {0, 0, 0};
  cam.viewUp = {0, 1, 0};
  DepthImage a(32, 32, {});
  rasterizeMeshInto(near, cam, {1, 0, 0}, a);
  rasterizeMeshInto(far, cam, {0, 0, 1}, a);
  DepthImage b(32, 32, {});
  rasterizeMeshInto(far, cam, {0, 0, 1}, b);
  rasterizeMeshInto(near, cam, {1, 0, 0}, b);
  CHECK(a.image == b.image);
  const std::uint8_t* centre = a.image.at(16, 16);
  CHECK(centre[0] > 0);
  CHECK(centre[2] == 0);
  CHECK(a.depth[16 + 32 * 16] == doctest::Approx(5.0).epsilon(0.01));
  CHECK(a.image.at(0, 0)[0] == 0);
}

TEST_CASE("volume behind an opaque surface is hidden") {
  const ScalarField cube = ScalarField::constant({8, 8, 8}, 1.0);
  const TransferFunction tf = flatTf(1.0, 0.9);
  Camera cam = lookAt({3.5, -20, 3.5}, {3.5, 3.5, 3.5});
  DepthImage target(16, 16, {});
  TriangleMesh wall;
  wall.vertices = {-50, -5, -50, 50, -5, -50, 0, -5, 50};
  wall.triangles = {0, 1, 2};
  wall.vertexScalars = {0, 0, 0};
  rasterizeMeshInto(wall, cam, {0, 1, 0}, target);
  const Image before = target.image;
  raycastInto(cube, tf, cam, 0.5, RigidTransform{}, target);
  CHECK(target.image == before);
}

TEST_CASE("colorbar spans the transfer function range") {
  const TransferFunction tf = TransferFunction::fromPalette("rainbow", 0.0, 1.0);
  const Image bar = colorbarImage(tf, 64, 24);
  CHECK(colorbarGradientRows(24) == 16);
  CHECK(colorbarGradientRows(12) == 12);
  const std::uint8_t* left = bar.at(0, 0);
  const std::uint8_t* right = bar.at(63, 0);
  CHECK(left[2] == 255);
  CHECK(left[0] == 0);
  CHECK(right[0] == 255);
  CHECK(right[2] == 0);
  CHECK_THROWS_AS(colorbarImage(tf, 4, 4), SizeError);
}

TEST_CASE("histogram bars scale to the peak bin") {
  Histogram h;
  h.binEdges = {0, 1, 2, 3, 4};
  h.counts = {10, 5, 0, 10};
  const Image img = histogramImage(h, 40, 20);
  auto filled = [&](std::size_t x, std::size_t y) { return img.at(x, y)[0] > 150; };
  CHECK(filled(5, 0));
  CHECK_FALSE(filled(15, 9));
  CHECK(filled(15, 10));
  CHECK_FALSE(filled(25, 19));
}

TEST_CASE("composite places tiles by row and column") {
  std::vector<Tile> tiles;
  tiles.push_back({Image(10, 10, {1, 0, 0}), 0, 0});
  tiles.push_back({Image(10, 10, {0, 1, 0}), 1, 2});
  const Image out = compositeViews(tiles, 2, 3, 10, 10, {0, 0, 0});
  CHECK(out.width == 30);
  CHECK(out.height == 20);
  CHECK(out.at(5, 5)[0] == 255);
  CHECK(out.at(25, 15)[1] == 255);
  CHECK(out.at(15, 5)[0] == 0);
  CHECK_THROWS_AS(compositeViews(tiles, 1, 3, 10, 10), RangeError);
  CHECK_THROWS_AS(compositeViews({}, 1, 1, 4000, 10), SizeError);
}

TEST_CASE("PPM encoding has the binary header and RGB payload") {
  Image img(2, 1, {1, 0, 0});
  const std::string ppm = encodePpm(img);
  CHECK(ppm.rfind("P6\n2 1\n255\n", 0) == 0);
  CHECK(ppm.size() == 11 + 6);
  CHECK(static_cast<unsigned char>(ppm[11]) == 255);
  CHECK(ppm[12] == 0);
}

TEST_CASE("camera ray through the image centre is the view direction") {
  const Camera cam = lookAt({1, 2, 3}, {4, -1, 0});
  const Vec3 d = cam.rayDirection(50, 40, 100, 80);
  CHECK(norm(d - cam.forward()) < 1e-12);
  Camera bad = cam;
  bad.viewUp = cam.forward();
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}
