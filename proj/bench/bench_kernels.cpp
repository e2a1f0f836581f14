// Serial reference kernels against their OpenMP counterparts.
//   ./bench_kernels --benchmark_filter=Raycast

#include <benchmark/benchmark.h>

#include <map>

#include "viz/field.hpp"
#include "viz/geometry.hpp"
#include "viz/io.hpp"
#include "viz/render.hpp"
#include "viz/session.hpp"

using namespace viz;

namespace {

const ScalarField& rock(std::size_t n) {
  static std::map<std::size_t, ScalarField> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, synthMeteoritePhantom({n, n, n}, 3)).first;
  return it->second;
}

const ScalarField& lumps() {
  static const ScalarField f = synthQcdLumps({16, 16, 16, 16}, 12, 7);
  return f;
}

template <bool Serial>
void Raycast(benchmark::State& state) {
  const ScalarField& f = rock(static_cast<std::size_t>(state.range(0)));
  TransferFunction tf = TransferFunction::fromPalette("heat", 0.002, 0.02);
  tf.opacityPoints = TransferFunction::window(0.002, 0.02, 0.3);
  const Camera cam = frameBox(boundingBox(f));
  const VolumeStyle style{0.5, {0.1, 0.1, 0.1}};
  for (auto _ : state) {
    Image img = Serial ? serial::raycast(f, tf, cam, style, 256, 256) : raycast(f, tf, cam, style, 256, 256);
    benchmark::DoNotOptimize(img.pixels.data());
  }
}

template <bool Serial>
void MarchingCubes(benchmark::State& state) {
  const ScalarField& f = rock(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    TriangleMesh m = Serial ? serial::marchingCubes(f, 0.0125) : marchingCubes(f, 0.0125);
    benchmark::DoNotOptimize(m);
  }
}

template <bool Serial>
void Project(benchmark::State& state) {
  const ScalarField& f = lumps();
  for (auto _ : state) {
    ScalarField p = Serial ? serial::project(f, 3, Reducer::Mean) : project(f, 3, Reducer::Mean);
    benchmark::DoNotOptimize(p);
  }
}

template <bool Serial>
void Histogram64(benchmark::State& state) {
  const ScalarField& f = rock(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Histogram h = Serial ? serial::histogram(f, 64) : histogram(f, 64);
    benchmark::DoNotOptimize(h);
  }
}

}  // namespace

BENCHMARK(Raycast<true>)->Name("Raycast/serial")->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(Raycast<false>)->Name("Raycast/openmp")->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(MarchingCubes<true>)->Name("MarchingCubes/serial")->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(MarchingCubes<false>)->Name("MarchingCubes/openmp")->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(Project<true>)->Name("Project/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(Project<false>)->Name("Project/openmp")->Unit(benchmark::kMicrosecond);
BENCHMARK(Histogram64<true>)->Name("Histogram/serial")->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(Histogram64<false>)->Name("Histogram/openmp")->Arg(64)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
