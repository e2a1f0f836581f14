// Acceptance suite: one PASS/FAIL line per top-level criterion. Tolerances
// are fixed here; the exit status is non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "support/oracles.hpp"
#include "viz/gateway.hpp"
#include "viz/io.hpp"

using namespace viz;
namespace fs = std::filesystem;
using viz::testing::Rng;

namespace {

constexpr double kQcdTimeLimitSeconds = 60.0;
constexpr double kAreaTolerance = 0.05;
constexpr double kResampleTolerance = 1e-6;  // fraction of the data range
constexpr double kOracleTolerance = 1e-6;
constexpr double kStepHalvingTolerance = 1e-3;
constexpr int kRandomFields = 500;
constexpr int kGeneratedAsts = 1000;
constexpr int kPointerEvents = 1000;
constexpr double kPivotTolerance = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Records the first failure message; later checks keep counting.
class Checker {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary << " (" << checks_ << " checks";
    if (failures_) s << ", " << failures_ << " failed; first: " << first_;
    s << ")";
    return {failures_ == 0, s.str()};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

fs::path workDir() {
  const fs::path dir = fs::temp_directory_path() / "viz_acceptance";
  fs::create_directories(dir);
  return dir;
}

struct Ppm {
  std::size_t width = 0, height = 0;
  std::string rgb;
  const unsigned char* at(std::size_t x, std::size_t y) const {
    return reinterpret_cast<const unsigned char*>(rgb.data()) + 3 * (x + y * width);
  }
};

Ppm readPpm(const fs::path& p) {
  const std::string bytes = readFile(p);
  std::istringstream in(bytes);
  std::string magic;
  int maxval = 0;
  Ppm out;
  in >> magic >> out.width >> out.height >> maxval;
  in.get();
  if (magic != "P6" || maxval != 255) throw FormatError("not a binary PPM: " + p.string());
  out.rgb = bytes.substr(static_cast<std::size_t>(in.tellg()));
  if (out.rgb.size() != 3 * out.width * out.height) throw FormatError("short PPM: " + p.string());
  return out;
}

bool tileMatches(const Ppm& ppm, std::size_t x0, std::size_t y0, const Image& tile) {
  for (std::size_t y = 0; y < tile.height; ++y) {
    for (std::size_t x = 0; x < tile.width; ++x) {
      const unsigned char* a = ppm.at(x0 + x, y0 + y);
      const std::uint8_t* b = tile.at(x, y);
      if (a[0] != b[0] || a[1] != b[1] || a[2] != b[2]) return false;
    }
  }
  return true;
}

std::size_t litPixels(const Image& img, const Image& blank) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < img.pixels.size(); i += 4) {
    n += img.pixels[i] != blank.pixels[i] || img.pixels[i + 1] != blank.pixels[i + 1] ||
         img.pixels[i + 2] != blank.pixels[i + 2];
  }
  return n;
}

lang::ScriptResult mustRun(const Session& s, const std::string& text) {
  lang::ScriptResult r = lang::runScript(s, text);
  if (!r.errors.empty()) throw Error("script failed: " + r.errors.front().message);
  return r;
}

// Criteria ---------------------------------------------------------------------

Outcome qcdScenario() {
  Checker c;
  const fs::path script = fs::path(VIZ_SOURCE_DIR) / "scripts" / "qcd.vl";
  const fs::path out = workDir() / "qcd";
  fs::remove_all(out);
  fs::create_directories(out);
  const auto t0 = std::chrono::steady_clock::now();
  const std::string cmd = std::string(VIZ_BINARY) + " run " + script.string() + " --headless --strict --out " +
                          out.string() + " > " + (out / "log.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.check(WIFEXITED(status) && WEXITSTATUS(status) == 0, "viz run did not exit 0");
  c.check(seconds < kQcdTimeLimitSeconds, "took " + std::to_string(seconds) + " s");
  if (!fs::exists(out / "fig1.ppm")) {
    c.check(false, "fig1.ppm missing");
    return c.outcome("QCD scenario");
  }
  const Ppm fig = readPpm(out / "fig1.ppm");
  c.check(fig.width == 1920 && fig.height == 1200, "composite is not 1920x1200");

  // Rebuild the session in process and inspect each tile of the written image.
  const lang::ScriptResult r = mustRun(Session{}, readFile(script));
  const Session& s = r.session;
  c.check(s.views.size() == 8, "expected 8 views");
  const std::size_t tileW = 1920 / 4, tileH = 1200 / 2;
  std::set<std::string> distinct;
  for (std::size_t k = 0; k < 8 && k < s.views.size(); ++k) {
    const std::size_t row = k / 4, col = k % 4;
    const View* v = nullptr;
    for (const auto& cand : s.views) {
      if (cand.sourceName == "s" + std::to_string(k + 1)) v = &cand;
    }
    c.check(v != nullptr, "no view of s" + std::to_string(k + 1));
    if (!v) continue;
    c.check(v->cell == Cell{row, col}, "s" + std::to_string(k + 1) + " is not in reading order");
    c.check(v->isoLevels == std::vector<double>{0.005}, "iso level");
    c.check(v->cutPlanes.size() == 3, "three cut planes");
    const Image tile = renderView(s, v->id, tileW, tileH);
    c.check(tileMatches(fig, col * tileW, row * tileH, tile),
            "tile (" + std::to_string(row) + "," + std::to_string(col) + ") does not show s" + std::to_string(k + 1));
    distinct.insert(std::string(tile.pixels.begin(), tile.pixels.end()));
  }
  c.check(distinct.size() == 8, "tiles are not pairwise distinct");
  std::ostringstream sum;
  sum.precision(3);
  sum << "QCD scenario: exit 0, " << seconds << " s, 8 tiles in reading order";
  return c.outcome(sum.str());
}

Outcome meteoriteScenario() {
  Checker c;
  lang::ScriptResult r = mustRun(Session{}, "synth meteorite nx=64 ny=64 nz=64 seed=3 as meteo\n"
                                            "view add meteo\n"
                                            "palette set view=0 name=heat\n"
                                            "range set view=0 min=0.002 max=0.02\n"
                                            "hist show view=0 bins=64\n");
  const auto& raw = r.events.back().data;
  const auto edges = raw["edges"].get<std::vector<double>>();
  const auto counts = raw["counts"].get<std::vector<std::uint64_t>>();
  const std::size_t modal = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  c.check(edges[modal + 1] <= 0.0025, "modal bin is not below 0.0025");

  // Insets off so only the volume differs between renders.
  auto render = [](const Session& s, const std::string& opacity) {
    return renderView(mustRun(s, "hist show view=0 bins=0\ncolorbar show view=0 off\n" + opacity).session, 0, 320, 320);
  };
  const Session before = r.session;
  const Image blank = render(before, "opacity set view=0 window=0.5..0.6 alpha=0.3");
  const Image wide = render(before, "opacity set view=0 window=0.002..0.02 alpha=0.3");

  const lang::ScriptResult f = mustRun(before, "filter meteo min=0.0025\nhist show view=0 bins=64\n");
  const auto& fh = f.events.back().data;
  const auto fEdges = fh["edges"].get<std::vector<double>>();
  const auto fCounts = fh["counts"].get<std::vector<std::uint64_t>>();
  for (std::size_t b = 0; b < fCounts.size(); ++b) {
    if (fEdges[b] < 0.0025) c.check(fCounts[b] == 0, "non-zero bin below 0.0025 after filter");
  }
  c.check(fEdges.front() >= 0.0025, "histogram range starts below 0.0025");
  const Image core = render(f.session, "opacity set view=0 window=0.0125..0.02 alpha=0.6");
  c.check(render(f.session, "opacity set view=0 window=0.5..0.6 alpha=0.6").pixels == blank.pixels,
          "filter changed the empty render");

  const std::size_t nWide = litPixels(wide, blank), nCore = litPixels(core, blank);
  std::size_t outside = 0;
  for (std::size_t i = 0; i < core.pixels.size(); i += 4) {
    const bool inCore = core.pixels[i] != blank.pixels[i] || core.pixels[i + 1] != blank.pixels[i + 1] ||
                        core.pixels[i + 2] != blank.pixels[i + 2];
    const bool inWide = wide.pixels[i] != blank.pixels[i] || wide.pixels[i + 1] != blank.pixels[i + 1] ||
                        wide.pixels[i + 2] != blank.pixels[i + 2];
    outside += inCore && !inWide;
  }
  c.check(nCore > 0, "core render is empty");
  c.check(outside == 0, std::to_string(outside) + " core pixels outside the wide render");
  c.check(nCore < nWide, "core footprint is not strictly smaller");
  return c.outcome("meteorite: modal bin < 0.0025, filtered bins zero, core " + std::to_string(nCore) + " px within wide " +
                   std::to_string(nWide) + " px");
}

Outcome marchingCubesCriterion() {
  Checker c;
  const double r = 5.0;
  const ScalarField dist = viz::testing::sphereField(32, 15.5, 15.5, 15.5);
  const TriangleMesh mesh = weldVertices(marchingCubes(dist, r));
  const double area = meshArea(mesh);
  const double expected = 4.0 * kPi * r * r;
  const double relErr = std::abs(area - expected) / expected;
  c.check(relErr < kAreaTolerance, "area error " + std::to_string(relErr));
  const auto st = stats(dist);
  const double range = *st.max - *st.min;
  double worst = 0.0;
  for (std::size_t i = 0; i < mesh.vertexCount(); ++i) {
    const Sample s = trilinearSample(dist, mesh.vertex(i));
    c.check(s.valid, "vertex outside the field");
    worst = std::max(worst, std::abs(s.value - r));
  }
  c.check(worst <= kResampleTolerance * range, "resample error " + std::to_string(worst));
  std::size_t interior = 0;
  for (const auto& [edge, uses] : edgeUseCounts(mesh)) {
    c.check(uses == 2, "edge used " + std::to_string(uses) + " times");
    ++interior;
  }
  std::ostringstream s;
  s << "marching cubes: area error " << relErr * 100 << "%, worst resample " << worst / range << " of range, "
    << interior << " edges shared by 2 triangles";
  return c.outcome(s.str());
}

Outcome raycastCriterion() {
  Checker c;
  const ScalarField cube = ScalarField::constant({16, 16, 16}, 0.5);
  TransferFunction tf;
  tf.colorPoints = {{-1.0, {0.8, 0.8, 0.8}}, {1.0, {0.8, 0.8, 0.8}}};
  tf.opacityPoints = {{-1.0, 0.2}, {1.0, 0.2}};
  double worstOracle = 0.0;
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    const Vec3 o{viz::testing::uniform(rng, -10, -2), viz::testing::uniform(rng, 2, 13),
                 viz::testing::uniform(rng, 2, 13)};
    const Vec3 d = normalized(Vec3{1.0, viz::testing::uniform(rng, -0.15, 0.15), viz::testing::uniform(rng, -0.15, 0.15)});
    const double step = viz::testing::uniform(rng, 0.1, 1.0);
    // Independent slab chord through [0, 15]^3.
    double t0 = -INFINITY, t1 = INFINITY;
    for (int a = 0; a < 3; ++a) {
      double ta = (0.0 - o[a]) / d[a], tb = (15.0 - o[a]) / d[a];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    }
    const double chord = std::max(0.0, t1 - std::max(0.0, t0));
    const auto oracle = viz::testing::homogeneousSlab(0.8, 0.2, chord);
    const RayResult res = traceRay(cube, tf, o, d, step);
    worstOracle = std::max({worstOracle, std::abs(res.transmittance - oracle.transmittance),
                            std::abs(res.color.r - oracle.color)});
  }
  c.check(worstOracle < kOracleTolerance, "oracle error " + std::to_string(worstOracle));

  // Step halving on the homogeneous cube over a full camera frame, both as
  // float ray results and as the rendered 8-bit frame.
  auto halvingError = [](const ScalarField& field, const TransferFunction& fieldTf, double step, double* byteDiff) {
    const std::size_t n = 48;
    const Camera cam = frameBox(boundingBox(field));
    double worst = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t x = 0; x < n; ++x) {
        const Vec3 d = cam.rayDirection(x + 0.5, y + 0.5, n, n);
        const RayResult ra = traceRay(field, fieldTf, cam.position, d, step);
        const RayResult rb = traceRay(field, fieldTf, cam.position, d, 0.5 * step);
        worst = std::max({worst, std::abs(ra.color.r - rb.color.r), std::abs(ra.color.g - rb.color.g),
                          std::abs(ra.color.b - rb.color.b), std::abs(ra.transmittance - rb.transmittance)});
      }
    }
    if (byteDiff) {
      const Image a = raycast(field, fieldTf, cam, {step, kViewBackground}, n, n);
      const Image b = raycast(field, fieldTf, cam, {0.5 * step, kViewBackground}, n, n);
      *byteDiff = 0.0;
      for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        *byteDiff = std::max(*byteDiff, std::abs(a.pixels[i] - b.pixels[i]) / 1.0);
      }
    }
    return worst;
  };
  double byteDiff = 0.0;
  const double worstStep = halvingError(cube, tf, 0.5, &byteDiff);
  c.check(worstStep < kStepHalvingTolerance, "step halving changed a pixel by " + std::to_string(worstStep));
  c.check(byteDiff == 0.0, "step halving changed the 8-bit frame");

  // Reported only: a smooth but trilinearly interpolated gaussian blob.
  const std::size_t nb = 24;
  std::vector<double> blobValues(nb * nb * nb);
  const double mid = 0.5 * (nb - 1);
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t i = 0; i < nb; ++i) {
        const double dx = i - mid, dy = j - mid, dz = k - mid;
        blobValues[i + nb * (j + nb * k)] = std::exp(-(dx * dx + dy * dy + dz * dz) / (0.08 * nb * nb));
      }
  const ScalarField blob = ScalarField::fromValues({nb, nb, nb}, blobValues);
  const TransferFunction rainbow = TransferFunction::fromPalette("rainbow", 0.0, 1.0, 0.3);
  const double blobCoarse = halvingError(blob, rainbow, 0.5, nullptr);
  const double blobFine = halvingError(blob, rainbow, 0.25, nullptr);

  std::ostringstream s;
  s << "raycast: oracle error " << worstOracle << ", cube step halving max pixel change " << worstStep
    << " (gaussian blob, reported: " << blobCoarse << " at step 0.5, " << blobFine << " at step 0.25)";
  return c.outcome(s.str());
}

Outcome slicingCriterion() {
  Checker c;
  Rng rng(2024);
  std::size_t comparisons = 0;
  for (int trial = 0; trial < kRandomFields; ++trial) {
    const ScalarField f = viz::testing::randomField(rng, 2, 4, 4, 0.2);
    for (std::size_t axis = 0; axis < f.rank(); ++axis) {
      for (std::size_t index = 0; index < f.dims()[axis]; ++index) {
        c.check(slice(f, axis, index) == viz::testing::bruteSlice(f, axis, index), "slice mismatch");
        ++comparisons;
      }
      for (Reducer r : {Reducer::Sum, Reducer::Mean, Reducer::Max, Reducer::Min}) {
        const ScalarField expect = viz::testing::bruteProject(f, axis, r);
        c.check(project(f, axis, r) == expect, "project mismatch");
        c.check(serial::project(f, axis, r) == expect, "serial project mismatch");
        comparisons += 2;
      }
    }
  }
  return c.outcome("slice/project: " + std::to_string(kRandomFields) + " random fields, " +
                   std::to_string(comparisons) + " comparisons against the voxel oracle");
}

Outcome viewlangCriterion() {
  Checker c;
  Rng rng(31337);
  for (int i = 0; i < kGeneratedAsts; ++i) {
    const lang::Command ast = viz::testing::gen::command(rng, static_cast<std::size_t>(i) % std::variant_size_v<lang::Command>);
    try {
      c.check(lang::parse(lang::format(ast)) == ast, "round trip: " + lang::format(ast));
    } catch (const std::exception& e) {
      c.check(false, std::string("round trip threw: ") + e.what());
    }
  }

  const Session s = mustRun(Session{}, "synth qcd_lumps nx=6 ny=6 nz=6 nt=4 lumps=3 seed=2 as qcd\n"
                                       "synth meteorite nx=12 ny=12 nz=12 seed=1 as m\n"
                                       "view add m\niso add view=0 level=0.005\n")
                        .session;
  const fs::path loop = workDir() / "self.vl";
  writeFile(loop, "source \"self.vl\"\n");
  lang::EvalContext ctx;
  ctx.scriptDir = workDir();
  const std::vector<std::pair<std::string, lang::EvalErrorCode>> paths = {
      {"view add nothing", lang::EvalErrorCode::UnknownDataset},
      {"iso add view=9 level=1", lang::EvalErrorCode::UnknownView},
      {"slice qcd axis=w index=0 as a", lang::EvalErrorCode::UnknownAxis},
      {"slice m axis=t index=0 as a", lang::EvalErrorCode::MissingAxis},
      {"slice qcd axis=t index=7 as a", lang::EvalErrorCode::InvalidArgument},
      {"view add qcd", lang::EvalErrorCode::NotThreeD},
      {"view add m cell=(0,0)", lang::EvalErrorCode::CellOccupied},
      {"load \"absent.ndvf\" as z", lang::EvalErrorCode::Io},
      {"source \"self.vl\"", lang::EvalErrorCode::SourceDepth},
  };
  std::set<lang::EvalErrorCode> seen;
  for (const auto& [line, code] : paths) {
    const Session copy = s;
    try {
      lang::evaluate(copy, lang::parse(line), ctx);
      c.check(false, "no error for: " + line);
    } catch (const lang::EvalError& e) {
      c.check(e.code() == code, "wrong code for: " + line);
      seen.insert(e.code());
    }
    c.check(copy == s, "session changed by: " + line);
    // The same line inside a script leaves the session as if it were absent.
    const lang::ScriptResult r = lang::runScript(s, line + "\n", ctx);
    c.check(r.session == s, "script state changed by: " + line);
    c.check(r.errors.size() == 1, "error not reported for: " + line);
  }
  c.check(seen.size() == paths.size(), "not every error code was exercised");
  return c.outcome("viewlang: " + std::to_string(kGeneratedAsts) + " generated asts round trip, " +
                   std::to_string(seen.size()) + " error codes leave the session unchanged");
}

Outcome sessionCriterion() {
  Checker c;
  Session s;
  s.datasets["a"] = std::make_shared<const ScalarField>(synthMeteoritePhantom({12, 10, 8}, 1));
  s.datasets["b"] = std::make_shared<const ScalarField>(synthMeteoritePhantom({8, 8, 8}, 2));
  for (int i = 0; i < 6; ++i) s = addView(s, i % 2 ? "a" : "b", {}).session;
  std::vector<Vec3> origins;
  for (const auto& v : s.views) origins.push_back(v.objectOrigin);

  Rng rng(555);
  std::size_t cameraEvents = 0, syncEvents = 0;
  double worstPivot = 0.0;
  for (int i = 0; i < kPointerEvents; ++i) {
    const bool sync = viz::testing::uniformInt(rng, 0, 1) == 1;
    s = setMode(s, sync ? Mode::Sync : Mode::Camera);
    PointerEvent ev;
    ev.kind = sync ? PointerEvent::Kind::RotateDrag : static_cast<PointerEvent::Kind>(viz::testing::uniformInt(rng, 0, 2));
    ev.dx = viz::testing::uniform(rng, -0.5, 0.5);
    ev.dy = viz::testing::uniform(rng, -0.5, 0.5);
    const Session before = s;
    s = handlePointer(s, ev);
    if (sync) {
      ++syncEvents;
      c.check(s.camera == before.camera, "sync event moved the camera");
    } else {
      ++cameraEvents;
      c.check(s.views == before.views, "camera event changed a view");
    }
    for (std::size_t k = 0; k < s.views.size(); ++k) {
      const View& v = s.views[k];
      const Vec3 world = v.placement().apply(v.objectOrigin - v.basePosition);
      worstPivot = std::max(worstPivot, norm(world - origins[k]));
      c.check(v.objectRotation == s.views[0].objectRotation, "rotations diverged");
    }
  }
  c.check(worstPivot < kPivotTolerance, "pivot drift " + std::to_string(worstPivot));
  std::ostringstream out;
  out << "session: " << cameraEvents << " camera + " << syncEvents << " sync events, max pivot drift " << worstPivot;
  return c.outcome(out.str());
}

Outcome determinismCriterion() {
  Checker c;
  const fs::path script = fs::path(VIZ_SOURCE_DIR) / "scripts" / "qcd.vl";
  std::string images[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = workDir() / ("det" + std::to_string(run));
    fs::remove_all(out);
    fs::create_directories(out);
    gateway::RunOptions opts;
    opts.script = script;
    opts.outDir = out;
    opts.strict = true;
    opts.size = lang::PixelSize{640, 400};
    std::ostringstream log;
    c.check(gateway::cliRun(opts, log) == gateway::kExitOk, "cliRun failed: " + log.str());
    if (fs::exists(out / "fig1.ppm")) images[run] = readFile(out / "fig1.ppm");
  }
  c.check(!images[0].empty() && images[0] == images[1], "PPM files differ between runs");

  Rng rng(6);
  int fields = 0;
  for (int i = 0; i < 100; ++i, ++fields) {
    const ScalarField f = viz::testing::randomField(rng, 1, 4, 5, 0.25);
    const fs::path p = workDir() / "rt.ndvf";
    saveField(f, p);
    c.check(loadField(p) == f, "NDVF round trip changed a field");
  }
  const ScalarField qcd = synthQcdLumps({16, 16, 16, 16}, 12, 7);
  saveField(qcd, workDir() / "qcd.ndvf");
  c.check(loadField(workDir() / "qcd.ndvf") == qcd, "NDVF round trip changed the QCD field");
  return c.outcome("determinism: identical PPM bytes across two runs, " + std::to_string(fields + 1) +
                   " NDVF round trips exact");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"qcd-scenario", qcdScenario},
      {"meteorite-scenario", meteoriteScenario},
      {"marching-cubes", marchingCubesCriterion},
      {"raycast-oracle", raycastCriterion},
      {"slice-project-oracle", slicingCriterion},
      {"viewlang-roundtrip-atomicity", viewlangCriterion},
      {"session-invariants", sessionCriterion},
      {"determinism", determinismCriterion},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
