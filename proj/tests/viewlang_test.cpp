#include <filesystem>
#include <set>

#include "doctest.h"
#include "support/oracles.hpp"
#include "viz/io.hpp"
#include "viz/viewlang.hpp"

using namespace viz;
using namespace viz::lang;
using viz::testing::Rng;
namespace fs = std::filesystem;

namespace {

using K = Token::Kind;

std::vector<std::pair<K, std::string>> kinds(const std::string& text) {
  std::vector<std::pair<K, std::string>> out;
  for (const auto& t : tokenize(text)) out.emplace_back(t.kind, t.text);
  return out;
}

fs::path scratchDir() {
  const fs::path dir = fs::temp_directory_path() / "viz_viewlang_tests";
  fs::create_directories(dir);
  return dir;
}

/// A small session with a 4D dataset, a 3D dataset and one view.
Session baseSession() {
  const ScriptResult r = runScript(Session{}, "synth qcd_lumps nx=6 ny=6 nz=6 nt=4 lumps=3 seed=2 as qcd\n"
                                              "synth meteorite nx=12 ny=12 nz=12 seed=1 as m\n"
                                              "view add m\n");
  REQUIRE(r.errors.empty());
  return r.session;
}

EvalErrorCode codeOf(const Session& s, const std::string& line, const EvalContext& ctx = {}) {
  try {
    evaluate(s, parse(line), ctx);
  } catch (const EvalError& e) {
    return e.code();
  }
  FAIL("expected EvalError for: " << line);
  return EvalErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("tokenizer examples") {
  CHECK(kinds("iso add view=0 level=0.005") ==
        std::vector<std::pair<K, std::string>>{{K::Word, "iso"},   {K::Word, "add"},   {K::Word, "view"},
                                               {K::Symbol, "="},   {K::Number, "0"},   {K::Word, "level"},
                                               {K::Symbol, "="},   {K::Number, "0.005"}, {K::End, ""}});
  CHECK(kinds("") == std::vector<std::pair<K, std::string>>{{K::End, ""}});
  const auto toks = tokenize("load \"a b.raw\" as m  # meteorite");
  REQUIRE(toks.size() == 5);
  CHECK(toks[1].kind == K::String);
  CHECK(toks[1].text == "a b.raw");
  CHECK(toks[3].text == "m");
  CHECK(toks[4].kind == K::End);
}

TEST_CASE("tokenizer positions are 1-based and ordered") {
  const auto toks = tokenize("mode sync\n  slice q axis=t index=1..8 as s\r\n");
  CHECK(toks[0].pos == SourcePos{1, 1});
  CHECK(toks[1].pos == SourcePos{1, 6});
  std::size_t prevLine = 1, prevCol = 0;
  for (const auto& t : toks) {
    CHECK((t.pos.line > prevLine || (t.pos.line == prevLine && t.pos.column > prevCol) || t.kind == K::End));
    prevLine = t.pos.line;
    prevCol = t.pos.column;
  }
  const auto it = std::find_if(toks.begin(), toks.end(), [](const Token& t) { return t.text == "slice"; });
  CHECK(it->pos == SourcePos{2, 3});
  CHECK(std::count_if(toks.begin(), toks.end(), [](const Token& t) { return t.text == ".."; }) == 1);
}

TEST_CASE("unterminated string is reported at the opening quote") {
  try {
    tokenize("load \"abc");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == SourcePos{1, 6});
  }
}

TEST_CASE("parse examples") {
  CHECK(parse("slice qcd axis=t index=1..8 as s") == Command{cmd::Slice{"qcd", {std::string("t")}, IndexRange{1, 8}, "s"}});
  CHECK(parse("filter meteo min=0.0025") == Command{cmd::Filter{"meteo", 0.0025, std::nullopt}});
  CHECK(parse("iso add view=0 level=0.005") == Command{cmd::IsoAdd{{0}, 0.005}});
  try {
    parse("mode warp");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()) == "unknown mode: warp; expected camera|object|sync");
    CHECK(e.position().column == 6);
    CHECK(e.offendingText() == "warp");
  }
}

TEST_CASE("format examples") {
  CHECK(format(cmd::IsoAdd{{0}, 0.005}) == "iso add view=0 level=0.005");
  CHECK(format(cmd::ModeSet{Mode::Sync}) == "mode sync");
  CHECK(format(cmd::Slice{"qcd", {std::string("t")}, IndexRange{1, 8}, "s"}) == "slice qcd axis=t index=1..8 as s");
  CHECK(formatNumber(0.1) == "0.1");
  CHECK(formatNumber(-3.0) == "-3");
}

TEST_CASE("unknown verbs suggest the nearest ones") {
  try {
    parse("iso ad view=0 level=1");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()) == "expected add|remove after iso");
    CHECK(e.offendingText() == "ad");
  }
  try {
    parse("snapshop \"a.ppm\"");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("snapshot") != std::string::npos);
    CHECK(e.position() == SourcePos{1, 1});
  }
}

TEST_CASE("parse errors for missing, mistyped and stray arguments") {
  CHECK_THROWS_AS(parse("iso add view=0"), ParseError);
  CHECK_THROWS_AS(parse("iso add view=0 level=abc"), ParseError);
  CHECK_THROWS_AS(parse("iso add view=0 level=1 colour=red"), ParseError);
  CHECK_THROWS_AS(parse("range set view=0 min=1"), ParseError);
  CHECK_THROWS_AS(parse("camera set position=(1,2)"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("# only a comment"), ParseError);
  CHECK_FALSE(parseLine("   # only a comment", 4).has_value());
  try {
    parseLine("view add m cell=(0,x)", 7);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position().line == 7);
  }
}

TEST_CASE("every command variant is reachable from concrete syntax") {
  const std::vector<std::string> lines = {
      "load \"vol.ndvf\" as v",
      "synth meteorite nx=8 as m",
      "slice qcd axis=t index=3 as s",
      "project qcd axis=2 reducer=mean as p",
      "filter m max=0.02",
      "view add m cell=(1,2) axis=z index=4 volume=off",
      "view remove view=3",
      "iso add view=all level=0.005",
      "iso remove view=0",
      "cut add view=0 normal=(1,1,0) offset=center",
      "cut remove view=0 index=1",
      "palette set view=0 name=heat",
      "opacity set view=0 window=0.002..0.02 alpha=0.3",
      "range set view=all min=0.002 max=0.02",
      "hist show view=0 bins=32",
      "colorbar show view=0 off",
      "mode object",
      "camera set position=(1,2,3) fov=40",
      "anim orbit axis=z degrees=90 frames=12",
      "snapshot \"fig.ppm\" size=640x480",
      "source \"other.vl\"",
      "layout cols=4 cellw=18",
  };
  std::set<std::size_t> seen;
  for (const auto& line : lines) {
    const Command c = parse(line);
    seen.insert(c.index());
    CHECK(parse(format(c)) == c);
  }
  CHECK(seen.size() == std::variant_size_v<Command>);
  CHECK(verbs().size() == std::variant_size_v<Command>);
}

TEST_CASE("opacity window sugar expands to a plateau") {
  const auto c = std::get<cmd::OpacitySet>(parse("opacity set view=0 window=0.0125..0.02 alpha=0.6"));
  TransferFunction tf = TransferFunction::fromPalette("heat", 0.0, 0.02);
  tf.opacityPoints.clear();
  for (const auto& [scalar, alpha] : c.points) tf.opacityPoints.push_back({scalar, alpha});
  CHECK(tfEval(tf, 0.015).a == doctest::Approx(0.6));
  CHECK(tfEval(tf, 0.01).a == 0.0);
}

TEST_CASE("parse(format(ast)) == ast over generated asts") {
  Rng rng(1234);
  std::set<std::size_t> covered;
  for (int i = 0; i < 3000; ++i) {
    const Command c = viz::testing::gen::command(rng);
    covered.insert(c.index());
    const std::string text = format(c);
    CHECK(text.find('\n') == std::string::npos);
    CAPTURE(text);
    CHECK(parse(text) == c);
  }
  CHECK(covered.size() == std::variant_size_v<Command>);
}

TEST_CASE("evaluation errors carry distinct codes and leave the session unchanged") {
  const Session s = baseSession();
  const Session before = s;
  CHECK(codeOf(s, "view add nothing") == EvalErrorCode::UnknownDataset);
  CHECK(codeOf(s, "iso add view=42 level=0.005") == EvalErrorCode::UnknownView);
  CHECK(codeOf(s, "view remove view=42") == EvalErrorCode::UnknownView);
  CHECK(codeOf(s, "slice qcd axis=w index=0 as a") == EvalErrorCode::UnknownAxis);
  CHECK(codeOf(s, "slice m axis=t index=0 as a") == EvalErrorCode::MissingAxis);
  CHECK(codeOf(s, "slice qcd axis=t index=9 as a") == EvalErrorCode::InvalidArgument);
  CHECK(codeOf(s, "view add qcd") == EvalErrorCode::NotThreeD);
  CHECK(codeOf(s, "view add m cell=(0,0)") == EvalErrorCode::CellOccupied);
  CHECK(codeOf(s, "load \"no/such/file.ndvf\" as z") == EvalErrorCode::Io);
  CHECK(codeOf(s, "range set view=0 min=2 max=1") == EvalErrorCode::InvalidArgument);
  CHECK(codeOf(s, "synth nebula as n") == EvalErrorCode::InvalidArgument);
  CHECK(codeOf(s, "anim rotate axis=z degrees=90 frames=0") == EvalErrorCode::InvalidArgument);
  CHECK(s == before);

  const fs::path loop = scratchDir() / "loop.vl";
  writeFile(loop, "source \"loop.vl\"\n");
  EvalContext ctx;
  ctx.scriptDir = scratchDir();
  ctx.strict = true;
  CHECK(codeOf(s, "source \"loop.vl\"", ctx) == EvalErrorCode::SourceDepth);
  ctx.strict = false;
  CHECK(codeOf(s, "source \"loop.vl\"", ctx) == EvalErrorCode::SourceDepth);
  CHECK(s == before);
}

TEST_CASE("failed lines in a script do not change the session") {
  const Session s = baseSession();
  const ScriptResult with = runScript(s, "iso add view=0 level=0.005\nview remove view=9\nmode sync\n");
  const ScriptResult without = runScript(s, "iso add view=0 level=0.005\nmode sync\n");
  CHECK(with.session == without.session);
  CHECK(with.events == without.events);
  REQUIRE(with.errors.size() == 1);
  CHECK(with.errors[0].line == 2);
  CHECK(with.errors[0].message.rfind("unknown-view:", 0) == 0);
  CHECK_FALSE(with.aborted);
}

TEST_CASE("two valid lines are applied in order") {
  const ScriptResult r = runScript(Session{}, "mode object\nmode sync\n");
  CHECK(r.errors.empty());
  CHECK(r.session.mode == Mode::Sync);
  REQUIRE(r.events.size() == 2);
  CHECK(r.events[1].data["mode"] == "sync");
}

TEST_CASE("strict mode stops at the first failing line") {
  EvalContext ctx;
  ctx.strict = true;
  const ScriptResult r = runScript(Session{}, "mode object\nmode warp\nmode sync\n", ctx);
  CHECK(r.aborted);
  CHECK(r.session.mode == Mode::Object);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 2);
  CHECK(r.errors[0].column == 6);
}

TEST_CASE("sourced scripts run relative to the script directory") {
  const fs::path dir = scratchDir();
  writeFile(dir / "inner.vl", "mode sync\nmode bogus\n");
  EvalContext ctx;
  ctx.scriptDir = dir;
  const ScriptResult r = runScript(Session{}, "source \"inner.vl\"\n", ctx);
  CHECK(r.session.mode == Mode::Sync);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].file.find("inner.vl") != std::string::npos);
  CHECK(r.errors[0].line == 2);
  const EvalResult e = evaluate(Session{}, parse("source \"inner.vl\""), ctx);
  REQUIRE(e.nestedErrors.size() == 1);
  CHECK(e.nestedErrors[0].line == 2);
  CHECK(e.nestedErrors[0].file.find("inner.vl") != std::string::npos);
}

TEST_CASE("slice range expands into numbered datasets and views tile row-major") {
  std::string script = "synth qcd_lumps nx=6 ny=6 nz=6 nt=10 lumps=4 seed=5 as qcd\n"
                       "slice qcd axis=t index=1..8 as s\n"
                       "layout cols=4\n";
  for (int i = 1; i <= 8; ++i) script += "view add s" + std::to_string(i) + "\n";
  const ScriptResult r = runScript(Session{}, script);
  REQUIRE(r.errors.empty());
  REQUIRE(r.session.views.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    const View& v = r.session.views[i];
    CHECK(v.sourceName == "s" + std::to_string(i + 1));
    CHECK(v.cell == Cell{i / 4, i % 4});
    CHECK(r.session.findDataset(v.sourceName)->rank() == 3);
  }
  const ScalarField expect = slice(*r.session.findDataset("qcd"), 3, 5);
  CHECK(*r.session.findDataset("s5") == expect);
}

TEST_CASE("filter then histogram has no counts below the threshold") {
  const ScriptResult r = runScript(Session{}, "synth meteorite nx=24 ny=24 nz=24 seed=3 as meteo\n"
                                              "view add meteo\n"
                                              "filter meteo min=0.0025\n"
                                              "hist show view=0 bins=32\n");
  REQUIRE(r.errors.empty());
  const Event& h = r.events.back();
  REQUIRE(h.kind == EventKind::HistogramComputed);
  const auto edges = h.data["edges"].get<std::vector<double>>();
  const auto counts = h.data["counts"].get<std::vector<std::uint64_t>>();
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (edges[b + 1] <= 0.0025) CHECK(counts[b] == 0);
  }
  CHECK(edges.front() >= 0.0025);
  CHECK(h.data["totalCounted"].get<std::size_t>() == r.session.findDataset("meteo")->validCount());
}

TEST_CASE("runScript is deterministic") {
  const std::string script = "synth meteorite nx=10 ny=10 nz=10 as m\nview add m\nmode sync\n"
                             "anim rotate axis=z degrees=90 frames=3\nhist show view=0\nsnapshot \"a.ppm\"\n";
  const ScriptResult a = runScript(Session{}, script);
  const ScriptResult b = runScript(Session{}, script);
  CHECK(a.session == b.session);
  CHECK(a.events == b.events);
  CHECK(std::count_if(a.events.begin(), a.events.end(),
                      [](const Event& e) { return e.kind == EventKind::AnimationFrame; }) == 3);
}

TEST_CASE("session documents round trip") {
  const ScriptResult r = runScript(Session{}, "synth meteorite nx=10 ny=10 nz=10 seed=4 as m\n"
                                              "synth qcd_lumps nx=6 ny=6 nz=6 nt=3 as q\n"
                                              "slice q axis=t index=1 as q1\n"
                                              "filter m min=0.002\n"
                                              "view add m\nview add q1 cell=(1,1)\n"
                                              "iso add view=1 level=0.004\ncut add view=0 axis=x\n"
                                              "palette set view=0 name=heat\nmode sync\n"
                                              "camera set fov=35\n");
  REQUIRE(r.errors.empty());
  const nlohmann::json doc = sessionToJson(r.session);
  const Session back = sessionFromJson(nlohmann::json::parse(doc.dump()));
  CHECK(back == r.session);
  CHECK(sessionToJson(back) == doc);
  nlohmann::json broken = doc;
  broken["datasetLog"].push_back("view add nothing");
  CHECK_THROWS_AS(sessionFromJson(broken), FormatError);
}
