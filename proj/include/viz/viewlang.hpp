#pragma once

// The interaction language: a line-oriented verb/argument grammar.
//
//   script   := { line NEWLINE } ;
//   line     := [ command ] [ comment ] ;
//   command  := verb { arg } [ "as" NAME ] ;
//   arg      := NAME "=" value | STRING | NAME ;
//   value    := NUMBER | NUMBER ".." NUMBER | NAME | "(" NUMBER "," NUMBER [ "," NUMBER ] ")" ;
//   comment  := "#" any-to-eol ;
//
// See docs/viewlang.md for every verb and its arguments.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "viz/errors.hpp"
#include "viz/session.hpp"

namespace viz::lang {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

struct Token {
  enum class Kind { Word, Number, String, Symbol, Newline, End };
  Kind kind = Kind::End;
  std::string text;  // string tokens hold the unescaped contents
  SourcePos pos;
  friend bool operator==(const Token&, const Token&) = default;
};

const char* tokenKindName(Token::Kind k);

class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourcePos pos, std::string offendingText)
      : Error(message), pos_(pos), offending_(std::move(offendingText)) {}
  SourcePos position() const { return pos_; }
  const std::string& offendingText() const { return offending_; }

 private:
  SourcePos pos_;
  std::string offending_;
};

std::vector<Token> tokenize(const std::string& text);

// AST ------------------------------------------------------------------------

/// Axis label ("t") or index (3).
struct AxisRef {
  std::variant<std::string, std::int64_t> value;
  friend bool operator==(const AxisRef&, const AxisRef&) = default;
};

struct IndexRange {
  std::int64_t first = 0;
  std::int64_t last = 0;  // inclusive
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// A view id, or every view when empty.
struct ViewTarget {
  std::optional<std::int64_t> id;
  friend bool operator==(const ViewTarget&, const ViewTarget&) = default;
};

struct GridCell {
  std::int64_t row = 0;
  std::int64_t col = 0;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct PixelSize {
  std::int64_t width = 0;
  std::int64_t height = 0;
  friend bool operator==(const PixelSize&, const PixelSize&) = default;
};

struct SliceDerivation {
  AxisRef axis;
  std::int64_t index = 0;
  friend bool operator==(const SliceDerivation&, const SliceDerivation&) = default;
};

struct ProjectDerivation {
  AxisRef axis;
  Reducer reducer = Reducer::Max;
  friend bool operator==(const ProjectDerivation&, const ProjectDerivation&) = default;
};

namespace cmd {

#define VIZ_AST_EQ(T) friend bool operator==(const T&, const T&) = default

struct Load {
  std::string path;
  std::string name;
  VIZ_AST_EQ(Load);
};
struct Synth {
  std::string generator;
  std::vector<std::pair<std::string, double>> params;
  std::string name;
  VIZ_AST_EQ(Synth);
};
struct Slice {
  std::string source;
  AxisRef axis;
  std::variant<std::int64_t, IndexRange> index;
  std::string name;
  VIZ_AST_EQ(Slice);
};
struct Project {
  std::string source;
  AxisRef axis;
  Reducer reducer = Reducer::Max;
  std::string name;
  VIZ_AST_EQ(Project);
};
struct Filter {
  std::string source;
  std::optional<double> lo;
  std::optional<double> hi;
  VIZ_AST_EQ(Filter);
};
struct ViewAdd {
  std::string source;
  std::optional<GridCell> cell;
  std::variant<std::monostate, SliceDerivation, ProjectDerivation> derivation;
  std::optional<bool> volume;
  VIZ_AST_EQ(ViewAdd);
};
struct ViewRemove {
  std::int64_t view = 0;
  VIZ_AST_EQ(ViewRemove);
};
struct IsoAdd {
  ViewTarget view;
  double level = 0.0;
  VIZ_AST_EQ(IsoAdd);
};
struct IsoRemove {
  ViewTarget view;
  std::optional<double> level;  // all levels when empty
  VIZ_AST_EQ(IsoRemove);
};
struct CutAdd {
  ViewTarget view;
  std::optional<AxisRef> axis;  // exactly one of axis / normal
  std::optional<Vec3> normal;
  std::optional<double> offset;  // bounding-box centre when empty
  VIZ_AST_EQ(CutAdd);
};
struct CutRemove {
  ViewTarget view;
  std::optional<std::int64_t> index;  // all planes when empty
  VIZ_AST_EQ(CutRemove);
};
struct PaletteSet {
  ViewTarget view;
  std::string name;
  VIZ_AST_EQ(PaletteSet);
};
struct OpacitySet {
  ViewTarget view;
  std::vector<std::pair<double, double>> points;  // (scalar, alpha)
  VIZ_AST_EQ(OpacitySet);
};
struct RangeSet {
  ViewTarget view;
  double lo = 0.0;
  double hi = 1.0;
  VIZ_AST_EQ(RangeSet);
};
struct HistShow {
  ViewTarget view;
  std::int64_t bins = 64;  // 0 hides
  VIZ_AST_EQ(HistShow);
};
struct ColorbarShow {
  ViewTarget view;
  bool visible = true;
  VIZ_AST_EQ(ColorbarShow);
};
struct ModeSet {
  Mode mode = Mode::Camera;
  VIZ_AST_EQ(ModeSet);
};
struct CameraSet {
  std::optional<Vec3> position;
  std::optional<Vec3> focal;
  std::optional<Vec3> up;
  std::optional<double> fov;
  VIZ_AST_EQ(CameraSet);
};
struct Anim {
  AnimSpec::Kind kind = AnimSpec::Kind::Rotate;
  AxisRef axis;
  double degrees = 360.0;
  std::int64_t frames = 1;
  VIZ_AST_EQ(Anim);
};
struct Snapshot {
  std::string path;
  std::optional<PixelSize> size;
  VIZ_AST_EQ(Snapshot);
};
struct Source {
  std::string path;
  VIZ_AST_EQ(Source);
};
struct LayoutSet {
  std::optional<std::int64_t> cols;
  std::optional<double> cellWidth;
  std::optional<double> cellHeight;
  VIZ_AST_EQ(LayoutSet);
};

#undef VIZ_AST_EQ

}  // namespace cmd

using Command =
    std::variant<cmd::Load, cmd::Synth, cmd::Slice, cmd::Project, cmd::Filter, cmd::ViewAdd, cmd::ViewRemove,
                 cmd::IsoAdd, cmd::IsoRemove, cmd::CutAdd, cmd::CutRemove, cmd::PaletteSet, cmd::OpacitySet,
                 cmd::RangeSet, cmd::HistShow, cmd::ColorbarShow, cmd::ModeSet, cmd::CameraSet, cmd::Anim,
                 cmd::Snapshot, cmd::Source, cmd::LayoutSet>;

/// Verb spelling of each Command alternative, e.g. "iso add".
std::string verbOf(const Command& c);
const std::vector<std::string>& verbs();

/// One statement. Blank or comment-only text is a ParseError.
Command parse(const std::string& text);

/// One line of a script; nullopt for blank or comment-only lines. `line`
/// is used for error positions.
std::optional<Command> parseLine(const std::string& text, std::size_t line = 1);

/// Canonical text; parse(format(c)) == c.
std::string format(const Command& c);

/// Shortest round-trip decimal form used by the formatter.
std::string formatNumber(double v);

// Evaluation -------------------------------------------------------------------

enum class EventKind {
  DatasetAdded,
  DatasetUpdated,
  ViewAdded,
  ViewRemoved,
  IsoChanged,
  CutChanged,
  TransferFunctionChanged,
  HistogramComputed,
  ColorbarChanged,
  ModeChanged,
  CameraChanged,
  ObjectTransformChanged,
  LayoutChanged,
  SnapshotRequested,
  AnimationFrame,
};

inline constexpr EventKind kAllEventKinds[] = {
    EventKind::DatasetAdded,      EventKind::DatasetUpdated,   EventKind::ViewAdded,
    EventKind::ViewRemoved,       EventKind::IsoChanged,       EventKind::CutChanged,
    EventKind::TransferFunctionChanged, EventKind::HistogramComputed, EventKind::ColorbarChanged,
    EventKind::ModeChanged,       EventKind::CameraChanged,    EventKind::ObjectTransformChanged,
    EventKind::LayoutChanged,     EventKind::SnapshotRequested, EventKind::AnimationFrame,
};

const char* eventKindName(EventKind k);

struct Event {
  EventKind kind;
  nlohmann::json data;
  friend bool operator==(const Event&, const Event&) = default;
};

enum class EvalErrorCode {
  UnknownDataset,
  UnknownView,
  UnknownAxis,
  MissingAxis,
  InvalidArgument,
  NotThreeD,
  CellOccupied,
  Io,
  SourceDepth,
};

const char* evalErrorCodeName(EvalErrorCode c);

class EvalError : public Error {
 public:
  EvalError(EvalErrorCode code, const std::string& message) : Error(message), code_(code) {}
  EvalErrorCode code() const { return code_; }

 private:
  EvalErrorCode code_;
};

struct LineError {
  std::string file;  // empty for the top-level text
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
  friend bool operator==(const LineError&, const LineError&) = default;
};

struct EvalResult;

struct EvalContext {
  /// Root for relative `load` paths.
  std::filesystem::path dataRoot;
  /// Root for relative `source` paths.
  std::filesystem::path scriptDir;
  /// Abort scripts at the first failing line.
  bool strict = false;
  int sourceDepth = 0;
  /// Called after each successfully applied line, with the new session.
  std::function<void(const EvalResult&)> observer;
};

struct EvalResult {
  Session session;
  std::vector<Event> events;
  std::vector<FrameState> frames;       // anim only
  std::vector<LineError> nestedErrors;  // source only
};

inline constexpr int kMaxSourceDepth = 16;

/// Pure transition. Throws EvalError; the input session is never modified.
EvalResult evaluate(const Session& session, const Command& command, const EvalContext& ctx = {});

struct ScriptResult {
  Session session;
  std::vector<Event> events;
  std::vector<LineError> errors;
  bool aborted = false;  // strict mode stopped early
};

/// Evaluates line by line. Failing lines are reported and skipped, or end
/// the run in strict mode.
ScriptResult runScript(const Session& session, const std::string& text, const EvalContext& ctx = {},
                       const std::string& fileLabel = "");

// Session documents ------------------------------------------------------------

nlohmann::json sessionToJson(const Session& session);
/// Replays the dataset log, then restores views, camera, layout and mode.
Session sessionFromJson(const nlohmann::json& doc, const EvalContext& ctx = {});

nlohmann::json viewToJson(const View& v);
nlohmann::json cameraToJson(const Camera& c);
Camera cameraFromJson(const nlohmann::json& j);

}  // namespace viz::lang
