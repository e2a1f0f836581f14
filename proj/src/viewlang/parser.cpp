#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "viz/viewlang.hpp"

namespace viz::lang {

namespace {

struct Number {
  double value;
  std::string text;
};
struct Range {
  double first;
  double last;
};
struct Name {
  std::string text;
};
struct Tuple {
  std::vector<double> items;
};
using Value = std::variant<Number, Range, Name, Tuple>;

struct Arg {
  enum class Kind { Named, Bare, String };
  Kind kind;
  std::string key;  // Named: key; Bare: the name; String: contents
  Value value;
  SourcePos pos;
  bool used = false;
};

const std::map<std::string, std::vector<std::string>>& qualifiers() {
  static const std::map<std::string, std::vector<std::string>> q = {
      {"view", {"add", "remove"}},   {"iso", {"add", "remove"}}, {"cut", {"add", "remove"}},
      {"palette", {"set"}},          {"opacity", {"set"}},       {"range", {"set"}},
      {"hist", {"show"}},            {"colorbar", {"show"}},     {"camera", {"set"}},
  };
  return q;
}

std::size_t editDistance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string describe(const Value& v) {
  if (std::holds_alternative<Number>(v)) return "number";
  if (std::holds_alternative<Range>(v)) return "range";
  if (std::holds_alternative<Name>(v)) return "name";
  return "tuple";
}

class Statement {
 public:
  Statement(std::vector<Token> tokens, std::size_t line) : t_(std::move(tokens)), line_(line) {
    for (auto& tok : t_) tok.pos.line = line_;
  }

  std::optional<Command> parse() {
    if (t_[0].kind == Token::Kind::End) return std::nullopt;
    const Token& head = t_[0];
    if (head.kind != Token::Kind::Word) throw ParseError("expected a command verb", head.pos, head.text);
    verbPos_ = head.pos;
    std::string verb = head.text;
    std::size_t i = 1;
    const auto& verbList = verbs();
    auto q = qualifiers().find(verb);
    if (q != qualifiers().end()) {
      const Token& qt = t_[1];
      if (qt.kind != Token::Kind::Word || std::find(q->second.begin(), q->second.end(), qt.text) == q->second.end()) {
        throw ParseError("expected " + join(q->second, "|") + " after " + verb, qt.pos, qt.text);
      }
      verb += " " + qt.text;
      i = 2;
    } else if (std::find(verbList.begin(), verbList.end(), verb) == verbList.end()) {
      throw ParseError("unknown verb: " + verb + "; nearest valid verbs: " + nearestVerbs(verb), head.pos, verb);
    }
    verb_ = verb;
    readArgs(i);
    Command c = build();
    for (const auto& a : args_) {
      if (!a.used) throw ParseError(unexpectedMessage(a), a.pos, a.key);
    }
    if (alias_ && !aliasUsed_) throw ParseError(verb_ + " does not take 'as NAME'", aliasPos_, *alias_);
    return c;
  }

 private:
  static std::string nearestVerbs(const std::string& word) {
    std::set<std::string> heads;
    for (const auto& v : verbs()) heads.insert(v.substr(0, v.find(' ')));
    std::size_t best = SIZE_MAX;
    std::vector<std::string> nearest;
    for (const auto& h : heads) {
      const std::size_t d = editDistance(word, h);
      if (d < best) {
        best = d;
        nearest.clear();
      }
      if (d == best) nearest.push_back(h);
    }
    return join(nearest, ", ");
  }

  std::string unexpectedMessage(const Arg& a) const {
    std::string what = a.kind == Arg::Kind::Named ? "argument '" + a.key + "'"
                       : a.kind == Arg::Kind::Bare ? "word '" + a.key + "'"
                                                   : "string \"" + a.key + "\"";
    std::string msg = "unexpected " + what + " for " + verb_;
    if (!expected_.empty()) msg += "; expected " + join(expected_, "|");
    return msg;
  }

  void readArgs(std::size_t i) {
    while (t_[i].kind != Token::Kind::End) {
      const Token& tok = t_[i];
      if (alias_) throw ParseError("nothing may follow 'as NAME'", tok.pos, tok.text);
      if (tok.kind == Token::Kind::Word && tok.text == "as") {
        const Token& n = t_[i + 1];
        if (n.kind != Token::Kind::Word) throw ParseError("expected a name after 'as'", n.pos, n.text);
        alias_ = n.text;
        aliasPos_ = n.pos;
        i += 2;
        continue;
      }
      if (tok.kind == Token::Kind::String) {
        args_.push_back({Arg::Kind::String, tok.text, Name{}, tok.pos});
        ++i;
        continue;
      }
      if (tok.kind != Token::Kind::Word) throw ParseError("unexpected " + std::string(tokenKindName(tok.kind)) + " '" + tok.text + "'", tok.pos, tok.text);
      if (t_[i + 1].kind == Token::Kind::Symbol && t_[i + 1].text == "=") {
        i += 2;
        Value v = readValue(i);
        args_.push_back({Arg::Kind::Named, tok.text, std::move(v), tok.pos});
        continue;
      }
      args_.push_back({Arg::Kind::Bare, tok.text, Name{tok.text}, tok.pos});
      ++i;
    }
  }

  static double toDouble(const Token& tok) {
    double v = 0.0;
    const char* b = tok.text.data();
    const char* e = b + tok.text.size();
    if (*b == '+') ++b;
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e || !std::isfinite(v)) throw ParseError("invalid number", tok.pos, tok.text);
    return v;
  }

  Value readValue(std::size_t& i) {
    const Token& tok = t_[i];
    if (tok.kind == Token::Kind::Number) {
      const double v = toDouble(tok);
      ++i;
      if (t_[i].kind == Token::Kind::Symbol && t_[i].text == "..") {
        const Token& hi = t_[i + 1];
        if (hi.kind != Token::Kind::Number) throw ParseError("expected a number after '..'", hi.pos, hi.text);
        i += 2;
        return Range{v, toDouble(hi)};
      }
      return Number{v, tok.text};
    }
    if (tok.kind == Token::Kind::Word) {
      ++i;
      return Name{tok.text};
    }
    if (tok.kind == Token::Kind::Symbol && tok.text == "(") {
      Tuple t;
      ++i;
      while (true) {
        const Token& n = t_[i];
        if (n.kind != Token::Kind::Number) throw ParseError("expected a number in tuple", n.pos, n.text);
        t.items.push_back(toDouble(n));
        ++i;
        const Token& sep = t_[i];
        ++i;
        if (sep.kind == Token::Kind::Symbol && sep.text == ")") break;
        if (!(sep.kind == Token::Kind::Symbol && sep.text == ",")) throw ParseError("expected ',' or ')'", sep.pos, sep.text);
      }
      if (t.items.size() < 2 || t.items.size() > 3) throw ParseError("tuples hold 2 or 3 numbers", tok.pos, "(");
      return t;
    }
    throw ParseError("expected a value", tok.pos, tok.text);
  }

  // Argument access ----------------------------------------------------------

  void expect(std::initializer_list<const char*> keys) {
    for (auto k : keys) expected_.emplace_back(k);
  }

  Arg* named(const std::string& key) {
    Arg* found = nullptr;
    for (auto& a : args_) {
      if (a.kind != Arg::Kind::Named || a.key != key) continue;
      if (found) throw ParseError("duplicate argument '" + key + "'", a.pos, key);
      found = &a;
    }
    if (found) found->used = true;
    return found;
  }

  std::vector<Arg*> namedAll(const std::string& key) {
    std::vector<Arg*> out;
    for (auto& a : args_) {
      if (a.kind == Arg::Kind::Named && a.key == key) {
        a.used = true;
        out.push_back(&a);
      }
    }
    return out;
  }

  Arg& required(const std::string& key) {
    Arg* a = named(key);
    if (!a) throw ParseError(verb_ + ": missing required argument " + key + "=", verbPos_, verb_);
    return *a;
  }

  Arg* firstBare() {
    for (auto& a : args_) {
      if (a.kind == Arg::Kind::Bare && !a.used) {
        a.used = true;
        return &a;
      }
    }
    return nullptr;
  }

  std::string requiredBare(const char* what) {
    Arg* a = firstBare();
    if (!a) throw ParseError(verb_ + ": missing " + what, verbPos_, verb_);
    return a->key;
  }

  std::string requiredString(const char* what) {
    for (auto& a : args_) {
      if (a.kind == Arg::Kind::String && !a.used) {
        a.used = true;
        return a.key;
      }
    }
    throw ParseError(verb_ + ": missing quoted " + what, verbPos_, verb_);
  }

  std::string requiredAlias() {
    aliasUsed_ = true;
    if (!alias_) throw ParseError(verb_ + ": missing 'as NAME'", verbPos_, verb_);
    return *alias_;
  }

  [[noreturn]] void wrongType(const Arg& a, const char* wanted) {
    throw ParseError(verb_ + ": " + a.key + "= expects " + wanted + ", got " + describe(a.value), a.pos, a.key);
  }

  double number(const Arg& a) {
    if (const auto* n = std::get_if<Number>(&a.value)) return n->value;
    wrongType(a, "a number");
  }

  std::int64_t integer(const Arg& a) {
    const double v = number(a);
    if (std::floor(v) != v || std::abs(v) > 9.0e15) wrongType(a, "an integer");
    return static_cast<std::int64_t>(v);
  }

  std::string name(const Arg& a) {
    if (const auto* n = std::get_if<Name>(&a.value)) return n->text;
    wrongType(a, "a name");
  }

  std::vector<double> tuple(const Arg& a, std::size_t n) {
    if (const auto* t = std::get_if<Tuple>(&a.value); t && t->items.size() == n) return t->items;
    wrongType(a, n == 2 ? "a 2-tuple" : "a 3-tuple");
  }

  Vec3 vec3(const Arg& a) {
    const auto t = tuple(a, 3);
    return {t[0], t[1], t[2]};
  }

  AxisRef axis(const Arg& a) {
    if (const auto* n = std::get_if<Name>(&a.value)) return {n->text};
    if (std::holds_alternative<Number>(a.value)) {
      const auto v = integer(a);
      if (v < 0) wrongType(a, "a non-negative axis index");
      return {v};
    }
    wrongType(a, "an axis label or index");
  }

  ViewTarget target(const Arg& a) {
    if (const auto* n = std::get_if<Name>(&a.value)) {
      if (n->text == "all") return {};
      wrongType(a, "a view id or all");
    }
    return {integer(a)};
  }

  ViewTarget requiredTarget() { return target(required("view")); }

  std::int64_t integerOf(double v, const Arg& a) {
    if (std::floor(v) != v || std::abs(v) > 9.0e15) wrongType(a, "integers");
    return static_cast<std::int64_t>(v);
  }

  // Verbs --------------------------------------------------------------------

  Command build() {
    if (verb_ == "load") {
      expect({"\"path\"", "as NAME"});
      cmd::Load c;
      c.path = requiredString("path");
      c.name = requiredAlias();
      return c;
    }
    if (verb_ == "synth") {
      expect({"generator", "key=number", "as NAME"});
      cmd::Synth c;
      c.generator = requiredBare("generator name");
      for (auto& a : args_) {
        if (a.kind != Arg::Kind::Named) continue;
        a.used = true;
        c.params.emplace_back(a.key, number(a));
      }
      c.name = requiredAlias();
      return c;
    }
    if (verb_ == "slice") {
      expect({"source", "axis", "index", "as NAME"});
      cmd::Slice c;
      c.source = requiredBare("source dataset");
      c.axis = axis(required("axis"));
      Arg& idx = required("index");
      if (const auto* r = std::get_if<Range>(&idx.value)) {
        c.index = IndexRange{integerOf(r->first, idx), integerOf(r->last, idx)};
      } else {
        c.index = integer(idx);
      }
      c.name = requiredAlias();
      return c;
    }
    if (verb_ == "project") {
      expect({"source", "axis", "reducer", "as NAME"});
      cmd::Project c;
      c.source = requiredBare("source dataset");
      c.axis = axis(required("axis"));
      c.reducer = reducer(required("reducer"));
      c.name = requiredAlias();
      return c;
    }
    if (verb_ == "filter") {
      expect({"source", "min", "max"});
      cmd::Filter c;
      c.source = requiredBare("source dataset");
      if (Arg* a = named("min")) c.lo = number(*a);
      if (Arg* a = named("max")) c.hi = number(*a);
      if (!c.lo && !c.hi) throw ParseError("filter needs min= or max=", verbPos_, verb_);
      return c;
    }
    if (verb_ == "view add") {
      expect({"source", "cell", "axis", "index", "reducer", "volume"});
      cmd::ViewAdd c;
      c.source = requiredBare("source dataset");
      if (Arg* a = named("cell")) {
        const auto t = tuple(*a, 2);
        c.cell = GridCell{integerOf(t[0], *a), integerOf(t[1], *a)};
      }
      Arg* ax = named("axis");
      Arg* idx = named("index");
      Arg* red = named("reducer");
      if (idx && red) throw ParseError("view add takes index= or reducer=, not both", red->pos, red->key);
      if ((idx || red) && !ax) throw ParseError("view add: index=/reducer= need axis=", verbPos_, verb_);
      if (ax && !idx && !red) throw ParseError("view add: axis= needs index= or reducer=", ax->pos, ax->key);
      if (idx) c.derivation = SliceDerivation{axis(*ax), integer(*idx)};
      if (red) c.derivation = ProjectDerivation{axis(*ax), reducer(*red)};
      if (Arg* a = named("volume")) {
        const std::string v = name(*a);
        if (v != "on" && v != "off") wrongType(*a, "on|off");
        c.volume = v == "on";
      }
      return c;
    }
    if (verb_ == "view remove") {
      expect({"view"});
      return cmd::ViewRemove{integer(required("view"))};
    }
    if (verb_ == "iso add") {
      expect({"view", "level"});
      cmd::IsoAdd c;
      c.view = requiredTarget();
      c.level = number(required("level"));
      return c;
    }
    if (verb_ == "iso remove") {
      expect({"view", "level"});
      cmd::IsoRemove c;
      c.view = requiredTarget();
      if (Arg* a = named("level")) c.level = number(*a);
      return c;
    }
    if (verb_ == "cut add") {
      expect({"view", "axis", "normal", "offset"});
      cmd::CutAdd c;
      c.view = requiredTarget();
      Arg* ax = named("axis");
      Arg* nm = named("normal");
      if ((ax != nullptr) == (nm != nullptr)) throw ParseError("cut add needs exactly one of axis= or normal=", verbPos_, verb_);
      if (ax) c.axis = axis(*ax);
      if (nm) c.normal = vec3(*nm);
      if (Arg* a = named("offset")) {
        if (const auto* n = std::get_if<Name>(&a->value)) {
          if (n->text != "center") wrongType(*a, "a number or center");
        } else {
          c.offset = number(*a);
        }
      }
      return c;
    }
    if (verb_ == "cut remove") {
      expect({"view", "index"});
      cmd::CutRemove c;
      c.view = requiredTarget();
      if (Arg* a = named("index")) c.index = integer(*a);
      return c;
    }
    if (verb_ == "palette set") {
      expect({"view", "name"});
      cmd::PaletteSet c;
      c.view = requiredTarget();
      c.name = name(required("name"));
      return c;
    }
    if (verb_ == "opacity set") {
      expect({"view", "point", "window", "alpha"});
      cmd::OpacitySet c;
      c.view = requiredTarget();
      Arg* win = named("window");
      Arg* alpha = named("alpha");
      const auto pts = namedAll("point");
      if (win) {
        if (!pts.empty()) throw ParseError("opacity set takes point= or window=, not both", win->pos, win->key);
        const auto* r = std::get_if<Range>(&win->value);
        if (!r) wrongType(*win, "a range lo..hi");
        if (!(r->first < r->last)) throw ParseError("opacity window must satisfy lo < hi", win->pos, win->key);
        const double a = alpha ? number(*alpha) : 1.0;
        for (const auto& p : TransferFunction::window(r->first, r->last, a)) c.points.emplace_back(p.scalar, p.alpha);
        return c;
      }
      if (alpha) throw ParseError("alpha= only applies with window=", alpha->pos, alpha->key);
      if (pts.empty()) throw ParseError("opacity set needs point=(scalar,alpha) or window=lo..hi", verbPos_, verb_);
      for (Arg* p : pts) {
        const auto t = tuple(*p, 2);
        c.points.emplace_back(t[0], t[1]);
      }
      return c;
    }
    if (verb_ == "range set") {
      expect({"view", "min", "max"});
      cmd::RangeSet c;
      c.view = requiredTarget();
      c.lo = number(required("min"));
      c.hi = number(required("max"));
      return c;
    }
    if (verb_ == "hist show") {
      expect({"view", "bins"});
      cmd::HistShow c;
      c.view = requiredTarget();
      if (Arg* a = named("bins")) {
        c.bins = integer(*a);
        if (c.bins < 0) wrongType(*a, "a non-negative integer");
      }
      return c;
    }
    if (verb_ == "colorbar show") {
      expect({"view", "on", "off"});
      cmd::ColorbarShow c;
      c.view = requiredTarget();
      if (Arg* a = firstBare()) {
        if (a->key != "on" && a->key != "off") throw ParseError("colorbar show: expected on|off", a->pos, a->key);
        c.visible = a->key == "on";
      }
      return c;
    }
    if (verb_ == "mode") {
      expect({"camera", "object", "sync"});
      Arg* a = firstBare();
      if (!a) throw ParseError("mode: expected camera|object|sync", verbPos_, verb_);
      const auto m = modeFromName(a->key);
      if (!m) throw ParseError("unknown mode: " + a->key + "; expected camera|object|sync", a->pos, a->key);
      return cmd::ModeSet{*m};
    }
    if (verb_ == "camera set") {
      expect({"position", "focal", "up", "fov"});
      cmd::CameraSet c;
      if (Arg* a = named("position")) c.position = vec3(*a);
      if (Arg* a = named("focal")) c.focal = vec3(*a);
      if (Arg* a = named("up")) c.up = vec3(*a);
      if (Arg* a = named("fov")) c.fov = number(*a);
      if (!c.position && !c.focal && !c.up && !c.fov) {
        throw ParseError("camera set needs position=, focal=, up= or fov=", verbPos_, verb_);
      }
      return c;
    }
    if (verb_ == "anim") {
      expect({"rotate", "orbit", "axis", "degrees", "frames"});
      cmd::Anim c;
      const std::string kind = requiredBare("animation kind (rotate|orbit)");
      if (kind == "rotate") c.kind = AnimSpec::Kind::Rotate;
      else if (kind == "orbit") c.kind = AnimSpec::Kind::Orbit;
      else throw ParseError("unknown animation: " + kind + "; expected rotate|orbit", verbPos_, kind);
      c.axis = axis(required("axis"));
      c.degrees = number(required("degrees"));
      c.frames = integer(required("frames"));
      return c;
    }
    if (verb_ == "snapshot") {
      expect({"\"path\"", "size"});
      cmd::Snapshot c;
      c.path = requiredString("path");
      if (Arg* a = named("size")) c.size = pixelSize(*a);
      return c;
    }
    if (verb_ == "source") {
      expect({"\"path\""});
      return cmd::Source{requiredString("path")};
    }
    if (verb_ == "layout") {
      expect({"cols", "cellw", "cellh"});
      cmd::LayoutSet c;
      if (Arg* a = named("cols")) c.cols = integer(*a);
      if (Arg* a = named("cellw")) c.cellWidth = number(*a);
      if (Arg* a = named("cellh")) c.cellHeight = number(*a);
      if (!c.cols && !c.cellWidth && !c.cellHeight) throw ParseError("layout needs cols=, cellw= or cellh=", verbPos_, verb_);
      return c;
    }
    throw ParseError("unhandled verb " + verb_, verbPos_, verb_);
  }

  Reducer reducer(const Arg& a) {
    const auto r = reducerFromName(name(a));
    if (!r) throw ParseError("unknown reducer: " + name(a) + "; expected sum|mean|max|min", a.pos, name(a));
    return *r;
  }

  PixelSize pixelSize(const Arg& a) {
    const std::string s = name(a);
    const auto x = s.find('x');
    if (x == std::string::npos) wrongType(a, "WIDTHxHEIGHT");
    PixelSize p;
    auto r1 = std::from_chars(s.data(), s.data() + x, p.width);
    auto r2 = std::from_chars(s.data() + x + 1, s.data() + s.size(), p.height);
    if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != s.data() + x || r2.ptr != s.data() + s.size()) {
      wrongType(a, "WIDTHxHEIGHT");
    }
    return p;
  }

  std::vector<Token> t_;
  std::size_t line_;
  SourcePos verbPos_;
  std::string verb_;
  std::vector<Arg> args_;
  std::vector<std::string> expected_;
  std::optional<std::string> alias_;
  SourcePos aliasPos_;
  bool aliasUsed_ = false;
};

}  // namespace

const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v = {
      "load",        "synth",       "slice",      "project",     "filter",    "view add",   "view remove",
      "iso add",     "iso remove",  "cut add",    "cut remove",  "palette set", "opacity set", "range set",
      "hist show",   "colorbar show", "mode",     "camera set",  "anim",      "snapshot",   "source",
      "layout",
  };
  return v;
}

std::optional<Command> parseLine(const std::string& text, std::size_t line) {
  std::vector<Token> tokens;
  try {
    tokens = tokenize(text);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), {line, e.position().column}, e.offendingText());
  }
  for (const auto& t : tokens) {
    if (t.kind == Token::Kind::Newline) {
      throw ParseError("one statement per line", {line, t.pos.column}, "\\n");
    }
  }
  return Statement(std::move(tokens), line).parse();
}

Command parse(const std::string& text) {
  auto c = parseLine(text, 1);
  if (!c) throw ParseError("empty command", {1, 1}, "");
  return *c;
}

}  // namespace viz::lang
