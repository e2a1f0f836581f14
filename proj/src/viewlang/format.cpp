#include <charconv>
#include <sstream>

#include "viz/viewlang.hpp"

namespace viz::lang {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string axis(const AxisRef& a) {
  if (const auto* s = std::get_if<std::string>(&a.value)) return *s;
  return std::to_string(std::get<std::int64_t>(a.value));
}

std::string target(const ViewTarget& t) { return t.id ? std::to_string(*t.id) : "all"; }

std::string vec(const Vec3& v) {
  return "(" + formatNumber(v.x) + "," + formatNumber(v.y) + "," + formatNumber(v.z) + ")";
}

struct Formatter {
  std::string operator()(const cmd::Load& c) const { return "load " + quote(c.path) + " as " + c.name; }
  std::string operator()(const cmd::Synth& c) const {
    std::string out = "synth " + c.generator;
    for (const auto& [k, v] : c.params) out += " " + k + "=" + formatNumber(v);
    return out + " as " + c.name;
  }
  std::string operator()(const cmd::Slice& c) const {
    std::string idx;
    if (const auto* r = std::get_if<IndexRange>(&c.index)) {
      idx = std::to_string(r->first) + ".." + std::to_string(r->last);
    } else {
      idx = std::to_string(std::get<std::int64_t>(c.index));
    }
    return "slice " + c.source + " axis=" + axis(c.axis) + " index=" + idx + " as " + c.name;
  }
  std::string operator()(const cmd::Project& c) const {
    return "project " + c.source + " axis=" + axis(c.axis) + " reducer=" + reducerName(c.reducer) + " as " + c.name;
  }
  std::string operator()(const cmd::Filter& c) const {
    std::string out = "filter " + c.source;
    if (c.lo) out += " min=" + formatNumber(*c.lo);
    if (c.hi) out += " max=" + formatNumber(*c.hi);
    return out;
  }
  std::string operator()(const cmd::ViewAdd& c) const {
    std::string out = "view add " + c.source;
    if (c.cell) out += " cell=(" + std::to_string(c.cell->row) + "," + std::to_string(c.cell->col) + ")";
    if (const auto* s = std::get_if<SliceDerivation>(&c.derivation)) {
      out += " axis=" + axis(s->axis) + " index=" + std::to_string(s->index);
    } else if (const auto* p = std::get_if<ProjectDerivation>(&c.derivation)) {
      out += " axis=" + axis(p->axis) + " reducer=" + reducerName(p->reducer);
    }
    if (c.volume) out += *c.volume ? " volume=on" : " volume=off";
    return out;
  }
  std::string operator()(const cmd::ViewRemove& c) const { return "view remove view=" + std::to_string(c.view); }
  std::string operator()(const cmd::IsoAdd& c) const {
    return "iso add view=" + target(c.view) + " level=" + formatNumber(c.level);
  }
  std::string operator()(const cmd::IsoRemove& c) const {
    std::string out = "iso remove view=" + target(c.view);
    if (c.level) out += " level=" + formatNumber(*c.level);
    return out;
  }
  std::string operator()(const cmd::CutAdd& c) const {
    std::string out = "cut add view=" + target(c.view);
    if (c.axis) out += " axis=" + axis(*c.axis);
    if (c.normal) out += " normal=" + vec(*c.normal);
    out += " offset=" + (c.offset ? formatNumber(*c.offset) : std::string("center"));
    return out;
  }
  std::string operator()(const cmd::CutRemove& c) const {
    std::string out = "cut remove view=" + target(c.view);
    if (c.index) out += " index=" + std::to_string(*c.index);
    return out;
  }
  std::string operator()(const cmd::PaletteSet& c) const {
    return "palette set view=" + target(c.view) + " name=" + c.name;
  }
  std::string operator()(const cmd::OpacitySet& c) const {
    std::string out = "opacity set view=" + target(c.view);
    for (const auto& [s, a] : c.points) out += " point=(" + formatNumber(s) + "," + formatNumber(a) + ")";
    return out;
  }
  std::string operator()(const cmd::RangeSet& c) const {
    return "range set view=" + target(c.view) + " min=" + formatNumber(c.lo) + " max=" + formatNumber(c.hi);
  }
  std::string operator()(const cmd::HistShow& c) const {
    return "hist show view=" + target(c.view) + " bins=" + std::to_string(c.bins);
  }
  std::string operator()(const cmd::ColorbarShow& c) const {
    return "colorbar show view=" + target(c.view) + (c.visible ? " on" : " off");
  }
  std::string operator()(const cmd::ModeSet& c) const { return std::string("mode ") + modeName(c.mode); }
  std::string operator()(const cmd::CameraSet& c) const {
    std::string out = "camera set";
    if (c.position) out += " position=" + vec(*c.position);
    if (c.focal) out += " focal=" + vec(*c.focal);
    if (c.up) out += " up=" + vec(*c.up);
    if (c.fov) out += " fov=" + formatNumber(*c.fov);
    return out;
  }
  std::string operator()(const cmd::Anim& c) const {
    return std::string("anim ") + (c.kind == AnimSpec::Kind::Rotate ? "rotate" : "orbit") + " axis=" + axis(c.axis) +
           " degrees=" + formatNumber(c.degrees) + " frames=" + std::to_string(c.frames);
  }
  std::string operator()(const cmd::Snapshot& c) const {
    std::string out = "snapshot " + quote(c.path);
    if (c.size) out += " size=" + std::to_string(c.size->width) + "x" + std::to_string(c.size->height);
    return out;
  }
  std::string operator()(const cmd::Source& c) const { return "source " + quote(c.path); }
  std::string operator()(const cmd::LayoutSet& c) const {
    std::string out = "layout";
    if (c.cols) out += " cols=" + std::to_string(*c.cols);
    if (c.cellWidth) out += " cellw=" + formatNumber(*c.cellWidth);
    if (c.cellHeight) out += " cellh=" + formatNumber(*c.cellHeight);
    return out;
  }
};

}  // namespace

std::string formatNumber(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format(const Command& c) { return std::visit(Formatter{}, c); }

std::string verbOf(const Command& c) { return verbs()[c.index()]; }

}  // namespace viz::lang
