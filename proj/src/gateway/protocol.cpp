#include <bit>
#include <cmath>
#include <cstring>

#include <boost/beast/core/detail/base64.hpp>

#include "viz/gateway.hpp"

namespace viz::gateway {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ProtocolError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ProtocolError(std::string("field '") + key + "' has the wrong type");
  }
}

double finiteField(const json& j, const char* key) {
  const json& v = j.contains(key) ? j.at(key) : json();
  if (!v.is_number()) throw ProtocolError(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ProtocolError(std::string("field '") + key + "' must be finite");
  return d;
}

std::size_t sizeField(const json& j, const char* key, std::size_t def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw ProtocolError(std::string("field '") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

int viewIdField(const json& v, const char* key) {
  if (!v.is_number_integer()) throw ProtocolError(std::string("field '") + key + "' must be an integer");
  const auto id = v.get<std::int64_t>();
  if (id < 0 || id > INT32_MAX) throw ProtocolError(std::string("field '") + key + "' out of range");
  return static_cast<int>(id);
}

void putU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t getU32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

}  // namespace

ClientMessage parseClientMessage(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  const auto type = field<std::string>(j, "type");
  if (type == "Command") return msg::Command{field<std::string>(j, "text")};
  if (type == "Pointer") {
    const auto kind = pointerKindFromName(field<std::string>(j, "kind"));
    if (!kind) throw ProtocolError("unknown pointer kind; expected rotate|pan|zoom");
    msg::Pointer p;
    p.event.kind = *kind;
    p.event.dx = finiteField(j, "dx");
    p.event.dy = finiteField(j, "dy");
    if (j.contains("targetView") && !j.at("targetView").is_null()) {
      p.event.targetView = viewIdField(j.at("targetView"), "targetView");
    }
    return p;
  }
  if (type == "Key") return msg::Key{field<std::string>(j, "key")};
  if (type == "RequestScene") return msg::RequestScene{};
  if (type == "RequestRender") {
    msg::RequestRender r;
    if (!j.contains("viewId")) throw ProtocolError("missing field 'viewId'");
    r.viewId = viewIdField(j.at("viewId"), "viewId");
    r.width = sizeField(j, "width", r.width);
    r.height = sizeField(j, "height", r.height);
    return r;
  }
  throw ProtocolError("unknown message type: " + type);
}

json clientMessageToJson(const ClientMessage& m) {
  if (const auto* c = std::get_if<msg::Command>(&m)) return {{"type", "Command"}, {"text", c->text}};
  if (const auto* p = std::get_if<msg::Pointer>(&m)) {
    json j = {{"type", "Pointer"}, {"kind", pointerKindName(p->event.kind)}, {"dx", p->event.dx}, {"dy", p->event.dy}};
    if (p->event.targetView) j["targetView"] = *p->event.targetView;
    return j;
  }
  if (const auto* k = std::get_if<msg::Key>(&m)) return {{"type", "Key"}, {"key", k->key}};
  if (std::holds_alternative<msg::RequestScene>(m)) return {{"type", "RequestScene"}};
  const auto& r = std::get<msg::RequestRender>(m);
  return {{"type", "RequestRender"}, {"viewId", r.viewId}, {"width", r.width}, {"height", r.height}};
}

std::vector<std::string> serverMessagesFor(lang::EventKind kind) {
  using K = lang::EventKind;
  switch (kind) {
    case K::IsoChanged: return {"SceneDelta", "Mesh"};
    case K::CutChanged: return {"SceneDelta", "SliceData"};
    case K::HistogramComputed: return {"SceneDelta", "Histogram"};
    default: return {"SceneDelta"};
  }
}

json eventToJson(const lang::Event& e) { return {{"kind", lang::eventKindName(e.kind)}, {"data", e.data}}; }

std::string encodeMeshFrame(const TriangleMesh& mesh) {
  std::string out;
  out.reserve(8 + mesh.vertices.size() * 4 + mesh.triangles.size() * 4);
  putU32(out, static_cast<std::uint32_t>(mesh.vertexCount()));
  putU32(out, static_cast<std::uint32_t>(mesh.triangleCount()));
  for (double v : mesh.vertices) putU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  for (auto i : mesh.triangles) putU32(out, i);
  return out;
}

TriangleMesh decodeMeshFrame(const std::string& bytes) {
  if (bytes.size() < 8) throw ProtocolError("mesh frame shorter than its header");
  const std::uint64_t nv = getU32(bytes, 0), nt = getU32(bytes, 4);
  if (bytes.size() != 8 + 12 * nv + 12 * nt) throw ProtocolError("mesh frame size does not match its header");
  TriangleMesh m;
  std::size_t at = 8;
  for (std::uint64_t i = 0; i < 3 * nv; ++i, at += 4) m.vertices.push_back(std::bit_cast<float>(getU32(bytes, at)));
  for (std::uint64_t i = 0; i < 3 * nt; ++i, at += 4) m.triangles.push_back(getU32(bytes, at));
  return m;
}

std::string base64Encode(const std::string& bytes) {
  namespace b64 = boost::beast::detail::base64;
  std::string out(b64::encoded_size(bytes.size()), '\0');
  out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
  return out;
}

std::string base64Decode(const std::string& text) {
  namespace b64 = boost::beast::detail::base64;
  if (text.size() % 4 != 0) throw ProtocolError("invalid base64: length not a multiple of 4");
  std::size_t body = text.size();
  while (body > 0 && text.size() - body < 2 && text[body - 1] == '=') --body;
  std::string out(b64::decoded_size(text.size()), '\0');
  const auto [written, read] = b64::decode(out.data(), text.data(), body);
  if (read != body) throw ProtocolError("invalid base64");
  out.resize(written);
  return out;
}

Outgoing errorMessage(const std::string& message, const std::string& origin, std::optional<lang::SourcePos> pos) {
  json j = {{"type", "Error"}, {"message", message}, {"origin", origin}};
  if (pos) {
    j["line"] = pos->line;
    j["column"] = pos->column;
  }
  return {Outgoing::Target::Sender, false, j.dump()};
}

}  // namespace viz::gateway
