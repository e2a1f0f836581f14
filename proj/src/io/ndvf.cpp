#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "viz/errors.hpp"
#include "viz/io.hpp"

namespace viz {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::vector<std::uint8_t>& out, T v) {
  std::uint8_t b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.insert(out.end(), b, b + sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  template <class T>
  T get(const char* what) {
    need(sizeof(T), what);
    std::uint8_t b[sizeof(T)];
    std::memcpy(b, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    pos_ += sizeof(T);
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
  }

  std::string str(std::size_t n) {
    need(n, "axis name");
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (remaining() < n) {
      throw TruncatedError(std::string("NDVF: truncated header reading ") + what, pos_ + n, bytes_.size());
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

std::size_t dtypeSize(Dtype d) { return d == Dtype::F32 ? 4 : 8; }

}  // namespace

std::size_t FieldFileHeader::voxelCount() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::size_t FieldFileHeader::encodedSize() const {
  std::size_t n = 4 + 4 + 1 + 2;
  for (const auto& name : axisNames) n += 4 + 8 + 8 + 1 + name.size();
  return n;
}

std::vector<std::uint8_t> encodeField(const ScalarField& field, Dtype dtype) {
  std::vector<std::uint8_t> out;
  const bool hasMask = !field.fullyValid();
  out.insert(out.end(), {'N', 'D', 'V', 'F'});
  put<std::uint32_t>(out, kNdvfVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(field.rank()));
  for (std::size_t a = 0; a < field.rank(); ++a) {
    const std::string& name = field.axisNames()[a];
    if (name.size() > 255) throw ArgumentError("axis name longer than 255 bytes");
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.dims()[a]));
    put<double>(out, field.spacing()[a]);
    put<double>(out, field.origin()[a]);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
  }
  put<std::uint8_t>(out, static_cast<std::uint8_t>(dtype));
  put<std::uint8_t>(out, hasMask ? 1 : 0);
  out.reserve(out.size() + field.size() * (dtypeSize(dtype) + (hasMask ? 1 : 0)));
  for (double v : field.values()) {
    if (dtype == Dtype::F32) put<float>(out, static_cast<float>(v));
    else put<double>(out, v);
  }
  if (hasMask) out.insert(out.end(), field.mask().begin(), field.mask().end());
  return out;
}

ScalarField decodeField(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "NDVF", 4) != 0) {
    throw BadMagicError("NDVF: bad magic (expected \"NDVF\")");
  }
  Reader r(bytes);
  r.str(4);
  FieldFileHeader h;
  h.version = r.get<std::uint32_t>("version");
  if (h.version != kNdvfVersion) throw FormatError("NDVF: unsupported version " + std::to_string(h.version));
  const auto nAxes = r.get<std::uint8_t>("axis count");
  if (nAxes < 1 || nAxes > kMaxAxes) throw FormatError("NDVF: axis count must be 1..4");
  std::size_t voxels = 1;
  for (int a = 0; a < nAxes; ++a) {
    const auto extent = r.get<std::uint32_t>("extent");
    h.dims.push_back(extent);
    h.spacing.push_back(r.get<double>("spacing"));
    h.origin.push_back(r.get<double>("origin"));
    const auto len = r.get<std::uint8_t>("name length");
    h.axisNames.push_back(r.str(len));
    if (extent == 0) throw FormatError("NDVF: zero extent");
    voxels *= extent;
    if (voxels > kMaxVoxels) throw FormatError("NDVF: voxel count exceeds the 2^28 limit");
  }
  const auto dtype = r.get<std::uint8_t>("dtype");
  if (dtype > 1) throw UnknownDtypeError("NDVF: unknown dtype code " + std::to_string(dtype));
  h.dtype = static_cast<Dtype>(dtype);
  h.hasMask = r.get<std::uint8_t>("mask flag") != 0;

  const std::size_t payload = voxels * dtypeSize(h.dtype) + (h.hasMask ? voxels : 0);
  if (r.remaining() < payload) {
    throw TruncatedError("NDVF: payload truncated: expected " + std::to_string(payload) + " bytes, got " +
                             std::to_string(r.remaining()),
                         payload, r.remaining());
  }
  std::vector<double> values(voxels);
  for (auto& v : values) v = h.dtype == Dtype::F32 ? static_cast<double>(r.get<float>("value")) : r.get<double>("value");
  std::vector<std::uint8_t> mask;
  if (h.hasMask) {
    mask.resize(voxels);
    for (auto& m : mask) m = r.get<std::uint8_t>("mask") ? 1 : 0;
  }
  return ScalarField(h.dims, h.spacing, h.origin, std::move(values), std::move(mask), h.axisNames);
}

ScalarField loadField(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decodeField(bytes);
  } catch (const TruncatedError& e) {
    throw TruncatedError(path.string() + ": " + e.what(), e.expected(), e.actual());
  } catch (const BadMagicError& e) {
    throw BadMagicError(path.string() + ": " + e.what());
  } catch (const UnknownDtypeError& e) {
    throw UnknownDtypeError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void saveField(const ScalarField& field, const std::filesystem::path& path, Dtype dtype) {
  const auto bytes = encodeField(field, dtype);
  writeFile(path, std::string(bytes.begin(), bytes.end()));
}

RawType rawTypeFromName(const std::string& name) {
  if (name == "u8" || name == "uint8") return RawType::U8;
  if (name == "u16" || name == "uint16") return RawType::U16;
  if (name == "i16" || name == "int16") return RawType::I16;
  if (name == "f32" || name == "float32" || name == "float") return RawType::F32;
  if (name == "f64" || name == "float64" || name == "double") return RawType::F64;
  throw UnknownDtypeError("unknown raw dtype: " + name);
}

RawOrder rawOrderFromName(const std::string& name) {
  if (name == "xfastest" || name == "fortran" || name == "xyzt") return RawOrder::XFastest;
  if (name == "xslowest" || name == "c" || name == "tzyx") return RawOrder::XSlowest;
  throw ArgumentError("unknown raw order: " + name + " (expected xfastest|xslowest)");
}

ScalarField importRaw(const std::filesystem::path& path, const RawImportSpec& spec) {
  const std::string bytes = readFile(path);
  if (spec.dims.empty() || spec.dims.size() > kMaxAxes) throw DimensionError("raw import needs 1 to 4 dims");
  std::size_t voxels = 1;
  for (auto d : spec.dims) voxels *= d;
  const std::size_t size = spec.type == RawType::U8 ? 1 : spec.type == RawType::F64 ? 8 : spec.type == RawType::F32 ? 4 : 2;
  if (bytes.size() < voxels * size) {
    throw TruncatedError(path.string() + ": raw payload truncated: expected " + std::to_string(voxels * size) +
                             " bytes, got " + std::to_string(bytes.size()),
                         voxels * size, bytes.size());
  }
  std::vector<std::uint8_t> buf(bytes.begin(), bytes.end());
  Reader r(buf);
  std::vector<double> raw(voxels);
  for (auto& v : raw) {
    switch (spec.type) {
      case RawType::U8: v = r.get<std::uint8_t>("value"); break;
      case RawType::U16: v = r.get<std::uint16_t>("value"); break;
      case RawType::I16: v = r.get<std::int16_t>("value"); break;
      case RawType::F32: v = r.get<float>("value"); break;
      case RawType::F64: v = r.get<double>("value"); break;
    }
  }
  std::vector<double> values = raw;
  if (spec.order == RawOrder::XSlowest) {
    // Source index has the last axis fastest.
    const std::size_t n = spec.dims.size();
    std::vector<std::size_t> m(n);
    for (std::size_t flat = 0; flat < voxels; ++flat) {
      std::size_t rem = flat;
      for (std::size_t a = 0; a < n; ++a) {
        m[a] = rem % spec.dims[a];
        rem /= spec.dims[a];
      }
      std::size_t src = 0;
      for (std::size_t a = 0; a < n; ++a) src = src * spec.dims[a] + m[a];
      values[flat] = raw[src];
    }
  }
  std::vector<double> spacing = spec.spacing.empty() ? std::vector<double>(spec.dims.size(), 1.0) : spec.spacing;
  return ScalarField(spec.dims, std::move(spacing), std::vector<double>(spec.dims.size(), 0.0), std::move(values));
}

}  // namespace viz
