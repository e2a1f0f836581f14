#pragma once

// Dataset files, synthetic stand-in generators and image/mesh writers.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "viz/field.hpp"
#include "viz/geometry.hpp"
#include "viz/render.hpp"

namespace viz {

enum class Dtype : std::uint8_t { F32 = 0, F64 = 1 };

inline constexpr std::uint32_t kNdvfVersion = 1;
inline constexpr std::size_t kMaxVoxels = std::size_t{1} << 28;

// NDVF layout, little-endian:
//   "NDVF" | u32 version | u8 nAxes
//   per axis: u32 extent | f64 spacing | f64 origin | u8 nameLen | name
//   u8 dtype (0 = f32, 1 = f64) | u8 hasMask
//   values in storage order (axis 0 fastest) | mask bytes if hasMask
struct FieldFileHeader {
  std::uint32_t version = kNdvfVersion;
  std::vector<std::size_t> dims;
  std::vector<double> spacing;
  std::vector<double> origin;
  std::vector<std::string> axisNames;
  Dtype dtype = Dtype::F64;
  bool hasMask = false;

  std::size_t voxelCount() const;
  /// Size in bytes of the header as written.
  std::size_t encodedSize() const;
};

ScalarField loadField(const std::filesystem::path& path);
ScalarField decodeField(const std::vector<std::uint8_t>& bytes);

/// The mask block is written only when some voxel is masked.
void saveField(const ScalarField& field, const std::filesystem::path& path, Dtype dtype = Dtype::F64);
std::vector<std::uint8_t> encodeField(const ScalarField& field, Dtype dtype = Dtype::F64);

enum class RawType { U8, U16, I16, F32, F64 };
enum class RawOrder { XFastest, XSlowest };

/// Headerless raw volume plus the metadata normally kept in a sidecar.
struct RawImportSpec {
  std::vector<std::size_t> dims;
  RawType type = RawType::F32;
  std::vector<double> spacing;  // empty = unit spacing
  RawOrder order = RawOrder::XFastest;
};

ScalarField importRaw(const std::filesystem::path& path, const RawImportSpec& spec);
RawType rawTypeFromName(const std::string& name);
RawOrder rawOrderFromName(const std::string& name);

// Synthetic data. Both generators draw from std::mt19937_64, whose output
// sequence is fixed by the C++ standard, and convert raw 64-bit draws to
// reals themselves, so a seed gives the same field on every platform.

struct QcdLump {
  std::array<std::size_t, 4> center;
  double width;  // Gaussian sigma in lattice units
  double sign;   // +1 or -1
};

/// Lump centres, widths and signs drawn for (dims, nLumps, seed).
std::vector<QcdLump> qcdLumpParameters(const std::vector<std::size_t>& dims, std::size_t nLumps, std::uint64_t seed);

/// Sum of signed periodic 4D Gaussians, rescaled so the largest value is
/// 0.01. The first lump is always positive.
ScalarField synthQcdLumps(const std::vector<std::size_t>& dims, std::size_t nLumps, std::uint64_t seed);

struct MeteoriteLayout {
  Vec3 center;
  Vec3 semiAxes;
  Vec3 coreCenter;
  double coreRadius;
  std::vector<std::pair<Vec3, double>> pores;  // centre, radius (voxel units)
};

inline constexpr double kAirLevel = 0.001;
inline constexpr double kRockMin = 0.003;
inline constexpr double kRockMax = 0.012;
inline constexpr double kCoreMin = 0.0125;
inline constexpr double kCoreMax = 0.02;

MeteoriteLayout meteoriteLayout(const std::vector<std::size_t>& dims, std::uint64_t seed);

/// Air around 0.001, a rock ellipsoid in [0.003, 0.012], an off-centre core
/// in [0.0125, 0.02] and air-filled pores inside the rock.
ScalarField synthMeteoritePhantom(const std::vector<std::size_t>& dims, std::uint64_t seed);

void writeImagePpm(const Image& image, const std::filesystem::path& path);
void writeMeshOff(const TriangleMesh& mesh, const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, const std::string& bytes);
std::string readFile(const std::filesystem::path& path);

}  // namespace viz
