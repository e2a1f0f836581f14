#pragma once

// N-dimensional (N <= 4) scalar lattice fields and their reductions.
//
// Storage is row-major with axis 0 fastest: the flat index of multi-index
// (i0, i1, ..., iN-1) is i0 + d0*(i1 + d1*(i2 + ...)). For a 4D xyzt field a
// t-slice is therefore one contiguous block.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace viz {

inline constexpr std::size_t kMaxAxes = 4;

class ScalarField {
 public:
  ScalarField() = default;

  /// Fully valid field. `values` must hold product(dims) entries.
  ScalarField(std::vector<std::size_t> dims, std::vector<double> spacing, std::vector<double> origin,
              std::vector<double> values, std::vector<std::string> axisNames = {});

  ScalarField(std::vector<std::size_t> dims, std::vector<double> spacing, std::vector<double> origin,
              std::vector<double> values, std::vector<std::uint8_t> mask,
              std::vector<std::string> axisNames = {});

  /// Unit spacing, zero origin, default axis names.
  static ScalarField fromValues(std::vector<std::size_t> dims, std::vector<double> values);
  static ScalarField constant(std::vector<std::size_t> dims, double value);

  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<double>& origin() const { return origin_; }
  const std::vector<std::string>& axisNames() const { return axisNames_; }
  std::span<const double> values() const { return values_; }
  /// 1 = valid, 0 = masked.
  std::span<const std::uint8_t> mask() const { return mask_; }

  double value(std::size_t flat) const { return values_[flat]; }
  bool valid(std::size_t flat) const { return mask_[flat] != 0; }

  std::size_t flatIndex(std::span<const std::size_t> multi) const;
  std::vector<std::size_t> multiIndex(std::size_t flat) const;
  /// Distance in flat storage between neighbours along `axis`.
  std::size_t stride(std::size_t axis) const;

  /// Resolves "x"/"y"/"z"/"t" (or any custom label) to an axis index.
  std::optional<std::size_t> axisByName(const std::string& name) const;

  bool fullyValid() const;
  std::size_t validCount() const;

  ScalarField withMask(std::vector<std::uint8_t> mask) const;
  ScalarField withOrigin(std::vector<double> origin) const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  void validate() const;

  std::vector<std::size_t> dims_;
  std::vector<double> spacing_;
  std::vector<double> origin_;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::string> axisNames_;
};

std::vector<std::string> defaultAxisNames(std::size_t rank);

struct Histogram {
  std::vector<double> binEdges;
  std::vector<std::uint64_t> counts;
  std::uint64_t totalCounted = 0;

  std::size_t bins() const { return counts.size(); }
  friend bool operator==(const Histogram&, const Histogram&) = default;
};

struct FieldStats {
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> mean;
  std::size_t validCount = 0;
};

enum class Reducer { Sum, Mean, Max, Min };

const char* reducerName(Reducer r);
std::optional<Reducer> reducerFromName(const std::string& name);

/// Removes `axis` by pinning it to `index`.
ScalarField slice(const ScalarField& field, std::size_t axis, std::size_t index);

/// Removes `axis` by reducing every line along it. Masked voxels are absent;
/// an output voxel is masked iff its whole input line is masked.
ScalarField project(const ScalarField& field, std::size_t axis, Reducer reducer);

/// Masks voxels outside [lo, hi]. Values are left untouched.
ScalarField filterRange(const ScalarField& field, std::optional<double> lo, std::optional<double> hi);

/// Bins valid voxels with lo <= v <= hi; bins are half-open except the last.
Histogram histogram(const ScalarField& field, std::size_t bins,
                    std::optional<std::pair<double, double>> range = std::nullopt);

FieldStats stats(const ScalarField& field);

/// Index of the bin containing `v` under the histogram edge convention, or
/// nullopt when v is outside [edges.front(), edges.back()].
std::optional<std::size_t> binIndex(std::span<const double> edges, double v);

namespace serial {

// Single-threaded reference kernels. The default entry points above run the
// same arithmetic under OpenMP; tests assert the two agree bit for bit.
ScalarField project(const ScalarField& field, std::size_t axis, Reducer reducer);
Histogram histogram(const ScalarField& field, std::size_t bins,
                    std::optional<std::pair<double, double>> range = std::nullopt);

}  // namespace serial

}  // namespace viz
