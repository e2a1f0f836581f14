#pragma once

#include <stdexcept>
#include <string>

namespace viz {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An index, axis or extent outside its valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Arguments that are individually well formed but inconsistent.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a field with a different number of axes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Reduction over a field that has no valid voxels.
class EmptyDomainError : public Error {
 public:
  using Error::Error;
};

/// Geometry query on an empty mesh or an empty intersection.
class EmptyGeometryError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public IoError {
 public:
  using IoError::IoError;
};

class BadMagicError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedError : public FormatError {
 public:
  TruncatedError(const std::string& what, std::size_t expected, std::size_t actual)
      : FormatError(what), expected_(expected), actual_(actual) {}
  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class UnknownDtypeError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace viz
