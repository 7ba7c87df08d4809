#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "curlsob/field.hpp"

namespace curlsob {

// vf3: one JSON header line {"kind", "n", "L", "version"} followed by little-endian float64
// samples, site-major with z fastest and components interleaved per site. Spinors store
// (re1, im1, re2, im2).

enum class FieldKind { kScalar, kVector, kSpinor };

const char* kind_name(FieldKind kind);

struct Vf3Header {
  FieldKind kind = FieldKind::kVector;
  int n = 0;
  double L = 0.0;
  int version = 1;
};

/// Malformed input. offset is the position of the first offending byte.
class Vf3Error : public std::runtime_error {
 public:
  Vf3Error(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

void write_vf3(std::ostream& out, const ScalarField& f);
void write_vf3(std::ostream& out, const VectorField& f);
void write_vf3(std::ostream& out, const SpinorField& f);

template <typename FieldT>
void save_vf3(const std::filesystem::path& path, const FieldT& f);

/// Parses and validates the header line, leaving the stream at the first data byte.
Vf3Header read_vf3_header(std::istream& in);

/// Reads a complete file of the matching kind; trailing bytes, short data, non-finite
/// samples and kind mismatches raise Vf3Error.
template <typename FieldT>
FieldT read_vf3(std::istream& in);

template <typename FieldT>
FieldT load_vf3(const std::filesystem::path& path);

}  // namespace curlsob
