#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "sfnls/spectral.hpp"

namespace sfnls {

// Binary field format, all values little-endian:
//   "SFNL" | u32 version | u64 N | f64 a | f64 b | f64 alpha | f64 t
//   | N x (f64 re, f64 im) in FFT-natural order | u64 FNV-1a of all preceding bytes
inline constexpr std::uint32_t kFieldFormatVersion = 1;

class FieldFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChecksumMismatch : public FieldFormatError {
 public:
  using FieldFormatError::FieldFormatError;
};

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t hash = 0xcbf29ce484222325ULL) noexcept;
std::uint64_t fnv1a64(std::string_view text) noexcept;

struct StoredField {
  WaveField field;
  double alpha;
};

std::vector<std::uint8_t> encode_field(const WaveField& field, double alpha);
/// Throws FieldFormatError on truncation or bad header, ChecksumMismatch on a
/// corrupted payload.
StoredField decode_field(std::span<const std::uint8_t> bytes);

/// Writes to a temporary sibling and renames it into place.
void write_field(const std::filesystem::path& path, const WaveField& field, double alpha);
StoredField read_field(const std::filesystem::path& path);

/// Reference cache keyed by a configuration hash.
class FieldCache {
 public:
  explicit FieldCache(std::filesystem::path directory);

  std::filesystem::path path_for(std::uint64_t key) const;
  /// Empty when the entry is absent, truncated or fails its checksum.
  std::optional<WaveField> load(std::uint64_t key) const;
  void store(std::uint64_t key, const WaveField& field, double alpha) const;

 private:
  std::filesystem::path directory_;
};

}  // namespace sfnls
