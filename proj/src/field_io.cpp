#include "sfnls/field_io.hpp"

#include <atomic>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

namespace sfnls {
namespace {

constexpr char kMagic[4] = {'S', 'F', 'N', 'L'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 4 * 8;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_f64(std::vector<std::uint8_t>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return v;
}
std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}
double get_f64(std::span<const std::uint8_t> in, std::size_t at) { return std::bit_cast<double>(get_u64(in, at)); }

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t hash) noexcept {
  for (std::uint8_t b : bytes) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  return fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> encode_field(const WaveField& field, double alpha) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 16 * field.size() + 8);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kFieldFormatVersion);
  put_u64(out, field.size());
  put_f64(out, field.grid().a());
  put_f64(out, field.grid().b());
  put_f64(out, alpha);
  put_f64(out, field.time());
  for (const Complex& c : field.coeffs()) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
  }
  put_u64(out, fnv1a64(out));
  return out;
}

StoredField decode_field(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes + 8) throw FieldFormatError("field file truncated");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FieldFormatError("bad magic bytes");
  if (get_u32(bytes, 4) != kFieldFormatVersion) throw FieldFormatError("unsupported format version");
  const std::uint64_t n = get_u64(bytes, 8);
  if (n > (bytes.size() - kHeaderBytes - 8) / 16 || kHeaderBytes + 16 * n + 8 != bytes.size()) {
    throw FieldFormatError("field file length does not match N");
  }
  const std::size_t payload = kHeaderBytes + 16 * n;
  if (fnv1a64(bytes.first(payload)) != get_u64(bytes, payload)) throw ChecksumMismatch("field checksum mismatch");
  const double a = get_f64(bytes, 16), b = get_f64(bytes, 24), alpha = get_f64(bytes, 32), t = get_f64(bytes, 40);
  ComplexVector coeffs(n);
  for (std::size_t s = 0; s < n; ++s) {
    coeffs[s] = {get_f64(bytes, kHeaderBytes + 16 * s), get_f64(bytes, kHeaderBytes + 16 * s + 8)};
  }
  try {
    return {WaveField(SpectralGrid(a, b, n), std::move(coeffs), t), alpha};
  } catch (const std::exception& e) {
    throw FieldFormatError(std::string("invalid field contents: ") + e.what());
  }
}

void write_field(const std::filesystem::path& path, const WaveField& field, double alpha) {
  static std::atomic<unsigned> counter{0};
  const auto bytes = encode_field(field, alpha);
  std::ostringstream suffix;
  suffix << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "." << counter++;
  std::filesystem::path tmp = path;
  tmp += suffix.str();
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

StoredField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_field(bytes);
}

FieldCache::FieldCache(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::filesystem::create_directories(directory_);
}

std::filesystem::path FieldCache::path_for(std::uint64_t key) const {
  char name[32];
  std::snprintf(name, sizeof name, "ref_%016llx.sfnl", static_cast<unsigned long long>(key));
  return directory_ / name;
}

std::optional<WaveField> FieldCache::load(std::uint64_t key) const {
  const auto path = path_for(key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return read_field(path).field;
  } catch (const FieldFormatError&) {
    return std::nullopt;
  }
}

void FieldCache::store(std::uint64_t key, const WaveField& field, double alpha) const {
  write_field(path_for(key), field, alpha);
}

}  // namespace sfnls
