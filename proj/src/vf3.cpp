#include "curlsob/vf3.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include <json.hpp>

namespace curlsob {
namespace {

constexpr int kVersion = 1;

template <typename FieldT>
constexpr FieldKind kind_of() {
  if constexpr (FieldT::Components == 1)
    return FieldKind::kScalar;
  else if constexpr (FieldT::Components == 3)
    return FieldKind::kVector;
  else
    return FieldKind::kSpinor;
}

template <typename FieldT>
constexpr int doubles_per_site() {
  return FieldT::Components * (std::is_same_v<typename FieldT::Scalar, double> ? 1 : 2);
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

template <typename FieldT>
void write_impl(std::ostream& out, const FieldT& f) {
  const nlohmann::json header = {{"kind", kind_name(kind_of<FieldT>())},
                                 {"n", f.grid().n()},
                                 {"L", f.grid().box_half_width()},
                                 {"version", kVersion}};
  out << header.dump() << '\n';
  const auto* data = reinterpret_cast<const double*>(f.values().data());
  const std::size_t count = std::size_t(f.size()) * doubles_per_site<FieldT>();
  std::vector<std::uint64_t> buf(count);
  for (std::size_t i = 0; i < count; ++i) buf[i] = to_little(std::bit_cast<std::uint64_t>(data[i]));
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(count * 8));
  if (!out) throw std::runtime_error("vf3: write failed");
}

}  // namespace

const char* kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::kScalar: return "scalar";
    case FieldKind::kVector: return "vector";
    case FieldKind::kSpinor: return "spinor";
  }
  return "?";
}

void write_vf3(std::ostream& out, const ScalarField& f) { write_impl(out, f); }
void write_vf3(std::ostream& out, const VectorField& f) { write_impl(out, f); }
void write_vf3(std::ostream& out, const SpinorField& f) { write_impl(out, f); }

template <typename FieldT>
void save_vf3(const std::filesystem::path& path, const FieldT& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("vf3: cannot open " + path.string() + " for writing");
  write_vf3(out, f);
}

Vf3Header read_vf3_header(std::istream& in) {
  std::string line;
  std::size_t pos = 0;
  for (char c; in.get(c);) {
    if (c == '\n') break;
    line.push_back(c);
    ++pos;
    if (pos > 4096) throw Vf3Error("vf3: header line too long", 4096);
  }
  if (!in) throw Vf3Error("vf3: missing header terminator", pos);

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    // parse_error::byte is 1-based and counts the offending character.
    throw Vf3Error("vf3: malformed header", e.byte > 0 ? e.byte - 1 : 0);
  }
  auto field_offset = [&](const char* key) {
    const std::size_t at = line.find(std::string("\"") + key + "\"");
    return at == std::string::npos ? std::size_t(0) : at;
  };
  if (!j.is_object()) throw Vf3Error("vf3: header is not an object", 0);
  for (const char* key : {"kind", "n", "L", "version"})
    if (!j.contains(key))
      throw Vf3Error(std::string("vf3: header lacks \"") + key + "\"", line.empty() ? 0 : line.size() - 1);

  Vf3Header h;
  const auto& kind = j["kind"];
  if (kind == "scalar")
    h.kind = FieldKind::kScalar;
  else if (kind == "vector")
    h.kind = FieldKind::kVector;
  else if (kind == "spinor")
    h.kind = FieldKind::kSpinor;
  else
    throw Vf3Error("vf3: unknown kind", field_offset("kind"));
  if (!j["n"].is_number_integer() || j["n"].get<long>() < 8 || j["n"].get<long>() % 2 != 0 ||
      j["n"].get<long>() > 4096)
    throw Vf3Error("vf3: n must be an even integer >= 8", field_offset("n"));
  h.n = j["n"].get<int>();
  if (!j["L"].is_number() || !(j["L"].get<double>() > 0.0) || !std::isfinite(j["L"].get<double>()))
    throw Vf3Error("vf3: L must be positive", field_offset("L"));
  h.L = j["L"].get<double>();
  if (!j["version"].is_number_integer() || j["version"].get<int>() != kVersion)
    throw Vf3Error("vf3: unsupported version", field_offset("version"));
  h.version = kVersion;
  return h;
}

template <typename FieldT>
FieldT read_vf3(std::istream& in) {
  const auto start = in.tellg();
  const Vf3Header h = read_vf3_header(in);
  const std::size_t header_bytes = start >= 0 && in.tellg() >= 0 ? std::size_t(in.tellg() - start) : 0;
  if (h.kind != kind_of<FieldT>())
    throw Vf3Error(std::string("vf3: expected kind ") + kind_name(kind_of<FieldT>()) + ", found " + kind_name(h.kind), 0);

  const Grid grid = make_grid(h.n, h.L);
  FieldT f(grid);
  const std::size_t count = std::size_t(grid.size()) * doubles_per_site<FieldT>();
  std::vector<std::uint64_t> buf(count);
  in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(count * 8));
  const std::size_t got = std::size_t(in.gcount());
  if (got < count * 8) throw Vf3Error("vf3: data truncated", header_bytes + got);
  if (in.peek() != std::char_traits<char>::eof()) throw Vf3Error("vf3: trailing bytes", header_bytes + count * 8);

  auto* data = reinterpret_cast<double*>(f.values().data());
  for (std::size_t i = 0; i < count; ++i) {
    data[i] = std::bit_cast<double>(to_little(buf[i]));
    if (!std::isfinite(data[i])) throw Vf3Error("vf3: non-finite sample", header_bytes + 8 * i);
  }
  return f;
}

template <typename FieldT>
FieldT load_vf3(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("vf3: cannot open " + path.string());
  return read_vf3<FieldT>(in);
}

template void save_vf3(const std::filesystem::path&, const ScalarField&);
template void save_vf3(const std::filesystem::path&, const VectorField&);
template void save_vf3(const std::filesystem::path&, const SpinorField&);
template ScalarField read_vf3(std::istream&);
template VectorField read_vf3(std::istream&);
template SpinorField read_vf3(std::istream&);
template ScalarField load_vf3(const std::filesystem::path&);
template VectorField load_vf3(const std::filesystem::path&);
template SpinorField load_vf3(const std::filesystem::path&);

}  // namespace curlsob
