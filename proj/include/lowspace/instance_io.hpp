#pragma once

// Instance files.
//   text:   "n m" on the first line, then n whitespace-separated integers.
//   binary: magic "LSARRAY1", n and m as 8-byte little-endian words, then n
//           8-byte little-endian values.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "walk.hpp"
#include "wire.hpp"

namespace lowspace {

inline constexpr char kBinaryMagic[8] = {'L', 'S', 'A', 'R', 'R', 'A', 'Y', '1'};

enum class instance_format { text, binary };

inline std::vector<std::uint8_t> encode_instance(const input_array& a, instance_format fmt) {
  std::vector<std::uint8_t> out;
  if (fmt == instance_format::binary) {
    out.insert(out.end(), std::begin(kBinaryMagic), std::end(kBinaryMagic));
    wire::put_u64(out, a.size());
    wire::put_u64(out, a.bound());
    for (auto v : a.values()) wire::put_u64(out, v);
    return out;
  }
  std::string text = std::to_string(a.size()) + " " + std::to_string(a.bound()) + "\n";
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    if (i != 0) text += ' ';
    text += std::to_string(a.values()[i]);
  }
  text += '\n';
  out.assign(text.begin(), text.end());
  return out;
}

inline input_array decode_instance(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint64_t> values;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kBinaryMagic, 8) == 0) {
    wire::reader in(bytes.subspan(8));
    n = in.u64();
    m = in.u64();
    if (n > in.remaining() / 8) throw format_error("binary instance shorter than its n");
    values.resize(n);
    for (auto& v : values) v = in.u64();
    if (!in.done()) throw format_error("trailing bytes in binary instance");
  } else {
    std::istringstream is(std::string(bytes.begin(), bytes.end()));
    if (!(is >> n >> m)) throw format_error("text instance: missing 'n m' header");
    values.reserve(n);
    std::uint64_t v = 0;
    while (values.size() < n && is >> v) values.push_back(v);
    if (values.size() != n) throw format_error("text instance: fewer than n values");
    std::string extra;
    if (is >> extra) throw format_error("text instance: more than n values");
  }
  try {
    return input_array(std::move(values), m);
  } catch (const parameter_error& e) {
    throw format_error(e.what());
  }
}

inline void write_instance(const std::string& path, const input_array& a, instance_format fmt) {
  const auto bytes = encode_instance(a, fmt);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw io_error("cannot open '" + path + "' for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw io_error("write to '" + path + "' failed");
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

inline input_array read_instance(const std::string& path) { return decode_instance(read_file(path)); }

}  // namespace lowspace
