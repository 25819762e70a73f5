#include "mns/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include "mns/error.hpp"

namespace mns {

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::array<char, 1 << 16> buf;
  std::uint64_t h = kFnvOffset;
  while (in) {
    in.read(buf.data(), buf.size());
    const auto got = static_cast<std::size_t>(in.gcount());
    h = fnv1a64(std::span(reinterpret_cast<const unsigned char*>(buf.data()), got), h);
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace mns
