#include "mns/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace mns {

namespace {

constexpr char kMagic[4] = {'M', 'N', 'S', '2'};
constexpr std::uint8_t kFieldCount = 9;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

std::vector<unsigned char> encode_snapshot(double t, const VectorField& u, const VectorField& E,
                                           const VectorField& B) {
  const Grid& g = u.grid();
  require_same_grid(u[0], E[0]);
  require_same_grid(u[0], B[0]);
  std::vector<unsigned char> out;
  out.reserve(kSnapshotHeaderBytes + 9 * 8 * g.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kSnapshotVersion);
  put_u32(out, static_cast<std::uint32_t>(g.n()));
  put_f64(out, g.length());
  put_f64(out, t);
  out.push_back(kFieldCount);
  for (const VectorField* v : {&u, &E, &B}) {
    const VectorField p = ensure_physical(*v);
    for (std::size_t c = 0; c < 3; ++c)
      for (double x : p[c].values()) put_f64(out, x);
  }
  return out;
}

Snapshot decode_snapshot(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kSnapshotHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw IoError("snapshot: bad magic");
  const unsigned char* p = bytes.data();
  if (get_u32(p + 4) != kSnapshotVersion) throw IoError("snapshot: unsupported version");
  const std::uint32_t n = get_u32(p + 8);
  const double L = get_f64(p + 12);
  const double t = get_f64(p + 20);
  if (p[28] != kFieldCount) throw IoError("snapshot: unexpected field count");
  const std::size_t plane = static_cast<std::size_t>(n) * n;
  if (bytes.size() != kSnapshotHeaderBytes + 9 * 8 * plane) throw IoError("snapshot: truncated payload");
  const Grid g(n, L);
  std::vector<ScalarField> planes;
  planes.reserve(9);
  const unsigned char* q = p + kSnapshotHeaderBytes;
  for (int f = 0; f < 9; ++f) {
    std::vector<double> v(plane);
    for (std::size_t i = 0; i < plane; ++i, q += 8) v[i] = get_f64(q);
    planes.push_back(ScalarField::physical(g, std::move(v)));
  }
  return Snapshot{t, VectorField(planes[0], planes[1], planes[2]), VectorField(planes[3], planes[4], planes[5]),
                  VectorField(planes[6], planes[7], planes[8])};
}

void write_snapshot(const std::filesystem::path& path, double t, const VectorField& u, const VectorField& E,
                    const VectorField& B) {
  const auto bytes = encode_snapshot(t, u, E, B);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open snapshot for writing: " + path.string());
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("failed writing snapshot: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open snapshot: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace mns
