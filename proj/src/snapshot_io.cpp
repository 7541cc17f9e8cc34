#include "rfsi/snapshot_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "rfsi/mesh.hpp"

static_assert(std::endian::native == std::endian::little, "SNAP I/O assumes a little-endian host");

namespace rfsi
{

namespace
{

template <class T>
void put(std::ostream &os, T v)
{
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <class T>
T get(std::istream &is)
{
  T v{};
  is.read(reinterpret_cast<char *>(&v), sizeof(T));
  if (!is)
    throw DataError("SNAP block truncated");
  return v;
}

}  // namespace

void write_snap(std::ostream &os, const Mat &m)
{
  os.write("SNAP", 4);
  put<std::uint32_t>(os, kSnapVersion);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
  os.write(reinterpret_cast<const char *>(m.data()),
           static_cast<std::streamsize>(sizeof(double) * m.size()));
}

Mat read_snap(std::istream &is)
{
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "SNAP", 4) != 0)
    throw DataError("not a SNAP block (bad magic)");
  const auto version = get<std::uint32_t>(is);
  if (version != kSnapVersion)
    throw DataError("unsupported SNAP version " + std::to_string(version));
  const auto rows = get<std::uint64_t>(is);
  const auto cols = get<std::uint64_t>(is);
  if (rows > (1ull << 32) || cols > (1ull << 32))
    throw DataError("SNAP header dimensions are implausible");
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  is.read(reinterpret_cast<char *>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!is)
    throw DataError("SNAP payload truncated");
  return m;
}

void write_snap_file(const std::string &path, const Mat &m)
{
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw DataError("cannot open '" + path + "' for writing");
  write_snap(os, m);
  if (!os)
    throw DataError("write failed for '" + path + "'");
}

Mat read_snap_file(const std::string &path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw DataError("cannot open '" + path + "'");
  return read_snap(is);
}

std::string file_hash(const std::string &path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw DataError("cannot open '" + path + "'");
  const std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return hex64(fnv1a(bytes.data(), bytes.size()));
}

}  // namespace rfsi
