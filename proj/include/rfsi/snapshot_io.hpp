#ifndef RFSI_SNAPSHOT_IO_HPP
#define RFSI_SNAPSHOT_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "rfsi/types.hpp"

namespace rfsi
{

// Dense matrix block: "SNAP", u32 version, u64 rows, u64 cols, column-major
// little-endian f64 payload.
constexpr std::uint32_t kSnapVersion = 1;

void write_snap(std::ostream &os, const Mat &m);
Mat read_snap(std::istream &is);

void write_snap_file(const std::string &path, const Mat &m);
Mat read_snap_file(const std::string &path);

// FNV-1a hash of a file's bytes, as 16 hex digits.
std::string file_hash(const std::string &path);

}  // namespace rfsi

#endif  // RFSI_SNAPSHOT_IO_HPP
