#include "evcore/matrix_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "evcore/errors.h"

namespace evcore {

namespace {

constexpr char kMagic[8] = {'E', 'V', 'C', 'M', 'A', 'T', '0', '1'};

}  // namespace

namespace binary {

void write_u64(std::ostream& out, std::uint64_t value) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

void write_f64(std::ostream& out, double value) { write_u64(out, std::bit_cast<std::uint64_t>(value)); }

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw InputError("unexpected end of binary file");
  std::uint64_t value = 0;
  for (int i = 7; i >= 0; --i) value = (value << 8) | bytes[i];
  return value;
}

double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

}  // namespace binary

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m, const Stamp& stamp) {
  out.write(kMagic, sizeof(kMagic));
  binary::write_u64(out, stamp.config_hash);
  binary::write_u64(out, stamp.seed);
  binary::write_u64(out, static_cast<std::uint64_t>(m.rows()));
  binary::write_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) binary::write_f64(out, m(r, c));
  }
}

Eigen::MatrixXd read_matrix(std::istream& in, const std::string& source_name, Stamp* stamp) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw InputError(source_name + ": not a matrix file (bad magic)");
  }
  Stamp header;
  header.config_hash = binary::read_u64(in);
  header.seed = binary::read_u64(in);
  if (stamp) *stamp = header;
  const std::uint64_t rows = binary::read_u64(in);
  const std::uint64_t cols = binary::read_u64(in);
  if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) throw InputError(source_name + ": matrix too large");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = binary::read_f64(in);
  }
  return m;
}

void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m, const Stamp& stamp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write matrix file " + path.string());
  write_matrix(out, m, stamp);
}

Eigen::MatrixXd load_matrix(const std::filesystem::path& path, Stamp* stamp) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open matrix file " + path.string());
  return read_matrix(in, path.string(), stamp);
}

}  // namespace evcore
