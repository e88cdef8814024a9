#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <iosfwd>

#include <Eigen/Dense>

#include "evcore/stamp.h"

namespace evcore {

// Binary matrix file: 8-byte magic "EVCMAT01", uint64 config hash, uint64
// seed, uint64 rows, uint64 cols, then rows*cols IEEE-754 doubles in row-major
// order. All integers and doubles are little-endian.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m, const Stamp& stamp = {});
Eigen::MatrixXd read_matrix(std::istream& in, const std::string& source_name = "<stream>",
                            Stamp* stamp = nullptr);
void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m, const Stamp& stamp = {});
Eigen::MatrixXd load_matrix(const std::filesystem::path& path, Stamp* stamp = nullptr);

namespace binary {

void write_u64(std::ostream& out, std::uint64_t value);
void write_f64(std::ostream& out, double value);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);

}  // namespace binary

}  // namespace evcore
