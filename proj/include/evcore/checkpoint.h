#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "evcore/net.h"

namespace evcore {

inline constexpr std::uint64_t kCheckpointVersion = 1;

struct Checkpoint {
  NetParams params;
  AdamState adam;
  std::uint64_t epoch = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  double tau = 0.0;
  double validation_b3 = 0.0;
};

// Layout (little-endian): magic "EVCCKPT\0", u64 version, u64 x5 layer widths
// (input, hidden1, embedding, hidden3, output), the eight parameter tensors
// row-major as f64 (w1 b1 w2 b2 w3 b3 w4 b4), Adam first moments, Adam second
// moments, u64 Adam step, u64 epoch, u64 seed, u64 config hash, f64 tau,
// f64 validation B3.
void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in, const std::string& source_name = "<stream>");
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace evcore
