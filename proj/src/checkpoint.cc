#include "evcore/checkpoint.h"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "evcore/errors.h"
#include "evcore/matrix_io.h"

namespace evcore {

namespace {

constexpr char kMagic[8] = {'E', 'V', 'C', 'C', 'K', 'P', 'T', '\0'};

void write_tensors(std::ostream& out, const NetParams& p) {
  p.for_each([&](const Eigen::Ref<const Eigen::MatrixXd>& t) {
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) binary::write_f64(out, t(r, c));
    }
  });
}

void read_tensors(std::istream& in, NetParams& p) {
  p.for_each([&](Eigen::Ref<Eigen::MatrixXd> t) {
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) t(r, c) = binary::read_f64(in);
    }
  });
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ck) {
  const NetShape s = ck.params.shape();
  out.write(kMagic, sizeof(kMagic));
  binary::write_u64(out, kCheckpointVersion);
  for (std::size_t width : {s.input, s.hidden1, s.embedding, s.hidden3, s.output}) binary::write_u64(out, width);
  write_tensors(out, ck.params);
  write_tensors(out, ck.adam.m);
  write_tensors(out, ck.adam.v);
  binary::write_u64(out, ck.adam.step);
  binary::write_u64(out, ck.epoch);
  binary::write_u64(out, ck.seed);
  binary::write_u64(out, ck.config_hash);
  binary::write_f64(out, ck.tau);
  binary::write_f64(out, ck.validation_b3);
}

Checkpoint read_checkpoint(std::istream& in, const std::string& source_name) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw InputError(source_name + ": not a checkpoint file");
  }
  const std::uint64_t version = binary::read_u64(in);
  if (version != kCheckpointVersion) {
    throw InputError(source_name + ": unsupported checkpoint version " + std::to_string(version));
  }
  NetShape s;
  for (std::size_t* width : {&s.input, &s.hidden1, &s.embedding, &s.hidden3, &s.output}) {
    const std::uint64_t w = binary::read_u64(in);
    if (w > (1u << 24)) throw InputError(source_name + ": implausible layer width");
    *width = static_cast<std::size_t>(w);
  }
  Checkpoint ck;
  ck.params = NetParams::zeros(s);
  ck.adam = AdamState::zeros(s);
  read_tensors(in, ck.params);
  read_tensors(in, ck.adam.m);
  read_tensors(in, ck.adam.v);
  ck.adam.step = binary::read_u64(in);
  ck.epoch = binary::read_u64(in);
  ck.seed = binary::read_u64(in);
  ck.config_hash = binary::read_u64(in);
  ck.tau = binary::read_f64(in);
  ck.validation_b3 = binary::read_f64(in);
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write checkpoint " + path.string());
  write_checkpoint(out, ck);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint " + path.string());
  return read_checkpoint(in, path.string());
}

}  // namespace evcore
