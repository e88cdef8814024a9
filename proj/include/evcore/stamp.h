#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

namespace evcore {

// Provenance carried by every artifact: hash of the run configuration and
// the seed that produced it. Text artifacts store it as a leading comment
// line, binary ones in their header.
struct Stamp {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;

  bool operator==(const Stamp&) const = default;

  std::string comment() const {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "# evcore config_hash=%016llx seed=%llu",
                  static_cast<unsigned long long>(config_hash), static_cast<unsigned long long>(seed));
    return buf;
  }

  static std::optional<Stamp> parse(const std::string& line) {
    unsigned long long hash = 0, seed = 0;
    if (std::sscanf(line.c_str(), "# evcore config_hash=%llx seed=%llu", &hash, &seed) != 2) return std::nullopt;
    return Stamp{hash, seed};
  }
};

}  // namespace evcore
