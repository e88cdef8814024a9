#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "evcore/stamp.h"

namespace evcore {

// A partition of a mention set into coreference chains (mention ids).
struct Clustering {
  std::vector<std::vector<std::string>> chains;

  std::size_t mention_count() const;

  // Members sorted within each chain, chains sorted by smallest member.
  Clustering canonical() const;

  bool operator==(const Clustering&) const = default;
};

// Builds a clustering from per-mention labels; mentions sharing a label share
// a chain.
template <typename Label>
Clustering clustering_from_labels(const std::vector<std::string>& mention_ids,
                                  const std::vector<Label>& labels);

// Throws IntegrityError when chains overlap or are empty.
void check_partition(const Clustering& clustering);

// Chain file: one chain per line, tab-separated mention ids.
Clustering read_chains(std::istream& in, const std::string& source_name = "<stream>");
Clustering load_chains(const std::filesystem::path& path);
// With a stamp, a leading "# evcore ..." comment line records its provenance.
void write_chains(std::ostream& out, const Clustering& clustering, const Stamp* stamp = nullptr);
void save_chains(const std::filesystem::path& path, const Clustering& clustering, const Stamp* stamp = nullptr);

}  // namespace evcore

#include <map>

namespace evcore {

template <typename Label>
Clustering clustering_from_labels(const std::vector<std::string>& mention_ids,
                                  const std::vector<Label>& labels) {
  std::map<Label, std::size_t> slot;
  Clustering out;
  for (std::size_t i = 0; i < mention_ids.size(); ++i) {
    auto [it, inserted] = slot.try_emplace(labels[i], out.chains.size());
    if (inserted) out.chains.emplace_back();
    out.chains[it->second].push_back(mention_ids[i]);
  }
  return out;
}

}  // namespace evcore
