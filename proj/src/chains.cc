#include "evcore/chains.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "evcore/errors.h"

namespace evcore {

namespace {

std::string join_ids(const std::vector<std::string>& ids, std::size_t limit) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > limit) out += ", ...";
  return out;
}

std::string mismatch_message(const std::vector<std::string>& only_gold,
                             const std::vector<std::string>& only_sys) {
  std::ostringstream msg;
  msg << "mention sets differ";
  if (!only_gold.empty()) {
    msg << "; only in gold (" << only_gold.size() << "): " << join_ids(only_gold, 20);
  }
  if (!only_sys.empty()) {
    msg << "; only in system (" << only_sys.size() << "): " << join_ids(only_sys, 20);
  }
  return msg.str();
}

}  // namespace

MentionMismatch::MentionMismatch(std::vector<std::string> only_gold,
                                 std::vector<std::string> only_sys)
    : Error(mismatch_message(only_gold, only_sys)),
      only_gold_(std::move(only_gold)),
      only_sys_(std::move(only_sys)) {}

std::size_t Clustering::mention_count() const {
  std::size_t n = 0;
  for (const auto& chain : chains) n += chain.size();
  return n;
}

Clustering Clustering::canonical() const {
  Clustering out = *this;
  for (auto& chain : out.chains) std::sort(chain.begin(), chain.end());
  std::sort(out.chains.begin(), out.chains.end(),
            [](const auto& a, const auto& b) {
              if (a.empty() || b.empty()) return a.size() < b.size();
              return a.front() < b.front();
            });
  return out;
}

void check_partition(const Clustering& clustering) {
  std::set<std::string> seen;
  for (const auto& chain : clustering.chains) {
    if (chain.empty()) throw IntegrityError("clustering contains an empty chain");
    for (const auto& id : chain) {
      if (!seen.insert(id).second) {
        throw IntegrityError("mention '" + id + "' appears in more than one chain");
      }
    }
  }
}

Clustering read_chains(std::istream& in, const std::string& source_name) {
  Clustering out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> chain;
    std::istringstream fields(line);
    std::string id;
    while (std::getline(fields, id, '\t')) {
      if (id.empty()) throw ParseError(source_name, line_no, "empty mention id");
      chain.push_back(id);
    }
    out.chains.push_back(std::move(chain));
  }
  try {
    check_partition(out);
  } catch (const IntegrityError& e) {
    throw IntegrityError(source_name + ": " + e.what());
  }
  return out;
}

Clustering load_chains(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open chain file " + path.string());
  return read_chains(in, path.string());
}

void write_chains(std::ostream& out, const Clustering& clustering, const Stamp* stamp) {
  if (stamp) out << stamp->comment() << '\n';
  for (const auto& chain : clustering.canonical().chains) {
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (i) out << '\t';
      out << chain[i];
    }
    out << '\n';
  }
}

void save_chains(const std::filesystem::path& path, const Clustering& clustering, const Stamp* stamp) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write chain file " + path.string());
  write_chains(out, clustering, stamp);
}

}  // namespace evcore
