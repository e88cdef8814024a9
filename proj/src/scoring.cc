#include "evcore/scoring.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <unordered_map>

#include <Eigen/Dense>

#include "evcore/errors.h"
#include "evcore/hungarian.h"

namespace evcore {

double f_measure(double recall, double precision) {
  return recall + precision > 0.0 ? 2.0 * recall * precision / (recall + precision) : 0.0;
}

Prf Prf::from(double recall, double precision) { return Prf{recall, precision, f_measure(recall, precision)}; }

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// Chains as member lists, labels renumbered densely in first-seen order.
std::vector<std::vector<std::size_t>> chains_of(std::span<const std::size_t> labels) {
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<std::vector<std::size_t>> chains;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = slot.try_emplace(labels[i], chains.size());
    if (inserted) chains.emplace_back();
    chains[it->second].push_back(i);
  }
  return chains;
}

void check_sizes(std::span<const std::size_t> gold, std::span<const std::size_t> sys) {
  if (gold.size() != sys.size()) throw ShapeError("gold and system label vectors differ in length");
}

// Overlap counts |K n S| for every (gold chain, system chain) pair that meets.
struct Contingency {
  std::vector<std::vector<std::size_t>> gold_chains, sys_chains;
  std::vector<std::size_t> gold_of, sys_of;  // dense chain index per mention
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> overlap;

  Contingency(std::span<const std::size_t> gold, std::span<const std::size_t> sys)
      : gold_chains(chains_of(gold)), sys_chains(chains_of(sys)), gold_of(gold.size()), sys_of(sys.size()) {
    for (std::size_t k = 0; k < gold_chains.size(); ++k) {
      for (std::size_t m : gold_chains[k]) gold_of[m] = k;
    }
    for (std::size_t k = 0; k < sys_chains.size(); ++k) {
      for (std::size_t m : sys_chains[k]) sys_of[m] = k;
    }
    for (std::size_t m = 0; m < gold.size(); ++m) ++overlap[{gold_of[m], sys_of[m]}];
  }
};

double muc_recall(const std::vector<std::vector<std::size_t>>& key, const std::vector<std::size_t>& response_of) {
  double num = 0.0, den = 0.0;
  for (const auto& chain : key) {
    std::set<std::size_t> parts;
    for (std::size_t m : chain) parts.insert(response_of[m]);
    num += static_cast<double>(chain.size() - parts.size());
    den += static_cast<double>(chain.size() - 1);
  }
  return ratio(num, den);
}

double pairs(std::size_t n) { return static_cast<double>(n) * static_cast<double>(n - (n > 0 ? 1 : 0)) / 2.0; }

}  // namespace

namespace labels {

Prf muc(std::span<const std::size_t> gold, std::span<const std::size_t> sys) {
  check_sizes(gold, sys);
  const Contingency t(gold, sys);
  return Prf::from(muc_recall(t.gold_chains, t.sys_of), muc_recall(t.sys_chains, t.gold_of));
}

Prf b3(std::span<const std::size_t> gold, std::span<const std::size_t> sys) {
  check_sizes(gold, sys);
  if (gold.empty()) return {};
  const Contingency t(gold, sys);
  double recall = 0.0, precision = 0.0;
  for (const auto& [key, count] : t.overlap) {
    const double c = static_cast<double>(count);
    recall += c * c / static_cast<double>(t.gold_chains[key.first].size());
    precision += c * c / static_cast<double>(t.sys_chains[key.second].size());
  }
  const double n = static_cast<double>(gold.size());
  return Prf::from(recall / n, precision / n);
}

Prf ceaf(std::span<const std::size_t> gold, std::span<const std::size_t> sys, CeafVariant variant) {
  check_sizes(gold, sys);
  if (gold.empty()) return {};
  const Contingency t(gold, sys);
  auto phi = [&](std::size_t common, std::size_t key_size, std::size_t response_size) {
    const double c = static_cast<double>(common);
    return variant == CeafVariant::kMention ? c : 2.0 * c / static_cast<double>(key_size + response_size);
  };
  Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(t.gold_chains.size()),
                                              static_cast<Eigen::Index>(t.sys_chains.size()));
  for (const auto& [key, count] : t.overlap) {
    sim(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second)) =
        phi(count, t.gold_chains[key.first].size(), t.sys_chains[key.second].size());
  }
  const double best = assignment_weight(sim, max_weight_assignment(sim));
  double gold_self = 0.0, sys_self = 0.0;
  for (const auto& k : t.gold_chains) gold_self += phi(k.size(), k.size(), k.size());
  for (const auto& s : t.sys_chains) sys_self += phi(s.size(), s.size(), s.size());
  return Prf::from(ratio(best, gold_self), ratio(best, sys_self));
}

Prf blanc(std::span<const std::size_t> gold, std::span<const std::size_t> sys) {
  check_sizes(gold, sys);
  const Contingency t(gold, sys);
  const double total = pairs(gold.size());
  double gold_links = 0.0, sys_links = 0.0, both_links = 0.0;
  for (const auto& k : t.gold_chains) gold_links += pairs(k.size());
  for (const auto& s : t.sys_chains) sys_links += pairs(s.size());
  for (const auto& [key, count] : t.overlap) both_links += pairs(count);
  const double gold_non = total - gold_links;
  const double sys_non = total - sys_links;
  const double both_non = total - gold_links - sys_links + both_links;

  const Prf coref = Prf::from(ratio(both_links, gold_links), ratio(both_links, sys_links));
  const Prf non_coref = Prf::from(ratio(both_non, gold_non), ratio(both_non, sys_non));
  const bool has_coref = gold_links > 0.0 || sys_links > 0.0;
  const bool has_non = gold_non > 0.0 || sys_non > 0.0;
  if (has_coref && has_non) {
    return Prf{(coref.recall + non_coref.recall) / 2.0, (coref.precision + non_coref.precision) / 2.0,
               (coref.f1 + non_coref.f1) / 2.0};
  }
  if (has_coref) return coref;
  if (has_non) return non_coref;
  return {};
}

MetricReport report(std::span<const std::size_t> gold, std::span<const std::size_t> sys) {
  MetricReport r;
  r.muc = muc(gold, sys);
  r.b3 = b3(gold, sys);
  r.ceaf_m = ceaf(gold, sys, CeafVariant::kMention);
  r.ceaf_e = ceaf(gold, sys, CeafVariant::kEntity);
  r.blanc = blanc(gold, sys);
  r.conll = (r.muc.f1 + r.b3.f1 + r.ceaf_e.f1) / 3.0;
  return r;
}

}  // namespace labels

namespace {

// Aligns both clusterings onto one mention index space.
struct Aligned {
  std::vector<std::size_t> gold, sys;
};

Aligned align(const Clustering& gold, const Clustering& sys) {
  check_partition(gold);
  check_partition(sys);
  std::map<std::string, std::size_t> gold_label, sys_label;
  for (std::size_t k = 0; k < gold.chains.size(); ++k) {
    for (const auto& id : gold.chains[k]) gold_label.emplace(id, k);
  }
  for (std::size_t k = 0; k < sys.chains.size(); ++k) {
    for (const auto& id : sys.chains[k]) sys_label.emplace(id, k);
  }
  std::vector<std::string> only_gold, only_sys;
  for (const auto& [id, k] : gold_label) {
    if (!sys_label.count(id)) only_gold.push_back(id);
  }
  for (const auto& [id, k] : sys_label) {
    if (!gold_label.count(id)) only_sys.push_back(id);
  }
  if (!only_gold.empty() || !only_sys.empty()) throw MentionMismatch(std::move(only_gold), std::move(only_sys));
  Aligned out;
  for (const auto& [id, k] : gold_label) {
    out.gold.push_back(k);
    out.sys.push_back(sys_label.at(id));
  }
  return out;
}

}  // namespace

Prf score_muc(const Clustering& gold, const Clustering& sys) {
  const Aligned a = align(gold, sys);
  return labels::muc(a.gold, a.sys);
}

Prf score_b3(const Clustering& gold, const Clustering& sys) {
  const Aligned a = align(gold, sys);
  return labels::b3(a.gold, a.sys);
}

Prf score_ceaf(const Clustering& gold, const Clustering& sys, CeafVariant variant) {
  const Aligned a = align(gold, sys);
  return labels::ceaf(a.gold, a.sys, variant);
}

Prf score_blanc(const Clustering& gold, const Clustering& sys) {
  const Aligned a = align(gold, sys);
  return labels::blanc(a.gold, a.sys);
}

MetricReport report(const Clustering& gold, const Clustering& sys) {
  const Aligned a = align(gold, sys);
  return labels::report(a.gold, a.sys);
}

Clustering within_doc_projection(const Clustering& clustering,
                                 const std::map<std::string, std::string>& mention_docs) {
  Clustering out;
  for (const auto& chain : clustering.chains) {
    std::map<std::string, std::vector<std::string>> by_doc;
    std::vector<std::string> order;
    for (const auto& id : chain) {
      auto it = mention_docs.find(id);
      if (it == mention_docs.end()) throw IntegrityError("mention '" + id + "' has no known document");
      auto [slot, inserted] = by_doc.try_emplace(it->second);
      if (inserted) order.push_back(it->second);
      slot->second.push_back(id);
    }
    for (const auto& doc : order) out.chains.push_back(std::move(by_doc[doc]));
  }
  return out;
}

namespace {

struct Row {
  const char* name;
  const Prf* prf;
};

}  // namespace

void write_report(std::ostream& out, const MetricReport& r) {
  const Row rows[] = {{"MUC", &r.muc}, {"B3", &r.b3}, {"CEAF-M", &r.ceaf_m}, {"CEAF-E", &r.ceaf_e}, {"BLANC", &r.blanc}};
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(4);
  out << "measure\tR\tP\tF\n";
  for (const Row& row : rows) {
    out << row.name << '\t' << row.prf->recall << '\t' << row.prf->precision << '\t' << row.prf->f1 << '\n';
  }
  out << "CoNLL\t-\t-\t" << r.conll << '\n';
  out.flags(flags);
  out.precision(precision);
}

void write_report_table(std::ostream& out, const MetricReport& r, int decimals) {
  const Row rows[] = {{"MUC", &r.muc}, {"B3", &r.b3}, {"CEAF-M", &r.ceaf_m}, {"CEAF-E", &r.ceaf_e}, {"BLANC", &r.blanc}};
  const auto flags = out.flags();
  const auto precision = out.precision();
  const int width = decimals > 0 ? decimals + 5 : 4;
  out << std::fixed << std::setprecision(decimals);
  out << std::left << std::setw(8) << "measure" << std::right << std::setw(width) << "R" << std::setw(width) << "P"
      << std::setw(width) << "F" << '\n';
  for (const Row& row : rows) {
    out << std::left << std::setw(8) << row.name << std::right << std::setw(width) << 100.0 * row.prf->recall
        << std::setw(width) << 100.0 * row.prf->precision << std::setw(width) << 100.0 * row.prf->f1 << '\n';
  }
  out << std::left << std::setw(8) << "CoNLL" << std::right << std::setw(width) << "" << std::setw(width) << ""
      << std::setw(width) << 100.0 * r.conll << '\n';
  out.flags(flags);
  out.precision(precision);
}

}  // namespace evcore
