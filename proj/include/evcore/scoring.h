#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "evcore/chains.h"

namespace evcore {

struct Prf {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;

  static Prf from(double recall, double precision);
};

// Harmonic mean, 0 when both are 0.
double f_measure(double recall, double precision);

struct MetricReport {
  Prf muc, b3, ceaf_m, ceaf_e, blanc;
  double conll = 0.0;  // mean of MUC, B3 and CEAF-E F1
};

enum class CeafVariant { kMention, kEntity };

// Label-vector scorers: gold[i] and sys[i] are chain labels of mention i.
// Empty denominators yield 0.
namespace labels {

Prf muc(std::span<const std::size_t> gold, std::span<const std::size_t> sys);
Prf b3(std::span<const std::size_t> gold, std::span<const std::size_t> sys);
Prf ceaf(std::span<const std::size_t> gold, std::span<const std::size_t> sys, CeafVariant variant);
Prf blanc(std::span<const std::size_t> gold, std::span<const std::size_t> sys);
MetricReport report(std::span<const std::size_t> gold, std::span<const std::size_t> sys);

}  // namespace labels

// Clustering scorers. Both sides must cover the same mention ids, otherwise
// MentionMismatch is thrown.
Prf score_muc(const Clustering& gold, const Clustering& sys);
Prf score_b3(const Clustering& gold, const Clustering& sys);
Prf score_ceaf(const Clustering& gold, const Clustering& sys, CeafVariant variant);
Prf score_blanc(const Clustering& gold, const Clustering& sys);
MetricReport report(const Clustering& gold, const Clustering& sys);

// Splits every chain by document; mention_docs maps mention id to document.
Clustering within_doc_projection(const Clustering& clustering, const std::map<std::string, std::string>& mention_docs);

// Tab-separated: header "measure R P F", one row per measure, 4 decimals.
void write_report(std::ostream& out, const MetricReport& report);
// Percentages; `decimals` digits after the point.
void write_report_table(std::ostream& out, const MetricReport& report, int decimals = 0);

}  // namespace evcore
