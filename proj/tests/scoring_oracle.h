#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <set>
#include <vector>

#include "evcore/scoring.h"

namespace evcore::testing {

// Reference scorers written straight from the measure definitions, with no
// shared code paths with the library.

inline std::vector<std::set<std::size_t>> chain_sets(const std::vector<std::size_t>& labels) {
  std::vector<std::set<std::size_t>> out;
  std::vector<std::size_t> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find(seen.begin(), seen.end(), labels[i]);
    if (it == seen.end()) {
      seen.push_back(labels[i]);
      out.push_back({i});
    } else {
      out[static_cast<std::size_t>(it - seen.begin())].insert(i);
    }
  }
  return out;
}

inline double safe_div(double a, double b) { return b > 0.0 ? a / b : 0.0; }

inline Prf prf(double r, double p) { return Prf{r, p, r + p > 0.0 ? 2.0 * r * p / (r + p) : 0.0}; }

inline double brute_muc_recall(const std::vector<std::size_t>& key, const std::vector<std::size_t>& response) {
  double num = 0.0, den = 0.0;
  for (const auto& k : chain_sets(key)) {
    std::set<std::size_t> parts;
    for (std::size_t m : k) parts.insert(response[m]);
    num += static_cast<double>(k.size() - parts.size());
    den += static_cast<double>(k.size() - 1);
  }
  return safe_div(num, den);
}

inline Prf brute_muc(const std::vector<std::size_t>& gold, const std::vector<std::size_t>& sys) {
  return prf(brute_muc_recall(gold, sys), brute_muc_recall(sys, gold));
}

inline Prf brute_b3(const std::vector<std::size_t>& gold, const std::vector<std::size_t>& sys) {
  const std::size_t n = gold.size();
  double r = 0.0, p = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    double g = 0, s = 0, both = 0;
    for (std::size_t o = 0; o < n; ++o) {
      g += gold[o] == gold[m];
      s += sys[o] == sys[m];
      both += gold[o] == gold[m] && sys[o] == sys[m];
    }
    r += both / g;
    p += both / s;
  }
  return n ? prf(r / static_cast<double>(n), p / static_cast<double>(n)) : Prf{};
}

inline double phi(const std::set<std::size_t>& k, const std::set<std::size_t>& s, bool entity) {
  double common = 0;
  for (std::size_t m : k) common += s.count(m);
  return entity ? 2.0 * common / static_cast<double>(k.size() + s.size()) : common;
}

// Best total similarity over every one-to-one alignment.
inline double brute_alignment(const std::vector<std::set<std::size_t>>& keys,
                              const std::vector<std::set<std::size_t>>& resp, bool entity) {
  const bool flip = keys.size() > resp.size();
  const auto& small = flip ? resp : keys;
  const auto& large = flip ? keys : resp;
  std::vector<std::size_t> perm(large.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < small.size(); ++i) total += phi(small[i], large[perm[i]], entity);
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline Prf brute_ceaf(const std::vector<std::size_t>& gold, const std::vector<std::size_t>& sys, bool entity) {
  const auto keys = chain_sets(gold), resp = chain_sets(sys);
  const double best = brute_alignment(keys, resp, entity);
  double ks = 0.0, ss = 0.0;
  for (const auto& k : keys) ks += phi(k, k, entity);
  for (const auto& s : resp) ss += phi(s, s, entity);
  return prf(safe_div(best, ks), safe_div(best, ss));
}

inline Prf brute_blanc(const std::vector<std::size_t>& gold, const std::vector<std::size_t>& sys) {
  double rc = 0, gc = 0, sc = 0, rn = 0, gn = 0, sn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t j = i + 1; j < gold.size(); ++j) {
      const bool g = gold[i] == gold[j], s = sys[i] == sys[j];
      gc += g;
      sc += s;
      rc += g && s;
      gn += !g;
      sn += !s;
      rn += !g && !s;
    }
  }
  const Prf c = prf(safe_div(rc, gc), safe_div(rc, sc));
  const Prf nc = prf(safe_div(rn, gn), safe_div(rn, sn));
  const bool has_c = gc + sc > 0, has_n = gn + sn > 0;
  if (has_c && has_n) return Prf{(c.recall + nc.recall) / 2, (c.precision + nc.precision) / 2, (c.f1 + nc.f1) / 2};
  if (has_c) return c;
  if (has_n) return nc;
  return {};
}

}  // namespace evcore::testing
