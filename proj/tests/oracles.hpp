// Test-only reference implementations, kept independent of the library code
// they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "termtk/core.hpp"
#include "termtk/lemma.hpp"
#include "termtk/metrics.hpp"
#include "termtk/termbase.hpp"

namespace oracles {

// Greedy leftmost-longest matching by scanning every entry at every position,
// no index involved. Mirrors the documented tie rules: longest first, surface
// over lemma at equal length, earliest entry last.
inline std::vector<termtk::TermMatch> brute_force_matches(
    const termtk::TokenizedSentence& sentence, const termtk::TermBase& tb,
    const termtk::Lemmatizer& lemmatizer) {
  termtk::TokenizedSentence s =
      sentence.has_lemmas() ? sentence : lemmatizer.sentence(sentence);
  const auto& surface = s.surface;
  const auto& lemmas = *s.lemmas;

  auto tokens_equal = [](const termtk::Tokens& hay, std::size_t at,
                         const termtk::Tokens& needle) {
    if (at + needle.size() > hay.size()) return false;
    for (std::size_t k = 0; k < needle.size(); ++k)
      if (hay[at + k] != needle[k]) return false;
    return true;
  };

  std::vector<termtk::TermMatch> out;
  std::size_t i = 0;
  while (i < surface.size()) {
    bool found = false;
    termtk::TermMatch best{};
    std::size_t best_len = 0;
    bool best_surface = false;
    for (std::size_t ei = 0; ei < tb.entries().size(); ++ei) {
      const auto& entry = tb.entries()[ei];
      const std::size_t len = entry.source_term.size();
      bool surf = tokens_equal(surface, i, entry.source_term);
      bool lem = surf || tokens_equal(lemmas, i, entry.source_lemmas);
      if (!lem) continue;
      if (len > best_len || (len == best_len && surf && !best_surface)) {
        best = termtk::TermMatch{ei, termtk::Span{i, i + len},
                                 surf ? termtk::Level::Surface : termtk::Level::Lemma};
        best_len = len;
        best_surface = surf;
        found = true;
      }
    }
    if (found) {
      out.push_back(best);
      i += best_len;
    } else {
      ++i;
    }
  }
  return out;
}

// Plain recursive-free weighted edit distance, written separately from the
// library's DP.
inline double oracle_edit_distance(const termtk::Tokens& hyp,
                                   const std::vector<double>& hw,
                                   const termtk::Tokens& ref,
                                   const std::vector<double>& rw) {
  const std::size_t m = hyp.size(), n = ref.size();
  std::vector<std::vector<double>> d(m + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 1; i <= m; ++i) d[i][0] = d[i - 1][0] + hw[i - 1];
  for (std::size_t j = 1; j <= n; ++j) d[0][j] = d[0][j - 1] + rw[j - 1];
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      double sub = d[i - 1][j - 1] +
                   (hyp[i - 1] == ref[j - 1] ? 0.0 : std::max(hw[i - 1], rw[j - 1]));
      d[i][j] = std::min({sub, d[i - 1][j] + hw[i - 1], d[i][j - 1] + rw[j - 1]});
    }
  return d[m][n];
}

// Exact minimum of shifts*shift_cost + edit_distance over every sequence of
// block moves (any block, any destination). Breadth-first over shift counts
// with a visited set; levels stop once another shift cannot pay off.
struct OracleTer {
  double cost = 0.0;
  int shifts = 0;
};

inline OracleTer exhaustive_ter(const termtk::Tokens& hyp,
                                const std::vector<double>& hw,
                                const termtk::Tokens& ref,
                                const std::vector<double>& rw,
                                double shift_cost) {
  using State = std::pair<termtk::Tokens, std::vector<double>>;
  auto key_of = [](const State& s) {
    std::string key;
    for (std::size_t i = 0; i < s.first.size(); ++i) {
      key += s.first[i];
      key.push_back('\x1f');
      key += std::to_string(s.second[i]);
      key.push_back('\x1e');
    }
    return key;
  };

  OracleTer best;
  best.cost = oracle_edit_distance(hyp, hw, ref, rw);
  best.shifts = 0;

  std::set<std::string> visited;
  std::vector<State> frontier{{hyp, hw}};
  visited.insert(key_of(frontier.front()));

  const std::size_t m = hyp.size();
  for (int g = 1; static_cast<double>(g) * shift_cost < best.cost; ++g) {
    std::vector<State> next;
    for (const auto& state : frontier) {
      for (std::size_t len = 1; len <= m; ++len) {
        for (std::size_t begin = 0; begin + len <= m; ++begin) {
          for (std::size_t at = 0; at + len <= m; ++at) {
            if (at == begin) continue;
            State moved;
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < m; ++i)
              if (i < begin || i >= begin + len) rest.push_back(i);
            for (std::size_t p = 0; p <= rest.size(); ++p) {
              if (p == at)
                for (std::size_t k = 0; k < len; ++k) {
                  moved.first.push_back(state.first[begin + k]);
                  moved.second.push_back(state.second[begin + k]);
                }
              if (p < rest.size()) {
                moved.first.push_back(state.first[rest[p]]);
                moved.second.push_back(state.second[rest[p]]);
              }
            }
            if (!visited.insert(key_of(moved)).second) continue;
            double total = static_cast<double>(g) * shift_cost +
                           oracle_edit_distance(moved.first, moved.second, ref, rw);
            if (total < best.cost - 1e-12) {
              best.cost = total;
              best.shifts = g;
            }
            next.push_back(std::move(moved));
          }
        }
      }
    }
    if (next.empty()) break;
    frontier = std::move(next);
  }
  return best;
}

// Discrete triangular(1, 2, 9) reference pmf, derived by hand: density of the
// continuous triangular at the integers, which already sums to one. Endpoints
// carry zero mass.
inline std::vector<double> triangular_1_2_9_pmf() {
  return {0.0,      1.0 / 4.0, 3.0 / 14.0, 5.0 / 28.0, 1.0 / 7.0,
          3.0 / 28.0, 1.0 / 14.0, 1.0 / 28.0, 0.0};
}

// chi-square statistic over bins with positive expectation; bins expected to
// be empty must be observed empty (checked by the caller).
inline double chi_square(const std::vector<std::uint64_t>& observed,
                         const std::vector<double>& pmf, std::uint64_t total,
                         int* dof) {
  double stat = 0.0;
  int bins = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (pmf[k] <= 0.0) continue;
    double expected = pmf[k] * static_cast<double>(total);
    double diff = static_cast<double>(observed[k]) - expected;
    stat += diff * diff / expected;
    ++bins;
  }
  if (dof) *dof = bins - 1;
  return stat;
}

// P(chi2 > crit) = 0.01 critical values by degrees of freedom.
inline double chi_square_crit_p01(int dof) {
  static const std::map<int, double> table = {
      {1, 6.634896601021213},  {2, 9.21034037197618},
      {3, 11.344866730144373}, {4, 13.276704135987622},
      {5, 15.08627246938899},  {6, 16.811893829770927},
      {7, 18.475306906582357}, {8, 20.090235029663233}};
  return table.at(dof);
}

// Exact expected constraint length for the sampling loop on sentences of
// `length` tokens, including end-of-sentence truncation. Probability mass is
// pushed through the (position, open-length) state machine.
inline double expected_constraint_length(int length, double s, double e) {
  std::vector<double> open(static_cast<std::size_t>(length) + 2, 0.0);
  double closed = 1.0;
  double count_mass = 0.0, length_mass = 0.0;
  for (int t = 0; t < length; ++t) {
    std::vector<double> open_next(open.size(), 0.0);
    double closed_next = 0.0;
    // closed: opens with probability s, the token joins the constraint
    open_next[1] += closed * s;
    closed_next += closed * (1.0 - s);
    // open(k): closes with probability e (token excluded), else grows
    for (std::size_t k = 1; k < open.size(); ++k) {
      if (open[k] == 0.0) continue;
      count_mass += open[k] * e;
      length_mass += open[k] * e * static_cast<double>(k);
      if (k + 1 < open_next.size()) open_next[k + 1] += open[k] * (1.0 - e);
    }
    open = std::move(open_next);
    closed = closed_next;
  }
  for (std::size_t k = 1; k < open.size(); ++k) {
    count_mass += open[k];
    length_mass += open[k] * static_cast<double>(k);
  }
  return length_mass / count_mass;
}

}  // namespace oracles
