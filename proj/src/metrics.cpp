#include "termtk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace termtk {

namespace {

// Sentence prepared for term search: surface as-is, lemmas in comparison form.
struct Searchable {
  const Tokens* surface;
  Tokens lemmas;
};

Searchable make_searchable(const TokenizedSentence& s, const Lemmatizer& lm,
                           const EvalConfig& cfg) {
  Searchable out;
  out.surface = &s.surface;
  if (s.has_lemmas()) {
    out.lemmas = *s.lemmas;
  } else {
    out.lemmas.reserve(s.surface.size());
    for (const auto& t : s.surface) out.lemmas.push_back(lm.word(t));
  }
  if (cfg.lowercase_lemma_search)
    for (auto& t : out.lemmas) t = utf8_lowercase(t);
  return out;
}

// Variants of one term in both comparison forms.
struct SearchableTerm {
  std::vector<Tokens> surface;
  std::vector<Tokens> lemma;
};

SearchableTerm make_searchable_term(const ConstraintSpec& term,
                                    const Lemmatizer& lm,
                                    const EvalConfig& cfg) {
  SearchableTerm out;
  for (const auto& v : term.variants) {
    out.surface.push_back(v);
    Tokens lv;
    lv.reserve(v.size());
    for (const auto& t : v) {
      std::string lemma = lm.word(t);
      lv.push_back(cfg.lowercase_lemma_search ? utf8_lowercase(lemma)
                                              : std::move(lemma));
    }
    out.lemma.push_back(std::move(lv));
  }
  return out;
}

bool tokens_at(const Tokens& haystack, std::size_t at, const Tokens& needle) {
  if (needle.empty() || at + needle.size() > haystack.size()) return false;
  for (std::size_t k = 0; k < needle.size(); ++k)
    if (haystack[at + k] != needle[k]) return false;
  return true;
}

std::optional<Span> locate_in(const Searchable& s, const SearchableTerm& term) {
  for (std::size_t pos = 0; pos < s.surface->size(); ++pos) {
    for (std::size_t v = 0; v < term.surface.size(); ++v)
      if (tokens_at(*s.surface, pos, term.surface[v]))
        return Span{pos, pos + term.surface[v].size()};
    for (std::size_t v = 0; v < term.lemma.size(); ++v)
      if (tokens_at(s.lemmas, pos, term.lemma[v]))
        return Span{pos, pos + term.lemma[v].size()};
  }
  return std::nullopt;
}

void mark_all(const Searchable& s, const SearchableTerm& term,
              std::vector<bool>& in_term) {
  for (std::size_t pos = 0; pos < s.surface->size(); ++pos) {
    for (const auto& v : term.surface)
      if (tokens_at(*s.surface, pos, v))
        for (std::size_t k = 0; k < v.size(); ++k) in_term[pos + k] = true;
    for (const auto& v : term.lemma)
      if (tokens_at(s.lemmas, pos, v))
        for (std::size_t k = 0; k < v.size(); ++k) in_term[pos + k] = true;
  }
}

// Window lemmas around a span: up to w on each side, term tokens excluded.
Tokens window_around(const Searchable& s, const Span& span, std::size_t w) {
  Tokens out;
  std::size_t left_begin = span.begin > w ? span.begin - w : 0;
  for (std::size_t i = left_begin; i < span.begin; ++i)
    out.push_back(s.lemmas[i]);
  std::size_t right_end = std::min(s.lemmas.size(), span.end + w);
  for (std::size_t i = span.end; i < right_end; ++i)
    out.push_back(s.lemmas[i]);
  return out;
}

double multiset_intersection_size(Tokens a, Tokens b) {
  std::map<std::string, std::size_t> counts;
  for (auto& t : a) ++counts[std::move(t)];
  std::size_t inter = 0;
  for (auto& t : b) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++inter;
    }
  }
  return static_cast<double>(inter);
}

double substitution_cost(double hw, double rw, SubWeightRule rule) {
  switch (rule) {
    case SubWeightRule::Max: return std::max(hw, rw);
    case SubWeightRule::Average: return (hw + rw) / 2.0;
    case SubWeightRule::RefSide: return rw;
  }
  return std::max(hw, rw);
}

double weighted_edit_distance(const Tokens& hyp, const std::vector<double>& hw,
                              const Tokens& ref, const std::vector<double>& rw,
                              SubWeightRule rule) {
  const std::size_t m = hyp.size(), n = ref.size();
  std::vector<double> prev(n + 1), cur(n + 1);
  prev[0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j) prev[j] = prev[j - 1] + rw[j - 1];
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = prev[0] + hw[i - 1];
    for (std::size_t j = 1; j <= n; ++j) {
      double sub =
          prev[j - 1] + (hyp[i - 1] == ref[j - 1]
                             ? 0.0
                             : substitution_cost(hw[i - 1], rw[j - 1], rule));
      double ins = prev[j] + hw[i - 1];     // hyp token absent from ref
      double del = cur[j - 1] + rw[j - 1];  // ref token absent from hyp
      cur[j] = std::min({sub, ins, del});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

struct ShiftState {
  Tokens tokens;
  std::vector<double> weights;
};

// Weights travel with their tokens when a block moves.
ShiftState apply_shift(const ShiftState& s, std::size_t block_begin,
                       std::size_t block_len, std::size_t insert_at) {
  ShiftState out;
  const std::size_t m = s.tokens.size();
  out.tokens.reserve(m);
  out.weights.reserve(m);
  std::vector<std::size_t> rest;
  rest.reserve(m - block_len);
  for (std::size_t i = 0; i < m; ++i)
    if (i < block_begin || i >= block_begin + block_len) rest.push_back(i);
  for (std::size_t p = 0; p <= rest.size(); ++p) {
    if (p == insert_at)
      for (std::size_t k = 0; k < block_len; ++k) {
        out.tokens.push_back(s.tokens[block_begin + k]);
        out.weights.push_back(s.weights[block_begin + k]);
      }
    if (p < rest.size()) {
      out.tokens.push_back(s.tokens[rest[p]]);
      out.weights.push_back(s.weights[rest[p]]);
    }
  }
  return out;
}

// A block is worth trying only if it matches the reference somewhere.
bool block_matches_ref(const Tokens& ref, const Tokens& hyp,
                       std::size_t begin, std::size_t len) {
  if (ref.size() < len) return false;
  for (std::size_t j = 0; j + len <= ref.size(); ++j) {
    bool all = true;
    for (std::size_t k = 0; k < len; ++k)
      if (ref[j + k] != hyp[begin + k]) { all = false; break; }
    if (all) return true;
  }
  return false;
}

}  // namespace

std::optional<Span> locate_term(const TokenizedSentence& sentence,
                                const ConstraintSpec& term,
                                const Lemmatizer& lemmatizer,
                                const EvalConfig& cfg) {
  Searchable s = make_searchable(sentence, lemmatizer, cfg);
  return locate_in(s, make_searchable_term(term, lemmatizer, cfg));
}

ExactMatchResult exact_match(const std::vector<EvalInstance>& instances,
                             const Lemmatizer& lemmatizer,
                             const EvalConfig& cfg) {
  ExactMatchResult result;
  for (const auto& inst : instances) {
    Searchable hyp = make_searchable(inst.hypothesis, lemmatizer, cfg);
    std::vector<bool> covered_here;
    std::vector<Tokens> seen;
    for (const auto& term : inst.expected_terms) {
      if (!cfg.count_duplicate_occurrences) {
        bool repeat =
            std::find(seen.begin(), seen.end(), term.variants.front()) != seen.end();
        seen.push_back(term.variants.front());
        if (repeat) { covered_here.push_back(false); continue; }
      }
      bool hit =
          locate_in(hyp, make_searchable_term(term, lemmatizer, cfg)).has_value();
      covered_here.push_back(hit);
      ++result.terms_total;
      if (hit) ++result.terms_covered;
    }
    result.covered.push_back(std::move(covered_here));
  }
  result.vacuous = result.terms_total == 0;
  return result;
}

WindowOverlapResult window_overlap(const std::vector<EvalInstance>& instances,
                                   int window_size,
                                   const Lemmatizer& lemmatizer,
                                   const EvalConfig& cfg) {
  if (window_size < 1) throw std::invalid_argument("window size must be >= 1");
  const auto w = static_cast<std::size_t>(window_size);
  WindowOverlapResult result;
  double sum = 0.0;
  for (const auto& inst : instances) {
    Searchable hyp = make_searchable(inst.hypothesis, lemmatizer, cfg);
    Searchable ref = make_searchable(inst.reference, lemmatizer, cfg);
    std::vector<double> scores;
    for (const auto& term : inst.expected_terms) {
      SearchableTerm st = make_searchable_term(term, lemmatizer, cfg);
      auto ref_span = locate_in(ref, st);
      if (!ref_span) {
        scores.push_back(-1.0);  // absent from the reference: skipped
        continue;
      }
      ++result.instances_scored;
      auto hyp_span = locate_in(hyp, st);
      if (!hyp_span) {
        scores.push_back(0.0);
        continue;
      }
      Tokens ref_window = window_around(ref, *ref_span, w);
      Tokens hyp_window = window_around(hyp, *hyp_span, w);
      double score;
      if (ref_window.empty() && hyp_window.empty()) {
        score = 1.0;  // the term is the whole sentence on both sides
      } else {
        double denom;
        switch (cfg.window_norm) {
          case WindowNorm::Hyp: denom = static_cast<double>(hyp_window.size()); break;
          case WindowNorm::MaxSide:
            denom = static_cast<double>(std::max(ref_window.size(), hyp_window.size()));
            break;
          case WindowNorm::Ref:
          default: denom = static_cast<double>(ref_window.size()); break;
        }
        denom = std::max(denom, 1.0);
        score = multiset_intersection_size(std::move(hyp_window),
                                           std::move(ref_window)) /
                denom;
      }
      sum += score;
      scores.push_back(score);
    }
    result.per_term.push_back(std::move(scores));
  }
  result.score = result.instances_scored
                     ? sum / static_cast<double>(result.instances_scored)
                     : 1.0;
  return result;
}

TerBreakdown ter(const TokenizedSentence& hypothesis,
                 const TokenizedSentence& reference,
                 const std::vector<double>& hyp_weights,
                 const std::vector<double>& ref_weights,
                 const TerOptions& opts) {
  const Tokens& ref = reference.surface;
  if (hyp_weights.size() != hypothesis.size() ||
      ref_weights.size() != reference.size())
    throw std::invalid_argument("ter: weight vectors must match token counts");

  TerBreakdown out;
  for (double w : ref_weights) out.ref_weight += w;
  out.empty_reference = ref.empty() && !hypothesis.surface.empty();

  ShiftState state{hypothesis.surface, hyp_weights};
  double current = weighted_edit_distance(state.tokens, state.weights, ref,
                                          ref_weights, opts.substitution);

  // Greedy: apply the block move with the largest net gain until none helps.
  const std::size_t max_len =
      std::min<std::size_t>(state.tokens.size(),
                            static_cast<std::size_t>(std::max(opts.max_shift_len, 1)));
  while (current > 0.0) {
    double best_total = current;
    std::size_t best_begin = 0, best_len = 0, best_at = 0;
    const std::size_t m = state.tokens.size();
    for (std::size_t len = 1; len <= std::min(max_len, m); ++len) {
      for (std::size_t begin = 0; begin + len <= m; ++begin) {
        if (!block_matches_ref(ref, state.tokens, begin, len)) continue;
        for (std::size_t at = 0; at + len <= m + 0; ++at) {
          if (at == begin) continue;  // no-op move
          auto distance = static_cast<std::ptrdiff_t>(at) -
                          static_cast<std::ptrdiff_t>(begin);
          if (std::abs(distance) > opts.max_shift_distance) continue;
          ShiftState shifted = apply_shift(state, begin, len, at);
          double d = weighted_edit_distance(shifted.tokens, shifted.weights,
                                            ref, ref_weights, opts.substitution);
          double total = d + opts.shift_cost;
          if (total < best_total - 1e-12) {
            best_total = total;
            best_begin = begin;
            best_len = len;
            best_at = at;
          }
        }
      }
    }
    if (best_len == 0) break;
    state = apply_shift(state, best_begin, best_len, best_at);
    out.shift_cost += opts.shift_cost;
    ++out.shifts;
    current = weighted_edit_distance(state.tokens, state.weights, ref,
                                     ref_weights, opts.substitution);
  }
  out.edit_cost = current;
  return out;
}

std::vector<double> term_weights_for(const TokenizedSentence& sentence,
                                     const std::vector<ConstraintSpec>& expected_terms,
                                     const TermWeights& weights,
                                     const Lemmatizer& lemmatizer,
                                     const EvalConfig& cfg) {
  std::vector<bool> in_term(sentence.size(), false);
  Searchable s = make_searchable(sentence, lemmatizer, cfg);
  for (const auto& term : expected_terms)
    mark_all(s, make_searchable_term(term, lemmatizer, cfg), in_term);
  std::vector<double> out(sentence.size(), weights.base_weight);
  for (std::size_t i = 0; i < in_term.size(); ++i)
    if (in_term[i]) out[i] = weights.term_weight;
  return out;
}

double corpus_bleu(const std::vector<TokenizedSentence>& hypotheses,
                   const std::vector<TokenizedSentence>& references) {
  if (hypotheses.empty() || hypotheses.size() != references.size())
    throw std::invalid_argument("corpus_bleu: need equal, non-empty corpora");
  constexpr int kOrder = 4;
  constexpr double kEps = 1e-9;

  std::uint64_t hyp_len = 0, ref_len = 0;
  std::uint64_t matched[kOrder] = {0, 0, 0, 0};
  std::uint64_t total[kOrder] = {0, 0, 0, 0};

  auto ngram_counts = [](const Tokens& toks, int n) {
    std::unordered_map<std::string, std::uint64_t> counts;
    if (toks.size() < static_cast<std::size_t>(n)) return counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
      std::string key;
      for (int k = 0; k < n; ++k) {
        if (k) key.push_back('\x1f');
        key += toks[i + k];
      }
      ++counts[std::move(key)];
    }
    return counts;
  };

  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    const Tokens& hyp = hypotheses[s].surface;
    const Tokens& ref = references[s].surface;
    hyp_len += hyp.size();
    ref_len += ref.size();
    for (int n = 1; n <= kOrder; ++n) {
      auto hyp_counts = ngram_counts(hyp, n);
      auto ref_counts = ngram_counts(ref, n);
      for (const auto& [ngram, count] : hyp_counts) {
        total[n - 1] += count;
        auto it = ref_counts.find(ngram);
        if (it != ref_counts.end())
          matched[n - 1] += std::min(count, it->second);  // clipped
      }
    }
  }

  if (hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 0; n < kOrder; ++n) {
    double p = std::max(static_cast<double>(matched[n]), kEps) /
               std::max(static_cast<double>(total[n]), kEps);
    log_sum += std::log(p);
  }
  double bp = hyp_len >= ref_len
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(ref_len) /
                                       static_cast<double>(hyp_len));
  return 100.0 * bp * std::exp(log_sum / kOrder);
}

MetricReport evaluate(const std::vector<EvalInstance>& instances,
                      const Lemmatizer& lemmatizer, const EvalConfig& cfg) {
  MetricReport report;

  ExactMatchResult em = exact_match(instances, lemmatizer, cfg);
  report.terms_total = em.terms_total;
  report.terms_covered = em.terms_covered;
  report.em_vacuous = em.vacuous;
  report.exact_match = em.fraction();

  WindowOverlapResult w2 = window_overlap(instances, 2, lemmatizer, cfg);
  WindowOverlapResult w3 = window_overlap(instances, 3, lemmatizer, cfg);
  report.window2 = w2.score;
  report.window3 = w3.score;

  std::vector<TokenizedSentence> hyps, refs;
  hyps.reserve(instances.size());
  refs.reserve(instances.size());
  double total_cost = 0.0, total_ref_weight = 0.0;

  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    hyps.push_back(inst.hypothesis);
    refs.push_back(inst.reference);

    auto ref_w = term_weights_for(inst.reference, inst.expected_terms,
                                  cfg.weights, lemmatizer, cfg);
    auto hyp_w = term_weights_for(inst.hypothesis, inst.expected_terms,
                                  cfg.weights, lemmatizer, cfg);
    TerBreakdown t = ter(inst.hypothesis, inst.reference, hyp_w, ref_w, cfg.ter);
    total_cost += t.total_cost();
    total_ref_weight += t.ref_weight;

    SentenceScores ss;
    ss.ter = t.score();
    if (i < em.covered.size()) {
      ss.terms_total = em.covered[i].size();
      for (bool b : em.covered[i]) ss.terms_covered += b ? 1 : 0;
    }
    auto mean_scored = [](const std::vector<double>& scores) {
      double s = 0.0;
      std::size_t k = 0;
      for (double x : scores)
        if (x >= 0.0) { s += x; ++k; }
      return k ? s / static_cast<double>(k) : -1.0;
    };
    if (i < w2.per_term.size()) ss.window2 = mean_scored(w2.per_term[i]);
    if (i < w3.per_term.size()) ss.window3 = mean_scored(w3.per_term[i]);
    report.per_sentence.push_back(ss);
  }

  report.bleu = corpus_bleu(hyps, refs);
  report.one_minus_term =
      1.0 - total_cost / (total_ref_weight > 0.0 ? total_ref_weight : 1.0);
  return report;
}

std::string report_to_json(const MetricReport& report) {
  nlohmann::json j;
  j["bleu"] = report.bleu;
  j["exact_match"] = report.exact_match;
  j["window2"] = report.window2;
  j["window3"] = report.window3;
  j["one_minus_term"] = report.one_minus_term;
  j["counts"] = {{"terms_total", report.terms_total},
                 {"terms_covered", report.terms_covered}};
  if (report.em_vacuous) j["warnings"] = {"no expected terms; exact match is vacuous"};
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t i = 0; i < report.per_sentence.size(); ++i) {
    const auto& s = report.per_sentence[i];
    nlohmann::json row;
    row["line"] = i;
    row["terms_total"] = s.terms_total;
    row["terms_covered"] = s.terms_covered;
    row["ter"] = s.ter;
    if (s.window2 >= 0.0) row["window2"] = s.window2;
    if (s.window3 >= 0.0) row["window3"] = s.window3;
    per.push_back(std::move(row));
  }
  j["per_sentence"] = std::move(per);
  return j.dump(2);
}

}  // namespace termtk
