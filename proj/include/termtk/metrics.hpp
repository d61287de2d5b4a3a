#pragma once

#include <optional>
#include <string>
#include <vector>

#include "termtk/core.hpp"
#include "termtk/lemma.hpp"

namespace termtk {

struct EvalInstance {
  TokenizedSentence source;
  TokenizedSentence hypothesis;
  TokenizedSentence reference;
  std::vector<ConstraintSpec> expected_terms;
};

struct TermWeights {
  double base_weight = 1.0;
  double term_weight = 2.0;
};

enum class SubWeightRule { Max, Average, RefSide };
enum class WindowNorm { Ref, Hyp, MaxSide };

struct TerOptions {
  double shift_cost = 1.0;  // one base weight per block shift
  SubWeightRule substitution = SubWeightRule::Max;
  int max_shift_len = 10;
  int max_shift_distance = 50;
};

struct EvalConfig {
  TermWeights weights;
  TerOptions ter;
  WindowNorm window_norm = WindowNorm::Ref;
  bool lowercase_lemma_search = true;
  // count every occurrence of a repeated expected term separately
  bool count_duplicate_occurrences = true;
};

/// Leftmost occurrence of any variant of `term` in `sentence`, surface level
/// (case-sensitive) or lemma level (lowercased when configured). At the same
/// position a surface hit wins, then variant order.
std::optional<Span> locate_term(const TokenizedSentence& sentence,
                                const ConstraintSpec& term,
                                const Lemmatizer& lemmatizer,
                                const EvalConfig& cfg = {});

struct ExactMatchResult {
  std::uint64_t terms_total = 0;
  std::uint64_t terms_covered = 0;
  bool vacuous = false;  // no expected terms anywhere; fraction reported as 1
  std::vector<std::vector<bool>> covered;  // per instance, per term

  double fraction() const {
    return terms_total == 0 ? 1.0
                            : static_cast<double>(terms_covered) /
                                  static_cast<double>(terms_total);
  }
};

/// A term instance is covered when any of its variants occurs contiguously in
/// the hypothesis at surface or lemma level.
ExactMatchResult exact_match(const std::vector<EvalInstance>& instances,
                             const Lemmatizer& lemmatizer,
                             const EvalConfig& cfg = {});

struct WindowOverlapResult {
  double score = 1.0;
  std::uint64_t instances_scored = 0;  // terms located in the reference
  std::vector<std::vector<double>> per_term;  // -1 = skipped (absent from ref)
};

/// Context agreement around each term: up to `window_size` lemmas on each
/// side of the located span in hypothesis and reference are compared as
/// multisets. Terms missing from the hypothesis score 0; terms missing from
/// the reference are skipped. Corpus score is the mean over scored terms.
WindowOverlapResult window_overlap(const std::vector<EvalInstance>& instances,
                                   int window_size,
                                   const Lemmatizer& lemmatizer,
                                   const EvalConfig& cfg = {});

struct TerBreakdown {
  double edit_cost = 0.0;
  double shift_cost = 0.0;
  int shifts = 0;
  double ref_weight = 0.0;
  bool empty_reference = false;

  double total_cost() const { return edit_cost + shift_cost; }
  // empty reference: cost divided by a 1.0 guard, flagged via empty_reference
  double score() const {
    return total_cost() / (ref_weight > 0.0 ? ref_weight : 1.0);
  }
};

/// Weighted translation edit rate. Insertions cost the hypothesis token's
/// weight, deletions the reference token's, substitutions combine the two per
/// TerOptions, and block shifts cost shift_cost each. Shifts are found with
/// the standard greedy search: the best-improving block move is applied until
/// none helps. With unit weights this is classic TER.
TerBreakdown ter(const TokenizedSentence& hypothesis,
                 const TokenizedSentence& reference,
                 const std::vector<double>& hyp_weights,
                 const std::vector<double>& ref_weights,
                 const TerOptions& opts = {});

/// base_weight everywhere except inside located term spans (union; a token in
/// two overlapping hits is weighted once).
std::vector<double> term_weights_for(const TokenizedSentence& sentence,
                                     const std::vector<ConstraintSpec>& expected_terms,
                                     const TermWeights& weights,
                                     const Lemmatizer& lemmatizer,
                                     const EvalConfig& cfg = {});

/// Corpus-level 4-gram BLEU in [0, 100] with brevity penalty. Zero n-gram
/// counts are epsilon-smoothed so short corpora stay finite.
double corpus_bleu(const std::vector<TokenizedSentence>& hypotheses,
                   const std::vector<TokenizedSentence>& references);

struct SentenceScores {
  std::uint64_t terms_total = 0;
  std::uint64_t terms_covered = 0;
  double ter = 0.0;
  double window2 = -1.0;  // -1 = no term scored in this sentence
  double window3 = -1.0;
};

struct MetricReport {
  double bleu = 0.0;
  double exact_match = 1.0;
  double window2 = 1.0;
  double window3 = 1.0;
  double one_minus_term = 1.0;
  std::uint64_t terms_total = 0;
  std::uint64_t terms_covered = 0;
  bool em_vacuous = false;
  std::vector<SentenceScores> per_sentence;
};

MetricReport evaluate(const std::vector<EvalInstance>& instances,
                      const Lemmatizer& lemmatizer,
                      const EvalConfig& cfg = {});

std::string report_to_json(const MetricReport& report);

}  // namespace termtk
