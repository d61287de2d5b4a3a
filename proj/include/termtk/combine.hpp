#pragma once

#include <string>
#include <vector>

#include "termtk/core.hpp"
#include "termtk/lemma.hpp"

namespace termtk {

struct SystemOutput {
  std::string system_id;
  double validation_bleu = 0.0;
  std::vector<TokenizedSentence> translations;
};

struct CombineOptions {
  // Before falling back to the baseline, prefer the best-ranked system
  // covering the most terms on the line.
  bool prefer_partial_coverage = false;
  bool lowercase_lemma_search = true;
};

struct CombineResult {
  std::vector<std::string> chosen_system;       // per line
  std::vector<TokenizedSentence> translations;  // per line
};

/// Rank systems by validation BLEU (ties by system_id) and pick, per line,
/// the best-ranked translation containing every expected term at lemma level.
/// When no system qualifies, the baseline's translation is used even if it
/// also misses the terms. Lines without terms take the top-ranked system.
CombineResult combine(std::vector<SystemOutput> systems,
                      const std::string& baseline_id,
                      const std::vector<std::vector<ConstraintSpec>>& per_line_terms,
                      const Lemmatizer& lemmatizer,
                      const CombineOptions& opts = {});

}  // namespace termtk
