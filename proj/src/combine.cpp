#include "termtk/combine.hpp"

#include <algorithm>
#include <stdexcept>

namespace termtk {

namespace {

// Lemma-level containment of any variant, mirroring the exact-match lemma
// search (surface hits are not required here).
bool contains_at_lemma_level(const Tokens& sentence_lemmas,
                             const ConstraintSpec& term,
                             const Lemmatizer& lemmatizer, bool lowercase) {
  for (const auto& variant : term.variants) {
    Tokens needle;
    needle.reserve(variant.size());
    for (const auto& t : variant) {
      std::string lemma = lemmatizer.word(t);
      needle.push_back(lowercase ? utf8_lowercase(lemma) : std::move(lemma));
    }
    if (needle.empty() || needle.size() > sentence_lemmas.size()) continue;
    for (std::size_t pos = 0; pos + needle.size() <= sentence_lemmas.size(); ++pos) {
      bool all = true;
      for (std::size_t k = 0; k < needle.size(); ++k)
        if (sentence_lemmas[pos + k] != needle[k]) { all = false; break; }
      if (all) return true;
    }
  }
  return false;
}

}  // namespace

CombineResult combine(std::vector<SystemOutput> systems,
                      const std::string& baseline_id,
                      const std::vector<std::vector<ConstraintSpec>>& per_line_terms,
                      const Lemmatizer& lemmatizer, const CombineOptions& opts) {
  if (systems.empty()) throw std::invalid_argument("combine: no systems");

  std::sort(systems.begin(), systems.end(), [](const auto& a, const auto& b) {
    if (a.validation_bleu != b.validation_bleu)
      return a.validation_bleu > b.validation_bleu;
    return a.system_id < b.system_id;
  });

  const SystemOutput* baseline = nullptr;
  for (const auto& s : systems)
    if (s.system_id == baseline_id) { baseline = &s; break; }
  if (baseline == nullptr)
    throw std::invalid_argument("combine: baseline '" + baseline_id +
                                "' is not among the systems");

  const std::size_t lines = systems.front().translations.size();
  for (const auto& s : systems)
    if (s.translations.size() != lines)
      throw std::invalid_argument("combine: system '" + s.system_id +
                                  "' has a different line count");
  if (per_line_terms.size() > lines)
    throw std::invalid_argument("combine: more term lines than translations");

  // Lemmatize every translation once.
  std::vector<std::vector<Tokens>> lemmas(systems.size());
  for (std::size_t si = 0; si < systems.size(); ++si) {
    lemmas[si].reserve(lines);
    for (const auto& t : systems[si].translations) {
      TokenizedSentence with = t.has_lemmas() ? t : lemmatizer.sentence(t);
      Tokens cmp = *with.lemmas;
      if (opts.lowercase_lemma_search)
        for (auto& tok : cmp) tok = utf8_lowercase(tok);
      lemmas[si].push_back(std::move(cmp));
    }
  }

  static const std::vector<ConstraintSpec> no_terms;
  CombineResult result;
  result.chosen_system.reserve(lines);
  result.translations.reserve(lines);
  for (std::size_t line = 0; line < lines; ++line) {
    const auto& terms =
        line < per_line_terms.size() ? per_line_terms[line] : no_terms;
    const SystemOutput* chosen = nullptr;
    std::size_t best_covered = 0;
    for (std::size_t si = 0; si < systems.size(); ++si) {
      std::size_t covered = 0;
      for (const auto& term : terms)
        if (contains_at_lemma_level(lemmas[si][line], term, lemmatizer,
                                    opts.lowercase_lemma_search))
          ++covered;
      if (covered == terms.size()) { chosen = &systems[si]; break; }
      if (opts.prefer_partial_coverage && covered > best_covered) {
        best_covered = covered;
        chosen = &systems[si];
      }
    }
    if (chosen == nullptr) chosen = baseline;
    result.chosen_system.push_back(chosen->system_id);
    result.translations.push_back(chosen->translations[line]);
  }
  return result;
}

}  // namespace termtk
