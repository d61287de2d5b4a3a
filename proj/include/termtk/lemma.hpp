#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "termtk/core.hpp"

namespace termtk {

enum class LemmatizerKind { Identity, Dictionary };

struct LemmatizerSpec {
  LemmatizerKind kind = LemmatizerKind::Identity;
  std::string dictionary_path;  // required iff kind == Dictionary
  bool lowercase_before_lookup = true;
};

/// Parses the CLI form: "identity" or "dict:<path>", with an optional
/// ",keep-case" suffix to disable lowercasing.
LemmatizerSpec parse_lemmatizer_arg(std::string_view arg);

/// Word-by-word, context-free lemmatization. The same word always maps to the
/// same lemma, which keeps term-base lemmas and running-text lemmas aligned.
class Lemmatizer {
 public:
  Lemmatizer() = default;  // identity with lowercasing
  explicit Lemmatizer(const LemmatizerSpec& spec);

  std::string word(std::string_view w) const;

  /// Fills in lemmas; surface tokens are left untouched.
  TokenizedSentence sentence(TokenizedSentence s) const;

  /// Lemmatizes every variant of every constraint word by word. Variants that
  /// collapse to an identical lemma sequence are deduplicated, first kept.
  std::vector<ConstraintSpec> constraints(std::vector<ConstraintSpec> cs) const;

  const LemmatizerSpec& spec() const { return spec_; }
  std::size_t dictionary_size() const { return dict_.size(); }

 private:
  LemmatizerSpec spec_;
  std::unordered_map<std::string, std::string> dict_;
};

}  // namespace termtk
