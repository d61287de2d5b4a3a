#pragma once

#include <string>
#include <vector>

#include "termtk/core.hpp"
#include "termtk/termbase.hpp"

namespace termtk {

enum class Scheme { Replace, Factored, Suffix };

struct AnnotationConfig {
  Scheme scheme = Scheme::Suffix;
  std::string sep_token = "<sep>";
  std::string constraint_delim = "<c>";
  std::string variant_delim = "<v>";
  Level mode = Level::Surface;
};

/// source ++ <sep> ++ variants(c1) ++ <c> ++ variants(c2) ++ ..., variants
/// within a constraint joined by <v>. No constraints leaves the sentence
/// untouched (no trailing separator). Throws when a special token collides
/// with a sentence or constraint token, naming `line_index`.
AnnotatedSentence annotate_suffix(const TokenizedSentence& sentence,
                                  const std::vector<ConstraintSpec>& constraints,
                                  const AnnotationConfig& cfg,
                                  std::uint64_t line_index = 0);

/// Inserts each match's first target variant right after the matched span and
/// emits factors: 0 ordinary, 1 source-constraint token, 2 inserted
/// translation token.
AnnotatedSentence annotate_factored(const TokenizedSentence& sentence,
                                    const std::vector<TermMatch>& matches,
                                    const TermBase& tb,
                                    const AnnotationConfig& cfg,
                                    std::uint64_t line_index = 0);

/// Substitutes each matched span with the entry's first target variant.
AnnotatedSentence annotate_replace(const TokenizedSentence& sentence,
                                   const std::vector<TermMatch>& matches,
                                   const TermBase& tb,
                                   const AnnotationConfig& cfg,
                                   std::uint64_t line_index = 0);

/// `token|factor` per token, space-separated.
std::string to_factored_line(const AnnotatedSentence& annotated);

struct StripResult {
  Tokens sentence;
  std::vector<std::vector<Tokens>> constraints;  // per constraint: its variants
};

/// Inverse of annotate_suffix: splits at the first separator token and
/// re-parses the constraint/variant structure. Dangling delimiters raise a
/// parse error naming the token position.
StripResult strip_annotation(const Tokens& tokens, const AnnotationConfig& cfg);

}  // namespace termtk
