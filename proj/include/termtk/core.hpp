#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace termtk {

using Tokens = std::vector<std::string>;

/// One sentence as whitespace tokens, with an optional parallel lemma sequence.
struct TokenizedSentence {
  Tokens surface;
  std::optional<Tokens> lemmas;

  bool has_lemmas() const { return lemmas.has_value(); }
  std::size_t size() const { return surface.size(); }
  bool operator==(const TokenizedSentence&) const = default;
};

struct SentencePair {
  TokenizedSentence source;
  TokenizedSentence target;
  std::uint64_t line_index = 0;
};

/// Half-open token range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool overlaps(const Span& other) const { return begin < other.end && other.begin < end; }
  bool operator==(const Span&) const = default;
};

enum class Level { Surface, Lemma };
enum class ConstraintOrigin { SampledFromTarget, TermBaseMatch };

/// One constraint attached to a sentence: ordered target variants, the first
/// one being the true/preferred translation.
struct ConstraintSpec {
  std::vector<Tokens> variants;
  ConstraintOrigin origin = ConstraintOrigin::SampledFromTarget;
  Level mode = Level::Surface;
  std::optional<Span> source_span;
};

/// Appends `variant` unless an identical sequence is already present.
/// Returns false when the duplicate was dropped.
bool add_variant(ConstraintSpec& c, Tokens variant);

/// Throws std::invalid_argument when a ConstraintSpec invariant is broken.
/// `source_len`, when known, enables the span bounds check.
void validate(const ConstraintSpec& c,
              std::optional<std::size_t> source_len = std::nullopt);

struct AnnotatedSentence {
  TokenizedSentence source;  // possibly rewritten
  std::vector<ConstraintSpec> constraints;
  // 0 = ordinary token, 1 = source-constraint token, 2 = inserted translation
  std::optional<std::vector<int>> factors;
};

/// Splits on Unicode whitespace. Empty fields are dropped, casing and
/// punctuation are preserved. An empty line yields an empty sentence.
TokenizedSentence tokenize(std::string_view line);

/// Joins the surface tokens with single spaces.
std::string detokenize(const TokenizedSentence& sentence);
std::string join_tokens(const Tokens& tokens);

/// NFC normalization via ICU. Pure-ASCII input is returned unchanged.
std::string nfc_normalize(std::string_view text);

/// Codepoint-wise, locale-independent lowercasing.
std::string utf8_lowercase(std::string_view text);

}  // namespace termtk
