#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "termtk/core.hpp"
#include "termtk/lemma.hpp"

namespace termtk {

struct TermEntry {
  Tokens source_term;
  Tokens source_lemmas;
  std::vector<Tokens> variants;        // file order = priority order
  std::vector<Tokens> variant_lemmas;  // parallel to variants
};

/// Terminology database: source terms with one or more target variants, both
/// sides lemmatized word by word at load time. Indexed by first source lemma.
class TermBase {
 public:
  /// TSV: column 1 = source term, columns 2..k = target variants.
  static TermBase load(const std::string& path, const Lemmatizer& lemmatizer);
  static TermBase parse(std::istream& in, const Lemmatizer& lemmatizer,
                        const std::string& name = "<stream>");

  const std::vector<TermEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Entry indices whose first source lemma equals `first_lemma`, or null.
  const std::vector<std::size_t>* candidates(const std::string& first_lemma) const;

 private:
  std::vector<TermEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
};

struct TermMatch {
  std::size_t entry_index = 0;
  Span span;
  Level level = Level::Surface;
  bool operator==(const TermMatch&) const = default;
};

/// Greedy left-to-right longest-match scan. At each position the longest
/// matching entry wins; at equal length a surface match beats a lemma match.
/// Matched spans are consumed, so results never overlap. Surface comparison
/// is case-sensitive; lemma comparison inherits the lemmatizer's casing.
/// Lemmas are computed on the fly when the sentence has none.
std::vector<TermMatch> find_matches(const TokenizedSentence& sentence,
                                    const TermBase& tb,
                                    const Lemmatizer& lemmatizer);

enum class VariantPolicy { FirstOnly, All };

/// One ConstraintSpec per match; Lemma mode emits variant lemmas, Surface mode
/// the surface variants. FirstOnly keeps only the head variant. Variants that
/// lemmatize identically are deduplicated, first kept.
std::vector<ConstraintSpec> matches_to_constraints(
    const std::vector<TermMatch>& matches, const TermBase& tb, Level mode,
    VariantPolicy policy);

// Match sidecar: one line per sentence with at least one match, with the
// three columns entry<TAB>begin-end<TAB>surface|lemma repeated per match:
//   line_index<TAB>entry<TAB>begin-end<TAB>level[<TAB>entry<TAB>...]
void write_matches_line(std::ostream& out, std::uint64_t line_index,
                        const std::vector<TermMatch>& matches);

class MatchSidecar {
 public:
  static MatchSidecar load(const std::string& path);
  static MatchSidecar parse(std::istream& in);
  const std::vector<TermMatch>& for_line(std::uint64_t line_index) const;

 private:
  std::unordered_map<std::uint64_t, std::vector<TermMatch>> by_line_;
  std::vector<TermMatch> empty_;
};

}  // namespace termtk
