#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <unordered_map>

#include "termtk/core.hpp"

namespace termtk {

/// Streams aligned sentence pairs from two plain-text files (one sentence per
/// line) or from one tab-separated file (source TAB target). Lines are
/// NFC-normalized before tokenization. line_index counts from 0.
class CorpusReader {
 public:
  static CorpusReader from_files(const std::string& source_path,
                                 const std::string& target_path);
  static CorpusReader from_tsv(const std::string& path);
  /// Non-owning; the stream must outlive the reader. Used for stdin.
  static CorpusReader from_tsv_stream(std::istream& in);

  std::optional<SentencePair> next();
  std::uint64_t lines_read() const { return lines_read_; }

 private:
  CorpusReader() = default;
  std::unique_ptr<std::istream> src_owned_, tgt_owned_;
  std::istream* src_ = nullptr;
  std::istream* tgt_ = nullptr;  // null in TSV mode
  std::uint64_t lines_read_ = 0;
  std::string name_;
};

/// Single-column reader (e.g. a target-side corpus), same normalization.
class LineReader {
 public:
  explicit LineReader(const std::string& path);
  explicit LineReader(std::istream& in);  // non-owning
  std::optional<TokenizedSentence> next();
  std::optional<std::string> next_raw();  // normalized, untokenized
  std::uint64_t lines_read() const { return lines_read_; }

 private:
  std::unique_ptr<std::istream> owned_;
  std::istream* in_ = nullptr;
  std::uint64_t lines_read_ = 0;
};

std::vector<TokenizedSentence> read_all_lines(const std::string& path);

// Constraint sidecar, one line per sentence that has constraints:
//   line_index<TAB>variant1|variant2<TAB>...
// with one column per constraint, variants separated by '|' and variant
// tokens by spaces. Tokens therefore must not contain tab or '|'.
void write_constraints_line(std::ostream& out, std::uint64_t line_index,
                            const std::vector<ConstraintSpec>& constraints);
std::vector<ConstraintSpec> parse_constraint_columns(std::string_view line,
                                                     std::uint64_t* line_index);

/// Whole-file sidecar, keyed by line index. Lines without an entry have no
/// constraints.
class ConstraintSidecar {
 public:
  static ConstraintSidecar load(const std::string& path);
  static ConstraintSidecar parse(std::istream& in);
  const std::vector<ConstraintSpec>& for_line(std::uint64_t line_index) const;
  std::size_t lines_with_constraints() const { return by_line_.size(); }

 private:
  std::unordered_map<std::uint64_t, std::vector<ConstraintSpec>> by_line_;
  std::vector<ConstraintSpec> empty_;
};

}  // namespace termtk
