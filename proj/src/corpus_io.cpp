#include "termtk/corpus_io.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace termtk {

namespace {

std::unique_ptr<std::istream> open_or_throw(const std::string& path) {
  auto in = std::make_unique<std::ifstream>(path);
  if (!*in) throw std::runtime_error("cannot open " + path);
  return in;
}

bool get_normalized_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  line = nfc_normalize(line);
  return true;
}

}  // namespace

CorpusReader CorpusReader::from_files(const std::string& source_path,
                                      const std::string& target_path) {
  CorpusReader r;
  r.src_owned_ = open_or_throw(source_path);
  r.tgt_owned_ = open_or_throw(target_path);
  r.src_ = r.src_owned_.get();
  r.tgt_ = r.tgt_owned_.get();
  r.name_ = source_path + " / " + target_path;
  return r;
}

CorpusReader CorpusReader::from_tsv(const std::string& path) {
  CorpusReader r;
  r.src_owned_ = open_or_throw(path);
  r.src_ = r.src_owned_.get();
  r.name_ = path;
  return r;
}

CorpusReader CorpusReader::from_tsv_stream(std::istream& in) {
  CorpusReader r;
  r.src_ = &in;
  r.name_ = "<stream>";
  return r;
}

std::optional<SentencePair> CorpusReader::next() {
  std::string line;
  SentencePair pair;
  pair.line_index = lines_read_;
  if (tgt_ == nullptr) {
    if (!get_normalized_line(*src_, line)) return std::nullopt;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(name_ + ":" + std::to_string(lines_read_ + 1) +
                               ": expected source<TAB>target");
    pair.source = tokenize(std::string_view(line).substr(0, tab));
    pair.target = tokenize(std::string_view(line).substr(tab + 1));
  } else {
    std::string tline;
    bool got_src = get_normalized_line(*src_, line);
    bool got_tgt = get_normalized_line(*tgt_, tline);
    if (!got_src && !got_tgt) return std::nullopt;
    if (got_src != got_tgt)
      throw std::runtime_error(name_ + ": files have different line counts");
    pair.source = tokenize(line);
    pair.target = tokenize(tline);
  }
  ++lines_read_;
  return pair;
}

LineReader::LineReader(const std::string& path)
    : owned_(open_or_throw(path)), in_(owned_.get()) {}

LineReader::LineReader(std::istream& in) : in_(&in) {}

std::optional<std::string> LineReader::next_raw() {
  std::string line;
  if (!get_normalized_line(*in_, line)) return std::nullopt;
  ++lines_read_;
  return line;
}

std::optional<TokenizedSentence> LineReader::next() {
  auto raw = next_raw();
  if (!raw) return std::nullopt;
  return tokenize(*raw);
}

std::vector<TokenizedSentence> read_all_lines(const std::string& path) {
  LineReader reader(path);
  std::vector<TokenizedSentence> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

void write_constraints_line(std::ostream& out, std::uint64_t line_index,
                            const std::vector<ConstraintSpec>& constraints) {
  if (constraints.empty()) return;
  out << line_index;
  for (const auto& c : constraints) {
    out << '\t';
    for (std::size_t v = 0; v < c.variants.size(); ++v) {
      if (v) out << '|';
      out << join_tokens(c.variants[v]);
    }
  }
  out << '\n';
}

std::vector<ConstraintSpec> parse_constraint_columns(std::string_view line,
                                                     std::uint64_t* line_index) {
  auto tab = line.find('\t');
  std::string_view idx = line.substr(0, tab);
  if (idx.empty())
    throw std::runtime_error("constraint sidecar: missing line index");
  std::uint64_t parsed = 0;
  for (char c : idx) {
    if (c < '0' || c > '9')
      throw std::runtime_error("constraint sidecar: bad line index '" +
                               std::string(idx) + "'");
    parsed = parsed * 10 + static_cast<std::uint64_t>(c - '0');
  }
  if (line_index) *line_index = parsed;

  std::vector<ConstraintSpec> out;
  while (tab != std::string_view::npos) {
    line.remove_prefix(tab + 1);
    tab = line.find('\t');
    std::string_view column = line.substr(0, tab);
    ConstraintSpec c;
    std::size_t start = 0;
    while (start <= column.size()) {
      auto bar = column.find('|', start);
      std::string_view variant_text =
          column.substr(start, bar == std::string_view::npos ? bar : bar - start);
      Tokens variant = tokenize(variant_text).surface;
      if (variant.empty())
        throw std::runtime_error("constraint sidecar: empty variant in line " +
                                 std::to_string(parsed));
      add_variant(c, std::move(variant));
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    validate(c);
    out.push_back(std::move(c));
  }
  return out;
}

ConstraintSidecar ConstraintSidecar::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse(in);
}

ConstraintSidecar ConstraintSidecar::parse(std::istream& in) {
  ConstraintSidecar sidecar;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::uint64_t idx = 0;
    auto constraints = parse_constraint_columns(line, &idx);
    if (!constraints.empty()) sidecar.by_line_[idx] = std::move(constraints);
  }
  return sidecar;
}

const std::vector<ConstraintSpec>& ConstraintSidecar::for_line(
    std::uint64_t line_index) const {
  auto it = by_line_.find(line_index);
  return it == by_line_.end() ? empty_ : it->second;
}

}  // namespace termtk
