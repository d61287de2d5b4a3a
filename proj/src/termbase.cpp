#include "termtk/termbase.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace termtk {

namespace {

Tokens lemmatize_tokens(const Tokens& tokens, const Lemmatizer& lemmatizer) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(lemmatizer.word(t));
  return out;
}

bool equal_range(const Tokens& sentence, std::size_t at, const Tokens& term) {
  if (at + term.size() > sentence.size()) return false;
  for (std::size_t k = 0; k < term.size(); ++k)
    if (sentence[at + k] != term[k]) return false;
  return true;
}

}  // namespace

TermBase TermBase::load(const std::string& path, const Lemmatizer& lemmatizer) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open term base: " + path);
  return parse(in, lemmatizer, path);
}

TermBase TermBase::parse(std::istream& in, const Lemmatizer& lemmatizer,
                         const std::string& name) {
  TermBase tb;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    line = nfc_normalize(line);

    TermEntry entry;
    std::string_view rest(line);
    std::size_t column = 0;
    while (true) {
      auto tab = rest.find('\t');
      std::string_view field = rest.substr(0, tab);
      Tokens tokens = tokenize(field).surface;
      if (column == 0) {
        entry.source_term = std::move(tokens);
      } else if (!tokens.empty()) {
        entry.variant_lemmas.push_back(lemmatize_tokens(tokens, lemmatizer));
        entry.variants.push_back(std::move(tokens));
      }
      ++column;
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (entry.source_term.empty())
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": empty source term");
    if (entry.variants.empty())
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": no target column");
    entry.source_lemmas = lemmatize_tokens(entry.source_term, lemmatizer);

    tb.index_[entry.source_lemmas.front()].push_back(tb.entries_.size());
    tb.entries_.push_back(std::move(entry));
  }
  return tb;
}

const std::vector<std::size_t>* TermBase::candidates(
    const std::string& first_lemma) const {
  auto it = index_.find(first_lemma);
  return it == index_.end() ? nullptr : &it->second;
}

std::vector<TermMatch> find_matches(const TokenizedSentence& sentence,
                                    const TermBase& tb,
                                    const Lemmatizer& lemmatizer) {
  const TokenizedSentence* s = &sentence;
  TokenizedSentence lemmatized;
  if (!sentence.has_lemmas()) {
    lemmatized = lemmatizer.sentence(sentence);
    s = &lemmatized;
  }
  const Tokens& surface = s->surface;
  const Tokens& lemmas = *s->lemmas;

  std::vector<TermMatch> matches;
  std::size_t i = 0;
  while (i < surface.size()) {
    const std::vector<std::size_t>* cand = tb.candidates(lemmas[i]);
    if (cand == nullptr) {
      ++i;
      continue;
    }
    std::size_t best_len = 0;
    std::size_t best_entry = 0;
    Level best_level = Level::Lemma;
    for (std::size_t entry_index : *cand) {
      const TermEntry& entry = tb.entries()[entry_index];
      std::size_t len = entry.source_term.size();
      bool surface_hit = equal_range(surface, i, entry.source_term);
      bool lemma_hit = surface_hit || equal_range(lemmas, i, entry.source_lemmas);
      if (!lemma_hit) continue;
      Level level = surface_hit ? Level::Surface : Level::Lemma;
      // longest wins; at equal length surface beats lemma; entry order breaks
      // remaining ties (first entry kept)
      if (len > best_len ||
          (len == best_len && level == Level::Surface && best_level == Level::Lemma)) {
        best_len = len;
        best_entry = entry_index;
        best_level = level;
      }
    }
    if (best_len == 0) {
      ++i;
      continue;
    }
    matches.push_back(TermMatch{best_entry, Span{i, i + best_len}, best_level});
    i += best_len;  // consume the span
  }
  return matches;
}

std::vector<ConstraintSpec> matches_to_constraints(
    const std::vector<TermMatch>& matches, const TermBase& tb, Level mode,
    VariantPolicy policy) {
  std::vector<ConstraintSpec> out;
  out.reserve(matches.size());
  for (const auto& m : matches) {
    if (m.entry_index >= tb.size())
      throw std::logic_error("match entry index out of range");
    const TermEntry& entry = tb.entries()[m.entry_index];
    const auto& source_variants =
        mode == Level::Lemma ? entry.variant_lemmas : entry.variants;
    ConstraintSpec c;
    c.origin = ConstraintOrigin::TermBaseMatch;
    c.mode = mode;
    c.source_span = m.span;
    std::size_t take =
        policy == VariantPolicy::FirstOnly ? 1 : source_variants.size();
    for (std::size_t v = 0; v < take; ++v) add_variant(c, source_variants[v]);
    validate(c);
    out.push_back(std::move(c));
  }
  return out;
}

void write_matches_line(std::ostream& out, std::uint64_t line_index,
                        const std::vector<TermMatch>& matches) {
  if (matches.empty()) return;
  out << line_index;
  for (const auto& m : matches) {
    out << '\t' << m.entry_index << '\t' << m.span.begin << '-' << m.span.end
        << '\t' << (m.level == Level::Surface ? "surface" : "lemma");
  }
  out << '\n';
}

MatchSidecar MatchSidecar::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse(in);
}

MatchSidecar MatchSidecar::parse(std::istream& in) {
  MatchSidecar sidecar;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> cols;
    while (std::getline(fields, field, '\t')) cols.push_back(field);
    if (cols.size() < 4 || (cols.size() - 1) % 3 != 0)
      throw std::runtime_error("match sidecar line " + std::to_string(lineno) +
                               ": expected line<TAB>(entry<TAB>span<TAB>level)+");
    std::uint64_t idx = std::stoull(cols[0]);
    std::vector<TermMatch> matches;
    for (std::size_t g = 1; g + 2 < cols.size() + 1; g += 3) {
      TermMatch m;
      m.entry_index = std::stoull(cols[g]);
      auto dash = cols[g + 1].find('-');
      if (dash == std::string::npos)
        throw std::runtime_error("match sidecar line " + std::to_string(lineno) +
                                 ": bad span '" + cols[g + 1] + "'");
      m.span.begin = std::stoull(cols[g + 1].substr(0, dash));
      m.span.end = std::stoull(cols[g + 1].substr(dash + 1));
      if (cols[g + 2] == "surface") m.level = Level::Surface;
      else if (cols[g + 2] == "lemma") m.level = Level::Lemma;
      else
        throw std::runtime_error("match sidecar line " + std::to_string(lineno) +
                                 ": bad level '" + cols[g + 2] + "'");
      matches.push_back(m);
    }
    sidecar.by_line_[idx] = std::move(matches);
  }
  return sidecar;
}

const std::vector<TermMatch>& MatchSidecar::for_line(std::uint64_t line_index) const {
  auto it = by_line_.find(line_index);
  return it == by_line_.end() ? empty_ : it->second;
}

}  // namespace termtk
