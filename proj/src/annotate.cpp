#include "termtk/annotate.hpp"

#include <algorithm>
#include <stdexcept>

namespace termtk {

namespace {

void check_collisions(const Tokens& tokens, const AnnotationConfig& cfg,
                      std::uint64_t line_index, const char* where) {
  for (const auto& t : tokens) {
    if (t == cfg.sep_token || t == cfg.constraint_delim || t == cfg.variant_delim)
      throw std::runtime_error("line " + std::to_string(line_index) +
                               ": special token '" + t + "' occurs in " + where);
  }
}

void check_config(const AnnotationConfig& cfg) {
  if (cfg.sep_token == cfg.constraint_delim ||
      cfg.sep_token == cfg.variant_delim ||
      cfg.constraint_delim == cfg.variant_delim)
    throw std::invalid_argument("special tokens must be distinct");
  for (const auto* t : {&cfg.sep_token, &cfg.constraint_delim, &cfg.variant_delim}) {
    if (t->empty() || t->find_first_of(" \t") != std::string::npos)
      throw std::invalid_argument("special tokens must be non-empty and whitespace-free");
  }
}

const Tokens& first_variant(const TermEntry& entry, Level mode) {
  return mode == Level::Lemma ? entry.variant_lemmas.front()
                              : entry.variants.front();
}

void check_sorted_spans(const std::vector<TermMatch>& matches) {
  for (std::size_t i = 0; i + 1 < matches.size(); ++i)
    if (matches[i + 1].span.begin < matches[i].span.end)
      throw std::invalid_argument("matches must be sorted and non-overlapping");
}

}  // namespace

AnnotatedSentence annotate_suffix(const TokenizedSentence& sentence,
                                  const std::vector<ConstraintSpec>& constraints,
                                  const AnnotationConfig& cfg,
                                  std::uint64_t line_index) {
  check_config(cfg);
  check_collisions(sentence.surface, cfg, line_index, "the sentence");
  for (const auto& c : constraints)
    for (const auto& v : c.variants)
      check_collisions(v, cfg, line_index, "a constraint");

  AnnotatedSentence out;
  out.source.surface = sentence.surface;
  out.constraints = constraints;
  if (constraints.empty()) return out;

  Tokens& toks = out.source.surface;
  toks.push_back(cfg.sep_token);
  for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
    if (ci) toks.push_back(cfg.constraint_delim);
    const auto& variants = constraints[ci].variants;
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      if (vi) toks.push_back(cfg.variant_delim);
      toks.insert(toks.end(), variants[vi].begin(), variants[vi].end());
    }
  }
  return out;
}

AnnotatedSentence annotate_factored(const TokenizedSentence& sentence,
                                    const std::vector<TermMatch>& matches,
                                    const TermBase& tb,
                                    const AnnotationConfig& cfg,
                                    std::uint64_t line_index) {
  check_sorted_spans(matches);
  AnnotatedSentence out;
  std::vector<int> factors;
  Tokens& toks = out.source.surface;
  std::size_t cursor = 0;
  for (const auto& m : matches) {
    if (m.span.end > sentence.size() || m.span.empty())
      throw std::runtime_error("line " + std::to_string(line_index) +
                               ": match span outside the sentence");
    for (; cursor < m.span.begin; ++cursor) {
      toks.push_back(sentence.surface[cursor]);
      factors.push_back(0);
    }
    for (; cursor < m.span.end; ++cursor) {
      toks.push_back(sentence.surface[cursor]);
      factors.push_back(1);
    }
    for (const auto& t : first_variant(tb.entries()[m.entry_index], cfg.mode)) {
      toks.push_back(t);
      factors.push_back(2);
    }
  }
  for (; cursor < sentence.size(); ++cursor) {
    toks.push_back(sentence.surface[cursor]);
    factors.push_back(0);
  }
  out.factors = std::move(factors);
  out.constraints = matches_to_constraints(matches, tb, cfg.mode, VariantPolicy::FirstOnly);
  return out;
}

AnnotatedSentence annotate_replace(const TokenizedSentence& sentence,
                                   const std::vector<TermMatch>& matches,
                                   const TermBase& tb,
                                   const AnnotationConfig& cfg,
                                   std::uint64_t line_index) {
  check_sorted_spans(matches);
  AnnotatedSentence out;
  Tokens& toks = out.source.surface;
  std::size_t cursor = 0;
  for (const auto& m : matches) {
    if (m.span.end > sentence.size() || m.span.empty())
      throw std::runtime_error("line " + std::to_string(line_index) +
                               ": match span outside the sentence");
    for (; cursor < m.span.begin; ++cursor) toks.push_back(sentence.surface[cursor]);
    const Tokens& repl = first_variant(tb.entries()[m.entry_index], cfg.mode);
    toks.insert(toks.end(), repl.begin(), repl.end());
    cursor = m.span.end;
  }
  for (; cursor < sentence.size(); ++cursor) toks.push_back(sentence.surface[cursor]);
  out.constraints = matches_to_constraints(matches, tb, cfg.mode, VariantPolicy::FirstOnly);
  return out;
}

std::string to_factored_line(const AnnotatedSentence& annotated) {
  if (!annotated.factors ||
      annotated.factors->size() != annotated.source.surface.size())
    throw std::invalid_argument("factored line needs factors parallel to tokens");
  std::string out;
  for (std::size_t i = 0; i < annotated.source.surface.size(); ++i) {
    if (i) out.push_back(' ');
    out += annotated.source.surface[i];
    out.push_back('|');
    out += std::to_string((*annotated.factors)[i]);
  }
  return out;
}

StripResult strip_annotation(const Tokens& tokens, const AnnotationConfig& cfg) {
  check_config(cfg);
  StripResult result;
  auto sep = std::find(tokens.begin(), tokens.end(), cfg.sep_token);
  result.sentence.assign(tokens.begin(), sep);
  if (sep == tokens.end()) return result;

  std::vector<Tokens> variants;
  Tokens current;
  std::size_t pos = static_cast<std::size_t>(sep - tokens.begin());
  auto flush_variant = [&](std::size_t at) {
    if (current.empty())
      throw std::runtime_error("dangling delimiter at token " + std::to_string(at));
    variants.push_back(std::move(current));
    current.clear();
  };
  auto flush_constraint = [&](std::size_t at) {
    flush_variant(at);
    result.constraints.push_back(std::move(variants));
    variants.clear();
  };
  for (auto it = sep + 1; it != tokens.end(); ++it) {
    ++pos;
    if (*it == cfg.variant_delim) flush_variant(pos);
    else if (*it == cfg.constraint_delim) flush_constraint(pos);
    else if (*it == cfg.sep_token)
      throw std::runtime_error("second separator at token " + std::to_string(pos));
    else current.push_back(*it);
  }
  flush_constraint(tokens.size());
  return result;
}

}  // namespace termtk
