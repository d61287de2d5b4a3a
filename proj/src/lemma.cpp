#include "termtk/lemma.hpp"

#include <fstream>
#include <stdexcept>

namespace termtk {

LemmatizerSpec parse_lemmatizer_arg(std::string_view arg) {
  LemmatizerSpec spec;
  bool keep_case = false;
  if (arg.size() >= 10 && arg.substr(arg.size() - 10) == ",keep-case") {
    keep_case = true;
    arg.remove_suffix(10);
  }
  if (arg == "identity" || arg.empty()) {
    spec.kind = LemmatizerKind::Identity;
  } else if (arg.rfind("dict:", 0) == 0) {
    spec.kind = LemmatizerKind::Dictionary;
    spec.dictionary_path = std::string(arg.substr(5));
    if (spec.dictionary_path.empty())
      throw std::invalid_argument("dict: lemmatizer needs a path");
  } else {
    throw std::invalid_argument("unknown lemmatizer '" + std::string(arg) +
                                "' (expected identity or dict:<path>)");
  }
  spec.lowercase_before_lookup = !keep_case;
  return spec;
}

Lemmatizer::Lemmatizer(const LemmatizerSpec& spec) : spec_(spec) {
  if (spec_.kind != LemmatizerKind::Dictionary) return;
  if (spec_.dictionary_path.empty())
    throw std::invalid_argument("dictionary lemmatizer without a path");
  std::ifstream in(spec_.dictionary_path);
  if (!in)
    throw std::runtime_error("cannot open lemma dictionary: " + spec_.dictionary_path);
  // TSV surface<TAB>lemma, first binding wins on duplicate keys.
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      throw std::runtime_error(spec_.dictionary_path + ":" + std::to_string(lineno) +
                               ": expected surface<TAB>lemma");
    std::string key = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    if (key.find(' ') != std::string::npos || value.find(' ') != std::string::npos)
      throw std::runtime_error(spec_.dictionary_path + ":" + std::to_string(lineno) +
                               ": keys and lemmas must be single tokens");
    if (spec_.lowercase_before_lookup) key = utf8_lowercase(key);
    dict_.emplace(std::move(key), std::move(value));  // emplace keeps the first binding
  }
}

std::string Lemmatizer::word(std::string_view w) const {
  std::string form = spec_.lowercase_before_lookup ? utf8_lowercase(w) : std::string(w);
  if (spec_.kind == LemmatizerKind::Dictionary) {
    auto it = dict_.find(form);
    if (it != dict_.end()) return it->second;
  }
  return form;  // identity, and the out-of-vocabulary fallback
}

TokenizedSentence Lemmatizer::sentence(TokenizedSentence s) const {
  Tokens lemmas;
  lemmas.reserve(s.surface.size());
  for (const auto& tok : s.surface) lemmas.push_back(word(tok));
  s.lemmas = std::move(lemmas);
  return s;
}

std::vector<ConstraintSpec> Lemmatizer::constraints(std::vector<ConstraintSpec> cs) const {
  for (auto& c : cs) {
    std::vector<Tokens> lemmatized;
    for (const auto& variant : c.variants) {
      Tokens lv;
      lv.reserve(variant.size());
      for (const auto& tok : variant) lv.push_back(word(tok));
      bool duplicate = false;
      for (const auto& seen : lemmatized)
        if (seen == lv) { duplicate = true; break; }
      if (!duplicate) lemmatized.push_back(std::move(lv));
    }
    c.variants = std::move(lemmatized);
    c.mode = Level::Lemma;
  }
  return cs;
}

}  // namespace termtk
