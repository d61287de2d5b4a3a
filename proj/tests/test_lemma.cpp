#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "termtk/lemma.hpp"

using namespace termtk;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    path = std::string("lemma_test_") + std::to_string(rand()) + ".tsv";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

Lemmatizer dict_lemmatizer(const std::string& tsv, bool lowercase = true) {
  TempFile file(tsv);
  LemmatizerSpec spec;
  spec.kind = LemmatizerKind::Dictionary;
  spec.dictionary_path = file.path;
  spec.lowercase_before_lookup = lowercase;
  return Lemmatizer(spec);  // dictionary is loaded before the file vanishes
}

}  // namespace

TEST_CASE("dictionary lookup maps inflected forms") {
  auto lm = dict_lemmatizer("grippale\tgrippe\n");
  CHECK(lm.word("grippale") == "grippe");
  CHECK(lm.word("Grippale") == "grippe");  // lowercased before lookup
}

TEST_CASE("identity lemmatizer returns the word") {
  Lemmatizer identity;
  CHECK(identity.word("fever") == "fever");
}

TEST_CASE("out-of-vocabulary falls back to the lowercased form") {
  auto lm = dict_lemmatizer("grippale\tgrippe\n");
  CHECK(lm.word("SARS") == "sars");
}

TEST_CASE("keep-case spec skips lowercasing") {
  LemmatizerSpec spec;
  spec.lowercase_before_lookup = false;
  Lemmatizer lm(spec);
  CHECK(lm.word("SARS") == "SARS");
}

TEST_CASE("lemmatize_sentence fills lemmas per word") {
  auto lm = dict_lemmatizer("maladies\tmaladie\nrespiratoires\trespiratoire\n");
  auto s = lm.sentence(TokenizedSentence{{"les", "maladies", "respiratoires"}, std::nullopt});
  REQUIRE(s.has_lemmas());
  CHECK(*s.lemmas == Tokens{"les", "maladie", "respiratoire"});
  CHECK(s.surface == Tokens{"les", "maladies", "respiratoires"});

  auto empty = lm.sentence(TokenizedSentence{});
  REQUIRE(empty.has_lemmas());
  CHECK(empty.lemmas->empty());
}

TEST_CASE("identity lemmas equal the lowercased surface") {
  Lemmatizer identity;
  auto s = identity.sentence(TokenizedSentence{{"And", "Fever", "nez"}, std::nullopt});
  CHECK(*s.lemmas == Tokens{"and", "fever", "nez"});
}

TEST_CASE("lemmatization is context-free") {
  auto lm = dict_lemmatizer("b\tbeta\n");
  auto alone = lm.sentence(TokenizedSentence{{"b"}, std::nullopt});
  auto surrounded = lm.sentence(TokenizedSentence{{"a", "b", "c"}, std::nullopt});
  CHECK((*alone.lemmas)[0] == (*surrounded.lemmas)[1]);
}

TEST_CASE("identity lemmatization is idempotent") {
  Lemmatizer identity;
  auto once = identity.sentence(TokenizedSentence{{"Le", "Chat"}, std::nullopt});
  auto twice = identity.sentence(once);
  CHECK(once == twice);
}

TEST_CASE("first binding wins on duplicate dictionary keys") {
  auto lm = dict_lemmatizer("w\tfirst\nw\tsecond\n");
  CHECK(lm.word("w") == "first");
}

TEST_CASE("missing or malformed dictionaries fail at load") {
  LemmatizerSpec spec;
  spec.kind = LemmatizerKind::Dictionary;
  spec.dictionary_path = "no_such_dictionary.tsv";
  CHECK_THROWS(Lemmatizer(spec));

  CHECK_THROWS(dict_lemmatizer("justoneword\n"));
  CHECK_THROWS(dict_lemmatizer("two words\tlemma\n"));
}

TEST_CASE("lemmatizer arg parsing") {
  CHECK(parse_lemmatizer_arg("identity").kind == LemmatizerKind::Identity);
  auto dict = parse_lemmatizer_arg("dict:/tmp/d.tsv");
  CHECK(dict.kind == LemmatizerKind::Dictionary);
  CHECK(dict.dictionary_path == "/tmp/d.tsv");
  CHECK(dict.lowercase_before_lookup);
  auto keep = parse_lemmatizer_arg("identity,keep-case");
  CHECK_FALSE(keep.lowercase_before_lookup);
  CHECK_THROWS(parse_lemmatizer_arg("udpipe"));
}

TEST_CASE("constraint lemmatization collapses identical lemma variants") {
  auto lm = dict_lemmatizer("maladies\tmaladie\nrespiratoires\trespiratoire\n");
  ConstraintSpec c;
  add_variant(c, {"maladies", "respiratoires"});
  add_variant(c, {"maladie", "respiratoire"});
  auto out = lm.constraints({c});
  REQUIRE(out.size() == 1);
  CHECK(out[0].variants.size() == 1);  // both lemmatize identically
  CHECK(out[0].variants[0] == Tokens{"maladie", "respiratoire"});
  CHECK(out[0].mode == Level::Lemma);
}
