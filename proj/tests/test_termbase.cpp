#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "termtk/rng.hpp"
#include "termtk/termbase.hpp"

using namespace termtk;

namespace {

TermBase parse_tb(const std::string& tsv, const Lemmatizer& lm) {
  std::istringstream in(tsv);
  return TermBase::parse(in, lm);
}

Lemmatizer identity_keep_case() {
  LemmatizerSpec spec;
  spec.lowercase_before_lookup = false;
  return Lemmatizer(spec);
}

}  // namespace

TEST_CASE("term base parsing") {
  Lemmatizer lm;
  auto tb = parse_tb("runny nose\tnez qui coule\n", lm);
  REQUIRE(tb.size() == 1);
  CHECK(tb.entries()[0].source_term == Tokens{"runny", "nose"});
  REQUIRE(tb.entries()[0].variants.size() == 1);
  CHECK(tb.entries()[0].variants[0].size() == 3);

  auto multi = parse_tb(
      "respiratory diseases\tmaladies respiratoires\t"
      "maladies communes des voies respiratoires\tmaladie respiratoire\n",
      lm);
  REQUIRE(multi.size() == 1);
  CHECK(multi.entries()[0].variants.size() == 3);
  CHECK(multi.entries()[0].variants[0] == Tokens{"maladies", "respiratoires"});
  CHECK(multi.entries()[0].variants[2] == Tokens{"maladie", "respiratoire"});

  auto empty = parse_tb("", lm);
  CHECK(empty.size() == 0);

  CHECK_THROWS_WITH_AS(parse_tb("loneterm\n", lm),
                       doctest::Contains(":1"), std::runtime_error);
}

TEST_CASE("the paper example yields two surface matches") {
  Lemmatizer lm;
  auto tb = parse_tb("runny nose\tnez qui coule\nfever\tfi\xc3\xa8vre\n", lm);
  auto s = lm.sentence(tokenize("And are you having a runny nose or fever ?"));
  auto matches = find_matches(s, tb, lm);
  REQUIRE(matches.size() == 2);
  CHECK(matches[0].span == Span{5, 7});
  CHECK(matches[0].entry_index == 0);
  CHECK(matches[0].level == Level::Surface);
  CHECK(matches[1].span == Span{8, 9});
  CHECK(matches[1].entry_index == 1);
}

TEST_CASE("sentences without term content match nothing") {
  Lemmatizer lm;
  auto tb = parse_tb("fever\tfi\xc3\xa8vre\n", lm);
  CHECK(find_matches(lm.sentence(tokenize("nothing here")), tb, lm).empty());
  CHECK(find_matches(TokenizedSentence{}, tb, lm).empty());
}

TEST_CASE("lemma-level match through a dictionary lemmatizer") {
  LemmatizerSpec spec;
  spec.kind = LemmatizerKind::Dictionary;
  std::string path = "tb_dict_test.tsv";
  {
    std::ofstream out(path);
    out << "maladies\tmaladie\ngrippales\tgrippal\ngrippale\tgrippal\n";
  }
  spec.dictionary_path = path;
  Lemmatizer lm(spec);

  // entry whose source lemmatizes to [maladie, grippal]
  auto tb = parse_tb("maladie grippale\tinfluenza illness\n", lm);
  REQUIRE(tb.entries()[0].source_lemmas == Tokens{"maladie", "grippal"});

  auto s = lm.sentence(tokenize("les maladies grippales reviennent"));
  auto matches = find_matches(s, tb, lm);
  REQUIRE(matches.size() == 1);
  CHECK(matches[0].span == Span{1, 3});
  CHECK(matches[0].level == Level::Lemma);
  std::remove(path.c_str());
}

TEST_CASE("surface hit preferred over lemma hit preserves casing") {
  // SARS-CoV scenario: the entry keeps original casing; a sentence with the
  // exact casing must match at surface level even though lemmas also match.
  Lemmatizer lm;
  auto tb = parse_tb("SARS-CoV\tSARS-CoV\n", lm);
  auto exact = lm.sentence(tokenize("the SARS-CoV strain"));
  auto m1 = find_matches(exact, tb, lm);
  REQUIRE(m1.size() == 1);
  CHECK(m1[0].level == Level::Surface);

  auto recased = lm.sentence(tokenize("the Sars-CoV strain"));
  auto m2 = find_matches(recased, tb, lm);
  REQUIRE(m2.size() == 1);
  CHECK(m2[0].level == Level::Lemma);  // only the lowercased lemma matches

  // with lowercasing disabled, surface and lemma coincide and Sars-CoV misses
  auto keep = identity_keep_case();
  auto tb2 = parse_tb("SARS-CoV\tSARS-CoV\n", keep);
  CHECK(find_matches(keep.sentence(tokenize("the Sars-CoV strain")), tb2, keep).empty());
  auto m3 = find_matches(keep.sentence(tokenize("the SARS-CoV strain")), tb2, keep);
  REQUIRE(m3.size() == 1);
  CHECK(m3[0].level == Level::Surface);
}

TEST_CASE("longest match wins at a shared start") {
  Lemmatizer lm;
  auto tb = parse_tb("runny\tX\nrunny nose\tY\n", lm);
  auto s = lm.sentence(tokenize("a runny nose"));
  auto matches = find_matches(s, tb, lm);
  REQUIRE(matches.size() == 1);
  CHECK(matches[0].entry_index == 1);
  CHECK(matches[0].span == Span{1, 3});
}

TEST_CASE("matches never overlap and consume left to right") {
  Lemmatizer lm;
  auto tb = parse_tb("a b\tX\nb c\tY\n", lm);
  auto s = lm.sentence(tokenize("a b c"));
  auto matches = find_matches(s, tb, lm);
  REQUIRE(matches.size() == 1);  // "a b" consumed, "b c" can no longer start
  CHECK(matches[0].entry_index == 0);
}

TEST_CASE("greedy matcher agrees with the brute-force oracle") {
  Lemmatizer lm;
  SplitMix64 rng(2024);
  const Tokens vocab = {"a", "b", "c", "d", "e", "f"};
  for (int iter = 0; iter < 1000; ++iter) {
    // random term base with up to 6 entries of 1-3 tokens
    std::string tsv;
    std::size_t entries = 1 + rng.bounded(6);
    for (std::size_t k = 0; k < entries; ++k) {
      std::size_t len = 1 + rng.bounded(3);
      for (std::size_t t = 0; t < len; ++t) {
        if (t) tsv += ' ';
        tsv += vocab[rng.bounded(vocab.size())];
      }
      tsv += "\ttgt" + std::to_string(k) + "\n";
    }
    auto tb = parse_tb(tsv, lm);

    Tokens sentence_tokens;
    std::size_t sentence_len = rng.bounded(9);
    for (std::size_t t = 0; t < sentence_len; ++t)
      sentence_tokens.push_back(vocab[rng.bounded(vocab.size())]);
    auto s = lm.sentence(TokenizedSentence{sentence_tokens, std::nullopt});

    auto fast = find_matches(s, tb, lm);
    auto slow = oracles::brute_force_matches(s, tb, lm);
    CHECK(fast == slow);

    for (std::size_t i = 0; i + 1 < fast.size(); ++i)
      CHECK(fast[i].span.end <= fast[i + 1].span.begin);
  }
}

TEST_CASE("matches_to_constraints emits the requested level and policy") {
  Lemmatizer lm;
  auto tb = parse_tb(
      "respiratory diseases\tmaladies respiratoires\t"
      "maladies communes des voies respiratoires\tmaladie respiratoire\n"
      "fever\tfi\xc3\xa8vre\n",
      lm);
  std::vector<TermMatch> matches = {{0, Span{2, 4}, Level::Surface},
                                    {1, Span{6, 7}, Level::Surface}};

  auto first = matches_to_constraints(matches, tb, Level::Surface,
                                      VariantPolicy::FirstOnly);
  REQUIRE(first.size() == 2);
  CHECK(first[0].variants == std::vector<Tokens>{{"maladies", "respiratoires"}});
  CHECK(first[1].variants == std::vector<Tokens>{{"fi\xc3\xa8vre"}});
  CHECK(first[0].origin == ConstraintOrigin::TermBaseMatch);
  REQUIRE(first[0].source_span.has_value());
  CHECK(*first[0].source_span == Span{2, 4});

  auto all = matches_to_constraints(matches, tb, Level::Surface, VariantPolicy::All);
  REQUIRE(all[0].variants.size() == 3);  // file order preserved
  CHECK(all[0].variants[1] ==
        Tokens{"maladies", "communes", "des", "voies", "respiratoires"});

  // identity lemmatizer keeps the three lemma variants distinct
  auto lemma = matches_to_constraints(matches, tb, Level::Lemma, VariantPolicy::All);
  CHECK(lemma[0].variants.size() == 3);
  CHECK(lemma[0].mode == Level::Lemma);
  CHECK(lemma[0].variants[0] == Tokens{"maladies", "respiratoires"});
}

TEST_CASE("lemma variants that collapse are deduplicated") {
  LemmatizerSpec spec;
  spec.kind = LemmatizerKind::Dictionary;
  std::string path = "tb_dedup_test.tsv";
  {
    std::ofstream out(path);
    out << "maladies\tmaladie\nrespiratoires\trespiratoire\n";
  }
  spec.dictionary_path = path;
  Lemmatizer lm(spec);
  auto tb = parse_tb(
      "respiratory diseases\tmaladies respiratoires\tmaladie respiratoire\n", lm);
  std::vector<TermMatch> matches = {{0, Span{0, 2}, Level::Surface}};
  auto lemma = matches_to_constraints(matches, tb, Level::Lemma, VariantPolicy::All);
  CHECK(lemma[0].variants.size() == 1);  // both collapse to maladie respiratoire
  std::remove(path.c_str());
}

TEST_CASE("match sidecar round-trip") {
  std::ostringstream out;
  std::vector<TermMatch> matches = {{0, Span{5, 7}, Level::Surface},
                                    {3, Span{8, 9}, Level::Lemma}};
  write_matches_line(out, 17, matches);
  CHECK(out.str() == "17\t0\t5-7\tsurface\t3\t8-9\tlemma\n");

  std::istringstream in(out.str());
  auto sidecar = MatchSidecar::parse(in);
  CHECK(sidecar.for_line(17) == matches);
  CHECK(sidecar.for_line(0).empty());
}
