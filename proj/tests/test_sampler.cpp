#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "termtk/sampler.hpp"

using namespace termtk;

namespace {

SentencePair pair_of(const std::string& target, std::uint64_t line = 0) {
  SentencePair p;
  p.source = tokenize("src");
  p.target = tokenize(target);
  p.line_index = line;
  return p;
}

NgramPool pool_from(const std::vector<std::string>& sentences, int max_len,
                    std::size_t reservoir = 1000, std::uint64_t seed = 5) {
  NgramPool::Builder b(max_len, reservoir, seed);
  for (const auto& s : sentences) b.add(tokenize(s));
  return std::move(b).finish();
}

}  // namespace

TEST_CASE("pool enumerates all n-grams of a tiny corpus") {
  auto pool = pool_from({"a b c"}, 2);
  auto unigrams = pool.bucket(1);
  std::set<Tokens> u(unigrams.begin(), unigrams.end());
  CHECK(u == std::set<Tokens>{{"a"}, {"b"}, {"c"}});
  auto bigrams = pool.bucket(2);
  std::set<Tokens> b2(bigrams.begin(), bigrams.end());
  CHECK(b2 == std::set<Tokens>{{"a", "b"}, {"b", "c"}});
  CHECK(pool.total_count(1) == 3);
  CHECK(pool.total_count(2) == 2);
  CHECK(pool.bucket(3).empty());
}

TEST_CASE("pool building is deterministic in the seed") {
  std::vector<std::string> corpus;
  for (int i = 0; i < 200; ++i)
    corpus.push_back("w" + std::to_string(i % 17) + " w" + std::to_string(i % 5) +
                     " w" + std::to_string(i % 3));
  auto a = pool_from(corpus, 3, 20, 99);
  auto b = pool_from(corpus, 3, 20, 99);
  auto c = pool_from(corpus, 3, 20, 100);
  for (int len = 1; len <= 3; ++len) {
    CHECK(a.bucket(len) == b.bucket(len));
  }
  CHECK(a.bucket(1) != c.bucket(1));  // different seed, different sample
}

TEST_CASE("reservoir retains each item with probability k/N") {
  // 500 runs over 5000 unigrams with k=500: each fixed item is kept with
  // p = 0.1; check a handful of items against the binomial 3-sigma band.
  const int runs = 500;
  const std::size_t n_items = 5000, k = 500;
  std::vector<int> kept(5, 0);
  const std::size_t probes[5] = {0, 1234, 2500, 3999, 4999};
  for (int r = 0; r < runs; ++r) {
    NgramPool::Builder b(1, k, 1000 + static_cast<std::uint64_t>(r));
    TokenizedSentence s;
    for (std::size_t i = 0; i < n_items; ++i)
      s.surface.push_back("t" + std::to_string(i));
    b.add(s);
    auto pool = std::move(b).finish();
    std::set<Tokens> sample(pool.bucket(1).begin(), pool.bucket(1).end());
    CHECK(pool.bucket(1).size() == k);
    for (int p = 0; p < 5; ++p)
      if (sample.count({"t" + std::to_string(probes[p])})) ++kept[p];
  }
  const double expected = runs * static_cast<double>(k) / static_cast<double>(n_items);
  const double sigma = std::sqrt(runs * 0.1 * 0.9);
  for (int p = 0; p < 5; ++p)
    CHECK(std::abs(kept[p] - expected) <= 3.0 * sigma);
}

TEST_CASE("pool TSV round-trip") {
  auto pool = pool_from({"a b c d"}, 3);
  std::ostringstream out;
  pool.save(out);
  std::istringstream in(out.str());
  auto loaded = NgramPool::load(in);
  for (int len = 1; len <= 3; ++len) CHECK(loaded.bucket(len) == pool.bucket(len));
}

TEST_CASE("n=1 always skips, s=0 never opens") {
  SamplerConfig cfg;
  cfg.n = 1.0;
  SplitMix64 rng(1);
  for (int i = 0; i < 50; ++i)
    CHECK(sample_constraints(pair_of("a b c d e f"), cfg, rng).empty());

  cfg.n = 0.0;
  cfg.s = 0.0;
  for (int i = 0; i < 50; ++i)
    CHECK(sample_constraints(pair_of("a b c d e f"), cfg, rng).empty());
}

TEST_CASE("every sampled constraint is a contiguous target subsequence") {
  SamplerConfig cfg;
  cfg.seed = 7;
  const std::string sentence = "t0 t1 t2 t3 t4 t5 t6 t7 t8 t9 t10 t11";
  auto target_tokens = tokenize(sentence).surface;
  for (std::uint64_t line = 0; line < 2000; ++line) {
    SplitMix64 rng = line_rng(cfg.seed, line);
    auto cs = sample_constraints(pair_of(sentence, line), cfg, rng);
    std::size_t previous_end = 0;
    for (const auto& c : cs) {
      REQUIRE(c.variants.size() == 1);
      const Tokens& v = c.variants[0];
      REQUIRE_FALSE(v.empty());
      // find it as a contiguous subsequence starting at or after previous_end
      bool found = false;
      for (std::size_t at = previous_end; at + v.size() <= target_tokens.size(); ++at) {
        bool all = true;
        for (std::size_t kk = 0; kk < v.size(); ++kk)
          if (target_tokens[at + kk] != v[kk]) { all = false; break; }
        if (all) {
          found = true;
          previous_end = at + v.size();
          break;
        }
      }
      CHECK(found);  // contiguity, ordering and non-overlap all at once
    }
  }
}

TEST_CASE("sampling is deterministic per (seed, line)") {
  SamplerConfig cfg;
  auto run = [&](std::uint64_t line) {
    SplitMix64 rng = line_rng(cfg.seed, line);
    auto cs = sample_constraints(pair_of("a b c d e f g h", line), cfg, rng);
    std::ostringstream out;
    write_constraints_line(out, line, cs);
    return out.str();
  };
  for (std::uint64_t line : {0ULL, 3ULL, 17ULL, 123456789ULL})
    CHECK(run(line) == run(line));
}

TEST_CASE("zero-constraint fraction matches the closed form") {
  SamplerConfig cfg;  // defaults s=0.1 e=0.75 n=0.1
  const int sentences = 20000;
  const std::string sentence = "a b c d e f g h i j k l m n o p q r s t";  // 20 tokens
  int zero = 0;
  for (int line = 0; line < sentences; ++line) {
    SplitMix64 rng = line_rng(cfg.seed, static_cast<std::uint64_t>(line));
    if (sample_constraints(pair_of(sentence, line), cfg, rng).empty()) ++zero;
  }
  const double p = cfg.n + (1 - cfg.n) * std::pow(1 - cfg.s, 20);
  const double fraction = static_cast<double>(zero) / sentences;
  const double sigma = std::sqrt(p * (1 - p) / sentences);
  CHECK(std::abs(fraction - p) <= 4.0 * sigma);
}

TEST_CASE("mean constraint length matches the state-machine oracle") {
  SamplerConfig cfg;
  cfg.n = 0.0;
  const int sentences = 200000;
  const int length = 20;
  std::string sentence;
  for (int i = 0; i < length; ++i) sentence += (i ? " w" : "w") + std::to_string(i);
  std::uint64_t count = 0, total_len = 0;
  for (int line = 0; line < sentences; ++line) {
    SplitMix64 rng = line_rng(cfg.seed, static_cast<std::uint64_t>(line));
    for (const auto& c : sample_constraints(pair_of(sentence, line), cfg, rng)) {
      ++count;
      total_len += c.variants[0].size();
    }
  }
  const double expected = oracles::expected_constraint_length(length, cfg.s, cfg.e);
  const double mean = static_cast<double>(total_len) / static_cast<double>(count);
  CHECK(std::abs(mean - expected) / expected < 0.01);
  // sanity: the untruncated geometric mean is 1/e
  CHECK(expected == doctest::Approx(1.0 / cfg.e).epsilon(0.02));
}

TEST_CASE("v=0 leaves constraints unchanged") {
  SamplerConfig cfg;
  cfg.v = 0.0;
  auto pool = pool_from({"x y z"}, 3);
  std::vector<ConstraintSpec> cs(1);
  add_variant(cs[0], {"a", "b"});
  auto before = cs;
  SplitMix64 rng(3);
  attach_variants(cs, cfg, pool, rng);
  CHECK(cs[0].variants == before[0].variants);
}

TEST_CASE("v=1 l=1 always adds one equal-length decoy") {
  SamplerConfig cfg;
  cfg.v = 1.0;
  cfg.l = 1.0;
  auto pool = pool_from({"x y z w q r s t u"}, 4);
  SplitMix64 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<ConstraintSpec> cs(1);
    add_variant(cs[0], {"a", "b"});
    VariantStats stats;
    attach_variants(cs, cfg, pool, rng, &stats);
    REQUIRE(cs[0].variants.size() == 2);
    CHECK(cs[0].variants[0] == Tokens{"a", "b"});  // true variant stays first
    CHECK(cs[0].variants[1].size() == 2);
    CHECK(stats.decoys == 1);
  }
}

TEST_CASE("triangular pmf matches the hand-derived values") {
  auto pmf = triangular_pmf(1, 2, 9);
  auto expected = oracles::triangular_1_2_9_pmf();
  REQUIRE(pmf.size() == expected.size());
  for (std::size_t k = 0; k < pmf.size(); ++k)
    CHECK(pmf[k] == doctest::Approx(expected[k]).epsilon(1e-12));
  CHECK(pmf.front() == 0.0);  // endpoints carry no mass
  CHECK(pmf.back() == 0.0);
}

TEST_CASE("triangular sampling matches its pmf") {
  SamplerConfig cfg;
  SplitMix64 rng(123);
  const int draws = 200000;
  std::vector<std::uint64_t> histogram(9, 0);
  for (int i = 0; i < draws; ++i) {
    int len = sample_triangular_length(cfg, rng);
    REQUIRE(len >= 1);
    REQUIRE(len <= 9);
    ++histogram[static_cast<std::size_t>(len - 1)];
  }
  CHECK(histogram[0] == 0);
  CHECK(histogram[8] == 0);
  auto pmf = oracles::triangular_1_2_9_pmf();
  int dof = 0;
  double stat = oracles::chi_square(histogram, pmf, draws, &dof);
  CHECK(stat < oracles::chi_square_crit_p01(dof));
}

TEST_CASE("decoys duplicating an existing variant are redrawn") {
  SamplerConfig cfg;
  cfg.v = 1.0;
  cfg.l = 1.0;
  // pool bucket of length 1 holds {a, b}: a decoy equal to the true variant
  // must be replaced by the other item
  auto pool = pool_from({"a b"}, 1);
  SplitMix64 rng(5);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<ConstraintSpec> cs(1);
    add_variant(cs[0], {"a"});
    attach_variants(cs, cfg, pool, rng);
    REQUIRE(cs[0].variants.size() == 2);
    CHECK(cs[0].variants[1] == Tokens{"b"});
  }
}

TEST_CASE("missing lengths fall back to the nearest available bucket") {
  SamplerConfig cfg;
  cfg.v = 1.0;
  cfg.l = 1.0;
  auto pool = pool_from({"x y"}, 2);  // only lengths 1..2 exist
  SplitMix64 rng(9);
  std::vector<ConstraintSpec> cs(1);
  add_variant(cs[0], {"a", "b", "c", "d", "e"});  // wants length 5
  VariantStats stats;
  attach_variants(cs, cfg, pool, rng, &stats);
  REQUIRE(cs[0].variants.size() == 2);
  CHECK(cs[0].variants[1].size() == 2);  // nearest bucket
  CHECK(stats.length_fallbacks == 1);
}

TEST_CASE("an empty pool fails loudly when a decoy is needed") {
  SamplerConfig cfg;
  cfg.v = 1.0;
  NgramPool empty;
  std::vector<ConstraintSpec> cs(1);
  add_variant(cs[0], {"a"});
  SplitMix64 rng(2);
  CHECK_THROWS(attach_variants(cs, cfg, empty, rng));
}

TEST_CASE("shuffle_variants keeps the variant set, not the order") {
  SamplerConfig cfg;
  cfg.v = 1.0;
  cfg.l = 1.0;
  cfg.shuffle_variants = true;
  auto pool = pool_from({"x y z"}, 1);
  SplitMix64 rng(31);
  int true_first = 0;
  const int iters = 300;
  for (int i = 0; i < iters; ++i) {
    std::vector<ConstraintSpec> cs(1);
    add_variant(cs[0], {"a"});
    attach_variants(cs, cfg, pool, rng);
    REQUIRE(cs[0].variants.size() == 2);
    if (cs[0].variants[0] == Tokens{"a"}) ++true_first;
    CHECK((cs[0].variants[0] == Tokens{"a"} || cs[0].variants[1] == Tokens{"a"}));
  }
  CHECK(true_first > iters / 4);
  CHECK(true_first < 3 * iters / 4);
}
