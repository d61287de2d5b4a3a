#pragma once

#include <iosfwd>
#include <vector>

#include "termtk/core.hpp"
#include "termtk/rng.hpp"

namespace termtk {

struct SamplerConfig {
  double s = 0.1;   // P(token opens a constraint)
  double e = 0.75;  // P(token closes the open constraint)
  double n = 0.1;   // P(sentence gets no constraints)
  double v = 0.1;   // P(constraint gets a decoy variant)
  double l = 0.9;   // P(decoy has the true constraint's length)
  int tri_min = 1;
  int tri_max = 9;
  int tri_mode = 2;
  std::uint64_t seed = 1;
  bool shuffle_variants = false;
};

/// Discrete triangular pmf over integers [lo, hi]: the continuous triangular
/// density evaluated at each integer, normalized. The density is zero at both
/// endpoints, so lo and hi themselves carry no mass.
std::vector<double> triangular_pmf(int lo, int mode, int hi);

int sample_triangular_length(const SamplerConfig& cfg, SplitMix64& rng);

/// Per-length uniform reservoir samples of n-grams from a target corpus.
class NgramPool {
 public:
  class Builder {
   public:
    Builder(int max_len, std::size_t reservoir_size, std::uint64_t seed);
    void add(const TokenizedSentence& sentence);
    NgramPool finish() &&;

   private:
    int max_len_;
    std::size_t reservoir_size_;
    std::vector<SplitMix64> rngs_;          // one stream per length
    std::vector<std::vector<Tokens>> buckets_;
    std::vector<std::uint64_t> counts_;
  };

  NgramPool() = default;

  int max_len() const { return static_cast<int>(buckets_.size()); }
  bool empty() const;
  const std::vector<Tokens>& bucket(int len) const;
  std::uint64_t total_count(int len) const;  // n-grams seen, not retained

  // TSV, one n-gram per line: len<TAB>tok1 tok2 ...
  void save(std::ostream& out) const;
  static NgramPool load(std::istream& in);
  static NgramPool load_file(const std::string& path);

  /// Uniform draw from the bucket of `len`, falling back to the nearest
  /// non-empty length (lower length wins a tie). Returns nullptr only when the
  /// whole pool is empty. `actual_len` reports the bucket used.
  const Tokens* draw(int len, SplitMix64& rng, int* actual_len = nullptr) const;

 private:
  std::vector<std::vector<Tokens>> buckets_;  // index 0 = length 1
  std::vector<std::uint64_t> counts_;
};

/// The §-style sampling loop over target tokens: one uniform draw decides the
/// sentence skip, then one draw per token. While a constraint is open, a draw
/// below e closes it *without* the current token; otherwise the token is
/// appended. While closed, a draw below s opens a constraint with the token.
/// A constraint still open at sentence end is kept as-is.
std::vector<ConstraintSpec> sample_constraints(const SentencePair& pair,
                                               const SamplerConfig& cfg,
                                               SplitMix64& rng);

struct VariantStats {
  std::uint64_t constraints = 0;
  std::uint64_t decoys = 0;
  std::uint64_t length_fallbacks = 0;
  std::uint64_t duplicate_skips = 0;

  void merge(const VariantStats& other);
};

/// With probability v per constraint, appends one decoy variant drawn from the
/// pool: same length as the true constraint with probability l, otherwise a
/// triangular length. The true constraint stays first unless
/// cfg.shuffle_variants is set. Throws when the pool is empty but a decoy is
/// needed.
void attach_variants(std::vector<ConstraintSpec>& constraints,
                     const SamplerConfig& cfg, const NgramPool& pool,
                     SplitMix64& rng, VariantStats* stats = nullptr);

}  // namespace termtk
