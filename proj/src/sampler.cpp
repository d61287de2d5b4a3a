#include "termtk/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace termtk {

std::vector<double> triangular_pmf(int lo, int mode, int hi) {
  if (!(lo <= mode && mode <= hi))
    throw std::invalid_argument("triangular_pmf: need lo <= mode <= hi");
  std::vector<double> pmf(static_cast<std::size_t>(hi - lo + 1), 0.0);
  const double a = lo, c = mode, b = hi;
  double sum = 0.0;
  for (int x = lo; x <= hi; ++x) {
    double d;
    if (b == a) d = 1.0;
    else if (x <= mode)
      d = (c == a) ? (x == lo ? 2.0 / (b - a) : 0.0)
                   : 2.0 * (x - a) / ((b - a) * (c - a));
    else
      d = (b == c) ? 0.0 : 2.0 * (b - x) / ((b - a) * (b - c));
    pmf[static_cast<std::size_t>(x - lo)] = d;
    sum += d;
  }
  for (double& p : pmf) p /= sum;
  return pmf;
}

int sample_triangular_length(const SamplerConfig& cfg, SplitMix64& rng) {
  static thread_local std::vector<double> cached_pmf;
  static thread_local int cached_lo = 0, cached_mode = 0, cached_hi = -1;
  if (cfg.tri_min != cached_lo || cfg.tri_mode != cached_mode ||
      cfg.tri_max != cached_hi) {
    cached_pmf = triangular_pmf(cfg.tri_min, cfg.tri_mode, cfg.tri_max);
    cached_lo = cfg.tri_min;
    cached_mode = cfg.tri_mode;
    cached_hi = cfg.tri_max;
  }
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t k = 0; k < cached_pmf.size(); ++k) {
    acc += cached_pmf[k];
    if (u < acc) return cfg.tri_min + static_cast<int>(k);
  }
  return cfg.tri_max;
}

NgramPool::Builder::Builder(int max_len, std::size_t reservoir_size,
                            std::uint64_t seed)
    : max_len_(max_len), reservoir_size_(reservoir_size) {
  if (max_len < 1) throw std::invalid_argument("ngram pool: max_len >= 1");
  if (reservoir_size < 1) throw std::invalid_argument("ngram pool: reservoir >= 1");
  buckets_.resize(static_cast<std::size_t>(max_len));
  counts_.assign(static_cast<std::size_t>(max_len), 0);
  rngs_.reserve(static_cast<std::size_t>(max_len));
  for (int len = 1; len <= max_len; ++len)
    rngs_.emplace_back(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(len)));
}

void NgramPool::Builder::add(const TokenizedSentence& sentence) {
  const Tokens& toks = sentence.surface;
  for (int len = 1; len <= max_len_; ++len) {
    if (toks.size() < static_cast<std::size_t>(len)) break;
    auto& bucket = buckets_[static_cast<std::size_t>(len - 1)];
    auto& count = counts_[static_cast<std::size_t>(len - 1)];
    auto& rng = rngs_[static_cast<std::size_t>(len - 1)];
    for (std::size_t i = 0; i + static_cast<std::size_t>(len) <= toks.size(); ++i) {
      // Algorithm R
      if (bucket.size() < reservoir_size_) {
        bucket.emplace_back(toks.begin() + static_cast<std::ptrdiff_t>(i),
                            toks.begin() + static_cast<std::ptrdiff_t>(i) + len);
      } else {
        std::uint64_t j = rng.bounded(count + 1);
        if (j < reservoir_size_)
          bucket[static_cast<std::size_t>(j)] =
              Tokens(toks.begin() + static_cast<std::ptrdiff_t>(i),
                     toks.begin() + static_cast<std::ptrdiff_t>(i) + len);
      }
      ++count;
    }
  }
}

NgramPool NgramPool::Builder::finish() && {
  NgramPool pool;
  pool.buckets_ = std::move(buckets_);
  pool.counts_ = std::move(counts_);
  return pool;
}

bool NgramPool::empty() const {
  for (const auto& b : buckets_)
    if (!b.empty()) return false;
  return true;
}

const std::vector<Tokens>& NgramPool::bucket(int len) const {
  static const std::vector<Tokens> none;
  if (len < 1 || len > max_len()) return none;
  return buckets_[static_cast<std::size_t>(len - 1)];
}

std::uint64_t NgramPool::total_count(int len) const {
  if (len < 1 || len > max_len()) return 0;
  return counts_[static_cast<std::size_t>(len - 1)];
}

void NgramPool::save(std::ostream& out) const {
  for (std::size_t k = 0; k < buckets_.size(); ++k)
    for (const auto& ngram : buckets_[k])
      out << (k + 1) << '\t' << join_tokens(ngram) << '\n';
}

NgramPool NgramPool::load(std::istream& in) {
  NgramPool pool;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("ngram pool line " + std::to_string(lineno) +
                               ": expected len<TAB>tokens");
    int len = std::stoi(line.substr(0, tab));
    Tokens toks = tokenize(std::string_view(line).substr(tab + 1)).surface;
    if (len < 1 || toks.size() != static_cast<std::size_t>(len))
      throw std::runtime_error("ngram pool line " + std::to_string(lineno) +
                               ": length mismatch");
    if (pool.buckets_.size() < static_cast<std::size_t>(len)) {
      pool.buckets_.resize(static_cast<std::size_t>(len));
      pool.counts_.resize(static_cast<std::size_t>(len), 0);
    }
    pool.buckets_[static_cast<std::size_t>(len - 1)].push_back(std::move(toks));
    ++pool.counts_[static_cast<std::size_t>(len - 1)];
  }
  return pool;
}

NgramPool NgramPool::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ngram pool: " + path);
  return load(in);
}

const Tokens* NgramPool::draw(int len, SplitMix64& rng, int* actual_len) const {
  if (empty()) return nullptr;
  int chosen = 0;
  if (len >= 1 && len <= max_len() && !bucket(len).empty()) {
    chosen = len;
  } else {
    // nearest non-empty length, lower wins a tie
    for (int delta = 1; delta <= max_len() + std::abs(len); ++delta) {
      if (len - delta >= 1 && !bucket(len - delta).empty()) { chosen = len - delta; break; }
      if (len + delta <= max_len() && !bucket(len + delta).empty()) { chosen = len + delta; break; }
    }
  }
  if (chosen == 0) return nullptr;
  if (actual_len) *actual_len = chosen;
  const auto& b = bucket(chosen);
  return &b[static_cast<std::size_t>(rng.bounded(b.size()))];
}

std::vector<ConstraintSpec> sample_constraints(const SentencePair& pair,
                                               const SamplerConfig& cfg,
                                               SplitMix64& rng) {
  std::vector<ConstraintSpec> constraints;
  if (rng.uniform() <= cfg.n) return constraints;  // skip the sentence

  const Tokens& tokens = pair.target.surface;
  bool open = false;
  Tokens current;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    double r = rng.uniform();
    if (open) {
      if (r < cfg.e) {
        // the closing token is not part of the constraint
        ConstraintSpec c;
        c.origin = ConstraintOrigin::SampledFromTarget;
        add_variant(c, std::move(current));
        current.clear();
        constraints.push_back(std::move(c));
        open = false;
      } else {
        current.push_back(tokens[t]);
      }
    } else if (r < cfg.s) {
      current.push_back(tokens[t]);
      open = true;
    }
  }
  if (open) {
    ConstraintSpec c;
    c.origin = ConstraintOrigin::SampledFromTarget;
    add_variant(c, std::move(current));
    constraints.push_back(std::move(c));
  }
  return constraints;
}

void VariantStats::merge(const VariantStats& other) {
  constraints += other.constraints;
  decoys += other.decoys;
  length_fallbacks += other.length_fallbacks;
  duplicate_skips += other.duplicate_skips;
}

void attach_variants(std::vector<ConstraintSpec>& constraints,
                     const SamplerConfig& cfg, const NgramPool& pool,
                     SplitMix64& rng, VariantStats* stats) {
  for (auto& c : constraints) {
    if (stats) ++stats->constraints;
    if (rng.uniform() >= cfg.v) continue;
    int want_len;
    if (rng.uniform() < cfg.l)
      want_len = static_cast<int>(c.variants.front().size());
    else
      want_len = sample_triangular_length(cfg, rng);

    if (pool.empty())
      throw std::runtime_error("decoy variant requested but the n-gram pool is empty");

    bool added = false;
    for (int attempt = 0; attempt < 8 && !added; ++attempt) {
      int actual = want_len;
      const Tokens* decoy = pool.draw(want_len, rng, &actual);
      if (decoy == nullptr) break;
      if (stats && actual != want_len && attempt == 0) ++stats->length_fallbacks;
      added = add_variant(c, *decoy);  // an exact duplicate of an existing variant is redrawn
    }
    if (added) {
      if (stats) ++stats->decoys;
    } else if (stats) {
      ++stats->duplicate_skips;
    }
    if (cfg.shuffle_variants && c.variants.size() > 1) {
      for (std::size_t k = c.variants.size() - 1; k > 0; --k) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(k + 1));
        std::swap(c.variants[k], c.variants[j]);
      }
    }
  }
}

}  // namespace termtk
