#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "termtk/annotate.hpp"
#include "termtk/core.hpp"
#include "termtk/hash.hpp"
#include "termtk/lemma.hpp"
#include "termtk/sampler.hpp"

namespace termtk {

struct FilterConfig {
  std::size_t min_tokens = 1;
  std::size_t max_tokens = 100;
  double max_ratio = 9.0;  // token-count ratio, either direction
  bool dedup = true;
  // keep first-occurrence strings so a 128-bit hash match is confirmed by
  // comparison; disable for corpora too large to hold the survivors
  bool dedup_verify = true;
};

struct CleanStats {
  std::uint64_t read = 0;
  std::uint64_t kept = 0;
  std::uint64_t too_short = 0;
  std::uint64_t too_long = 0;
  std::uint64_t bad_ratio = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t hash_collisions = 0;
};

/// Duplicate detection keyed by the murmur3 128-bit hash of the normalized
/// pair bytes. In verify mode a hash hit is confirmed against the stored
/// first occurrence; a mismatch is a genuine collision and the pair is kept.
class Deduper {
 public:
  explicit Deduper(bool verify) : verify_(verify) {}
  bool is_duplicate(const std::string& normalized_pair);
  std::uint64_t collisions() const { return collisions_; }

 private:
  bool verify_;
  std::uint64_t collisions_ = 0;
  std::unordered_map<Hash128, std::string, Hash128Hasher> stored_;
  std::unordered_set<Hash128, Hash128Hasher> hashes_;
};

/// Streaming clean stage: length bounds, length-ratio bound, exact dedup
/// (first occurrence kept). Checks are counted in that order.
class PairFilter {
 public:
  explicit PairFilter(const FilterConfig& cfg);
  bool keep(const SentencePair& pair);
  const CleanStats& stats() const { return stats_; }
  std::uint64_t collisions() const { return dedup_ ? dedup_->collisions() : 0; }

 private:
  FilterConfig cfg_;
  CleanStats stats_;
  std::optional<Deduper> dedup_;
};

std::vector<SentencePair> clean(const std::vector<SentencePair>& pairs,
                                const FilterConfig& cfg,
                                CleanStats* stats = nullptr);

// Plain INI: [section] headers, key = value lines, # comments.
using IniSections = std::map<std::string, std::map<std::string, std::string>>;
IniSections parse_ini(std::istream& in);

struct PipelineConfig {
  std::string config_text;  // raw bytes, hashed into the manifest

  std::string source_path, target_path, tsv_path;

  bool clean_enabled = true;
  FilterConfig filter;

  int pool_max_len = 9;
  std::size_t pool_reservoir = 10000;
  std::string pool_load_path;  // pre-built pool; skips building one

  bool sample_enabled = false;
  SamplerConfig sampler;

  bool annotate_enabled = false;
  AnnotationConfig annotation;
  LemmatizerSpec lemmatizer;

  std::string out_dir;
  int jobs = 1;
};

/// Parses and validates; every referenced path must exist before any work.
PipelineConfig load_pipeline_config(const std::string& path);

struct PipelineResult {
  CleanStats clean;
  VariantStats variants;
  std::uint64_t lines_out = 0;
  std::string manifest_path;
};

/// clean -> pool -> sample -> annotate over line shards. Outputs are
/// byte-identical for any worker count: sampling draws from per-line streams
/// keyed by the post-clean line index, and chunk outputs are written in order.
PipelineResult run_pipeline(const PipelineConfig& cfg, int jobs_override = 0);

/// Deterministic chunked parallel map: `fn(line_index, line) -> output block`,
/// outputs concatenated in input order regardless of `jobs`.
void parallel_map_lines(
    const std::function<std::optional<std::string>()>& read_line,
    const std::function<std::string(std::uint64_t, const std::string&)>& fn,
    const std::function<void(const std::string&)>& write_block, int jobs,
    std::size_t chunk_size = 16384);

}  // namespace termtk
