#include "termtk/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "termtk/corpus_io.hpp"

namespace termtk {

namespace fs = std::filesystem;

bool Deduper::is_duplicate(const std::string& normalized_pair) {
  Hash128 h = murmur3_128(normalized_pair);
  if (verify_) {
    auto [it, inserted] = stored_.try_emplace(h, normalized_pair);
    if (inserted) return false;
    if (it->second == normalized_pair) return true;
    ++collisions_;
    return false;  // same hash, different pair: keep it
  }
  return !hashes_.insert(h).second;
}

PairFilter::PairFilter(const FilterConfig& cfg) : cfg_(cfg) {
  if (cfg.min_tokens > cfg.max_tokens)
    throw std::invalid_argument("clean: min_tokens > max_tokens");
  if (cfg.max_ratio < 1.0)
    throw std::invalid_argument("clean: max_ratio must be >= 1");
  if (cfg.dedup) dedup_.emplace(cfg.dedup_verify);
}

bool PairFilter::keep(const SentencePair& pair) {
  ++stats_.read;
  const std::size_t src = pair.source.size();
  const std::size_t tgt = pair.target.size();
  if (src < cfg_.min_tokens || tgt < cfg_.min_tokens) {
    ++stats_.too_short;
    return false;
  }
  if (src > cfg_.max_tokens || tgt > cfg_.max_tokens) {
    ++stats_.too_long;
    return false;
  }
  const std::size_t lo = std::min(src, tgt), hi = std::max(src, tgt);
  if (lo == 0 ? hi > 0
              : static_cast<double>(hi) / static_cast<double>(lo) > cfg_.max_ratio) {
    ++stats_.bad_ratio;
    return false;
  }
  if (dedup_) {
    std::string key = detokenize(pair.source);
    key.push_back('\t');
    key += detokenize(pair.target);
    if (dedup_->is_duplicate(key)) {
      ++stats_.duplicates;
      return false;
    }
    stats_.hash_collisions = dedup_->collisions();
  }
  ++stats_.kept;
  return true;
}

std::vector<SentencePair> clean(const std::vector<SentencePair>& pairs,
                                const FilterConfig& cfg, CleanStats* stats) {
  PairFilter filter(cfg);
  std::vector<SentencePair> out;
  for (const auto& p : pairs)
    if (filter.keep(p)) out.push_back(p);
  if (stats) *stats = filter.stats();
  return out;
}

IniSections parse_ini(std::istream& in) {
  IniSections sections;
  std::string line, section;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      sections[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": empty key");
    sections[section][key] = value;
  }
  return sections;
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config: " + key + " must be a boolean, got '" + v + "'");
}

const std::string* find_key(const IniSections& ini, const std::string& section,
                            const std::string& key) {
  auto s = ini.find(section);
  if (s == ini.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

void require_file(const std::string& path, const std::string& what) {
  if (!fs::exists(path))
    throw std::runtime_error("config: " + what + " does not exist: " + path);
}

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();

  PipelineConfig cfg;
  cfg.config_text = buffer.str();
  std::istringstream text(cfg.config_text);
  IniSections ini = parse_ini(text);

  auto get = [&](const std::string& section, const std::string& key,
                 auto parse, auto& out) {
    if (const std::string* v = find_key(ini, section, key)) out = parse(*v);
  };
  auto as_string = [](const std::string& v) { return v; };
  auto as_int = [](const std::string& v) { return std::stoi(v); };
  auto as_size = [](const std::string& v) {
    return static_cast<std::size_t>(std::stoull(v));
  };
  auto as_double = [](const std::string& v) { return std::stod(v); };
  auto as_u64 = [](const std::string& v) { return std::stoull(v); };

  get("input", "source", as_string, cfg.source_path);
  get("input", "target", as_string, cfg.target_path);
  get("input", "tsv", as_string, cfg.tsv_path);

  if (const std::string* v = find_key(ini, "clean", "enabled"))
    cfg.clean_enabled = parse_bool(*v, "clean.enabled");
  get("clean", "min_tokens", as_size, cfg.filter.min_tokens);
  get("clean", "max_tokens", as_size, cfg.filter.max_tokens);
  get("clean", "max_ratio", as_double, cfg.filter.max_ratio);
  if (const std::string* v = find_key(ini, "clean", "dedup"))
    cfg.filter.dedup = parse_bool(*v, "clean.dedup");
  if (const std::string* v = find_key(ini, "clean", "dedup_verify"))
    cfg.filter.dedup_verify = parse_bool(*v, "clean.dedup_verify");

  get("pool", "max_len", as_int, cfg.pool_max_len);
  get("pool", "reservoir", as_size, cfg.pool_reservoir);
  get("pool", "load", as_string, cfg.pool_load_path);

  if (const std::string* v = find_key(ini, "sample", "enabled"))
    cfg.sample_enabled = parse_bool(*v, "sample.enabled");
  get("sample", "s", as_double, cfg.sampler.s);
  get("sample", "e", as_double, cfg.sampler.e);
  get("sample", "n", as_double, cfg.sampler.n);
  get("sample", "v", as_double, cfg.sampler.v);
  get("sample", "l", as_double, cfg.sampler.l);
  get("sample", "tri_min", as_int, cfg.sampler.tri_min);
  get("sample", "tri_max", as_int, cfg.sampler.tri_max);
  get("sample", "tri_mode", as_int, cfg.sampler.tri_mode);
  get("sample", "seed", as_u64, cfg.sampler.seed);
  if (const std::string* v = find_key(ini, "sample", "shuffle_variants"))
    cfg.sampler.shuffle_variants = parse_bool(*v, "sample.shuffle_variants");

  if (const std::string* v = find_key(ini, "annotate", "enabled"))
    cfg.annotate_enabled = parse_bool(*v, "annotate.enabled");
  if (const std::string* v = find_key(ini, "annotate", "scheme")) {
    if (*v != "suffix")
      throw std::runtime_error(
          "config: the pipeline annotates sampled constraints, which carry no "
          "source span; only scheme = suffix is valid here");
  }
  if (const std::string* v = find_key(ini, "annotate", "mode")) {
    if (*v == "lemma") cfg.annotation.mode = Level::Lemma;
    else if (*v == "surface") cfg.annotation.mode = Level::Surface;
    else throw std::runtime_error("config: annotate.mode must be surface or lemma");
  }
  get("annotate", "sep", as_string, cfg.annotation.sep_token);
  get("annotate", "cdelim", as_string, cfg.annotation.constraint_delim);
  get("annotate", "vdelim", as_string, cfg.annotation.variant_delim);
  if (const std::string* v = find_key(ini, "annotate", "lemmatizer"))
    cfg.lemmatizer = parse_lemmatizer_arg(*v);

  get("output", "dir", as_string, cfg.out_dir);
  get("output", "jobs", as_int, cfg.jobs);

  // Validation, before any work.
  if (!cfg.tsv_path.empty()) {
    if (!cfg.source_path.empty() || !cfg.target_path.empty())
      throw std::runtime_error("config: give either input.tsv or input.source+target");
    require_file(cfg.tsv_path, "input.tsv");
  } else {
    if (cfg.source_path.empty() || cfg.target_path.empty())
      throw std::runtime_error("config: input.source and input.target are required");
    require_file(cfg.source_path, "input.source");
    require_file(cfg.target_path, "input.target");
  }
  if (!cfg.pool_load_path.empty()) require_file(cfg.pool_load_path, "pool.load");
  if (cfg.lemmatizer.kind == LemmatizerKind::Dictionary)
    require_file(cfg.lemmatizer.dictionary_path, "annotate.lemmatizer dictionary");
  if (cfg.out_dir.empty())
    throw std::runtime_error("config: output.dir is required");
  if (cfg.annotate_enabled && !cfg.sample_enabled)
    throw std::runtime_error("config: annotate without sample has no constraints to use");
  if (cfg.jobs < 1) throw std::runtime_error("config: jobs must be >= 1");
  return cfg;
}

void parallel_map_lines(
    const std::function<std::optional<std::string>()>& read_line,
    const std::function<std::string(std::uint64_t, const std::string&)>& fn,
    const std::function<void(const std::string&)>& write_block, int jobs,
    std::size_t chunk_size) {
  if (jobs < 1) jobs = 1;
  std::uint64_t next_index = 0;
  std::vector<std::string> chunk;
  chunk.reserve(chunk_size);
  bool eof = false;
  while (!eof) {
    chunk.clear();
    while (chunk.size() < chunk_size) {
      auto line = read_line();
      if (!line) { eof = true; break; }
      chunk.push_back(std::move(*line));
    }
    if (chunk.empty()) break;

    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), chunk.size());
    std::vector<std::string> outputs(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::uint64_t> error_lines(workers, 0);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t per = (chunk.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        const std::size_t begin = w * per;
        const std::size_t end = std::min(chunk.size(), begin + per);
        std::string block;
        for (std::size_t i = begin; i < end; ++i) {
          try {
            block += fn(next_index + i, chunk[i]);
          } catch (...) {
            errors[w] = std::current_exception();
            error_lines[w] = next_index + i;
            return;
          }
        }
        outputs[w] = std::move(block);
      });
    }
    for (auto& t : threads) t.join();
    for (std::size_t w = 0; w < workers; ++w) {
      if (!errors[w]) continue;
      try {
        std::rethrow_exception(errors[w]);
      } catch (const std::exception& ex) {
        throw std::runtime_error("shard " + std::to_string(w) + ", line " +
                                 std::to_string(error_lines[w]) + ": " + ex.what());
      }
    }
    for (const auto& block : outputs) write_block(block);
    next_index += chunk.size();
  }
}

PipelineResult run_pipeline(const PipelineConfig& cfg, int jobs_override) {
  const int jobs = jobs_override > 0 ? jobs_override : cfg.jobs;
  fs::create_directories(cfg.out_dir);
  const std::string clean_src = cfg.out_dir + "/source.txt";
  const std::string clean_tgt = cfg.out_dir + "/target.txt";
  const std::string pool_path = cfg.out_dir + "/pool.tsv";
  const std::string constraints_path = cfg.out_dir + "/constraints.tsv";
  const std::string annotated_path = cfg.out_dir + "/source.annotated.txt";

  PipelineResult result;

  // Pass 1: clean, write the surviving corpus, build the n-gram pool.
  NgramPool pool;
  const bool need_pool = cfg.sample_enabled && cfg.sampler.v > 0.0;
  {
    CorpusReader reader =
        cfg.tsv_path.empty()
            ? CorpusReader::from_files(cfg.source_path, cfg.target_path)
            : CorpusReader::from_tsv(cfg.tsv_path);
    std::ofstream src_out(clean_src), tgt_out(clean_tgt);
    if (!src_out || !tgt_out)
      throw std::runtime_error("cannot write into " + cfg.out_dir);

    std::optional<NgramPool::Builder> builder;
    if (need_pool && cfg.pool_load_path.empty())
      builder.emplace(cfg.pool_max_len, cfg.pool_reservoir, cfg.sampler.seed);

    PairFilter filter(cfg.filter);
    while (auto pair = reader.next()) {
      if (cfg.clean_enabled && !filter.keep(*pair)) continue;
      src_out << detokenize(pair->source) << '\n';
      tgt_out << detokenize(pair->target) << '\n';
      if (builder) builder->add(pair->target);
      ++result.lines_out;
    }
    result.clean = filter.stats();
    if (!cfg.clean_enabled) {
      result.clean.read = reader.lines_read();
      result.clean.kept = result.lines_out;
    }
    if (builder) {
      pool = std::move(*builder).finish();
      std::ofstream pool_out(pool_path);
      pool.save(pool_out);
    } else if (need_pool) {
      pool = NgramPool::load_file(cfg.pool_load_path);
    }
  }

  // Pass 2: sample constraints and annotate, streaming the cleaned corpus.
  // Worker blocks interleave sidecar lines with annotated lines, the latter
  // prefixed by a RS byte; the writer demultiplexes them into the two files.
  VariantStats variant_stats;
  if (cfg.sample_enabled) {
    Lemmatizer lemmatizer(cfg.lemmatizer);
    std::ifstream src_in(clean_src), tgt_in(clean_tgt);
    std::ofstream constraints_out(constraints_path);
    std::ofstream annotated_out;
    if (cfg.annotate_enabled) annotated_out.open(annotated_path);

    std::mutex stats_mutex;
    auto read_line = [&]() -> std::optional<std::string> {
      std::string s, t;
      if (!std::getline(src_in, s) || !std::getline(tgt_in, t)) return std::nullopt;
      s.push_back('\t');
      s += t;
      return s;
    };
    auto process = [&](std::uint64_t index, const std::string& line) {
      auto tab = line.find('\t');
      SentencePair pair;
      pair.line_index = index;
      pair.source = tokenize(std::string_view(line).substr(0, tab));
      pair.target = tokenize(std::string_view(line).substr(tab + 1));

      SplitMix64 rng = line_rng(cfg.sampler.seed, index);
      auto constraints = sample_constraints(pair, cfg.sampler, rng);
      VariantStats local;
      attach_variants(constraints, cfg.sampler, pool, rng, &local);
      {
        std::lock_guard<std::mutex> lock(stats_mutex);
        variant_stats.merge(local);
      }
      std::ostringstream block;
      write_constraints_line(block, index, constraints);
      std::string out = block.str();
      if (cfg.annotate_enabled) {
        if (cfg.annotation.mode == Level::Lemma)
          constraints = lemmatizer.constraints(std::move(constraints));
        auto annotated =
            annotate_suffix(pair.source, constraints, cfg.annotation, index);
        out.push_back('\x1e');
        out += detokenize(annotated.source);
        out.push_back('\n');
      }
      return out;
    };
    auto write_block = [&](const std::string& block) {
      std::size_t start = 0;
      while (start < block.size()) {
        auto nl = block.find('\n', start);
        if (nl == std::string::npos) nl = block.size();
        std::string_view line(block.data() + start, nl - start);
        if (!line.empty() && line.front() == '\x1e')
          annotated_out << line.substr(1) << '\n';
        else if (!line.empty())
          constraints_out << line << '\n';
        start = nl + 1;
      }
    };
    parallel_map_lines(read_line, process, write_block, jobs);
  }
  result.variants = variant_stats;

  // Manifest: config hash, seeds, per-stage statistics.
  nlohmann::json manifest;
  Hash128 h = murmur3_128(cfg.config_text);
  char hex[33];
  std::snprintf(hex, sizeof(hex), "%016llx%016llx",
                static_cast<unsigned long long>(h.hi),
                static_cast<unsigned long long>(h.lo));
  manifest["config_hash"] = hex;
  manifest["seed"] = cfg.sampler.seed;
  manifest["jobs"] = jobs;
  manifest["clean"] = {{"read", result.clean.read},
                       {"kept", result.clean.kept},
                       {"too_short", result.clean.too_short},
                       {"too_long", result.clean.too_long},
                       {"bad_ratio", result.clean.bad_ratio},
                       {"duplicates", result.clean.duplicates},
                       {"hash_collisions", result.clean.hash_collisions}};
  manifest["lines_out"] = result.lines_out;
  if (cfg.sample_enabled)
    manifest["sample"] = {{"constraints", result.variants.constraints},
                          {"decoys", result.variants.decoys},
                          {"length_fallbacks", result.variants.length_fallbacks},
                          {"duplicate_skips", result.variants.duplicate_skips}};
  result.manifest_path = cfg.out_dir + "/manifest.json";
  std::ofstream manifest_out(result.manifest_path);
  manifest_out << manifest.dump(2) << '\n';
  return result;
}

}  // namespace termtk
