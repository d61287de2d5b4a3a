#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "termtk/annotate.hpp"
#include "termtk/combine.hpp"
#include "termtk/corpus_io.hpp"
#include "termtk/core.hpp"
#include "termtk/lemma.hpp"
#include "termtk/metrics.hpp"
#include "termtk/pipeline.hpp"
#include "termtk/sampler.hpp"
#include "termtk/termbase.hpp"

namespace {

using namespace termtk;

std::unique_ptr<std::ostream> open_out(const std::string& path) {
  auto out = std::make_unique<std::ofstream>(path);
  if (!*out) throw std::runtime_error("cannot write " + path);
  return out;
}

// stdout when no path is given
struct OutStream {
  explicit OutStream(const std::string& path) {
    if (!path.empty()) owned = open_out(path);
  }
  std::ostream& get() { return owned ? *owned : std::cout; }
  std::unique_ptr<std::ostream> owned;
};

struct PairInputArgs {
  std::string source, target, tsv;

  void attach(CLI::App* cmd) {
    cmd->add_option("--source", source, "source-side file, one sentence per line");
    cmd->add_option("--target", target, "target-side file, aligned by line");
    cmd->add_option("--tsv", tsv, "tab-separated source<TAB>target file (default: stdin)");
  }

  CorpusReader reader() const {
    if (!source.empty() || !target.empty()) {
      if (source.empty() || target.empty())
        throw std::runtime_error("--source and --target go together");
      return CorpusReader::from_files(source, target);
    }
    if (!tsv.empty()) return CorpusReader::from_tsv(tsv);
    return CorpusReader::from_tsv_stream(std::cin);
  }

  // raw zipped line reader for the parallel path
  std::function<std::optional<std::string>()> raw_reader(
      std::vector<std::unique_ptr<std::ifstream>>& managed) const {
    if (!source.empty() || !target.empty()) {
      if (source.empty() || target.empty())
        throw std::runtime_error("--source and --target go together");
      managed.push_back(std::make_unique<std::ifstream>(source));
      managed.push_back(std::make_unique<std::ifstream>(target));
      if (!*managed[managed.size() - 2]) throw std::runtime_error("cannot open " + source);
      if (!*managed[managed.size() - 1]) throw std::runtime_error("cannot open " + target);
      std::ifstream* s = managed[managed.size() - 2].get();
      std::ifstream* t = managed[managed.size() - 1].get();
      return [s, t]() -> std::optional<std::string> {
        std::string a, b;
        bool ga = static_cast<bool>(std::getline(*s, a));
        bool gb = static_cast<bool>(std::getline(*t, b));
        if (!ga && !gb) return std::nullopt;
        if (ga != gb) throw std::runtime_error("source/target line counts differ");
        a.push_back('\t');
        a += b;
        return a;
      };
    }
    std::istream* in = &std::cin;
    if (!tsv.empty()) {
      managed.push_back(std::make_unique<std::ifstream>(tsv));
      if (!*managed.back()) throw std::runtime_error("cannot open " + tsv);
      in = managed.back().get();
    }
    return [in]() -> std::optional<std::string> {
      std::string line;
      if (!std::getline(*in, line)) return std::nullopt;
      return line;
    };
  }
};

SentencePair parse_pair_line(std::uint64_t index, const std::string& raw) {
  std::string line = nfc_normalize(raw);
  auto tab = line.find('\t');
  if (tab == std::string::npos)
    throw std::runtime_error("expected source<TAB>target");
  SentencePair pair;
  pair.line_index = index;
  pair.source = tokenize(std::string_view(line).substr(0, tab));
  pair.target = tokenize(std::string_view(line).substr(tab + 1));
  return pair;
}

int cmd_clean(const PairInputArgs& input, const FilterConfig& filter,
              const std::string& out_source, const std::string& out_target,
              const std::string& out_tsv) {
  CorpusReader reader = input.reader();
  PairFilter pf(filter);
  std::unique_ptr<std::ostream> src_out, tgt_out;
  if (!out_source.empty() || !out_target.empty()) {
    if (out_source.empty() || out_target.empty())
      throw std::runtime_error("--out-source and --out-target go together");
    src_out = open_out(out_source);
    tgt_out = open_out(out_target);
  } else if (!out_tsv.empty()) {
    src_out = open_out(out_tsv);
  }
  while (auto pair = reader.next()) {
    if (!pf.keep(*pair)) continue;
    if (tgt_out) {
      *src_out << detokenize(pair->source) << '\n';
      *tgt_out << detokenize(pair->target) << '\n';
    } else {
      (src_out ? *src_out : std::cout)
          << detokenize(pair->source) << '\t' << detokenize(pair->target) << '\n';
    }
  }
  const CleanStats& s = pf.stats();
  std::cerr << "clean: read " << s.read << " kept " << s.kept << " too_short "
            << s.too_short << " too_long " << s.too_long << " bad_ratio "
            << s.bad_ratio << " duplicates " << s.duplicates
            << " hash_collisions " << s.hash_collisions << '\n';
  return 0;
}

int cmd_ngram_pool(const std::string& target, const std::string& out_path,
                   int max_len, std::size_t reservoir, std::uint64_t seed) {
  NgramPool::Builder builder(max_len, reservoir, seed);
  std::optional<LineReader> file_reader;
  if (!target.empty()) file_reader.emplace(target);
  else file_reader.emplace(std::cin);
  while (auto s = file_reader->next()) builder.add(*s);
  NgramPool pool = std::move(builder).finish();
  OutStream out(out_path);
  pool.save(out.get());
  return 0;
}

int cmd_sample(const PairInputArgs& input, const SamplerConfig& cfg,
               const std::string& pool_path, const std::string& out_path,
               int jobs) {
  NgramPool pool;
  if (!pool_path.empty()) pool = NgramPool::load_file(pool_path);
  else if (cfg.v > 0.0)
    throw std::runtime_error("sampling variants (v > 0) needs --pool");

  std::vector<std::unique_ptr<std::ifstream>> managed;
  auto read_line = input.raw_reader(managed);
  OutStream out(out_path);
  VariantStats stats;
  std::mutex stats_mutex;
  auto process = [&](std::uint64_t index, const std::string& raw) {
    SentencePair pair = parse_pair_line(index, raw);
    SplitMix64 rng = line_rng(cfg.seed, index);
    auto constraints = sample_constraints(pair, cfg, rng);
    VariantStats local;
    attach_variants(constraints, cfg, pool, rng, &local);
    {
      std::lock_guard<std::mutex> lock(stats_mutex);
      stats.merge(local);
    }
    std::ostringstream line;
    write_constraints_line(line, index, constraints);
    return line.str();
  };
  parallel_map_lines(read_line, process,
                     [&](const std::string& block) { out.get() << block; }, jobs);
  std::cerr << "sample: constraints " << stats.constraints << " decoys "
            << stats.decoys << " length_fallbacks " << stats.length_fallbacks
            << " duplicate_skips " << stats.duplicate_skips << '\n';
  return 0;
}

int cmd_match(const std::string& source, const std::string& termbase_path,
              const LemmatizerSpec& lm_spec, const std::string& out_path) {
  Lemmatizer lemmatizer(lm_spec);
  TermBase tb = TermBase::load(termbase_path, lemmatizer);
  std::optional<LineReader> reader;
  if (!source.empty()) reader.emplace(source);
  else reader.emplace(std::cin);
  OutStream out(out_path);
  std::uint64_t index = 0;
  while (auto sentence = reader->next()) {
    auto matches = find_matches(*sentence, tb, lemmatizer);
    write_matches_line(out.get(), index, matches);
    ++index;
  }
  return 0;
}

int cmd_annotate(const std::string& source, const std::string& out_path,
                 const AnnotationConfig& cfg, const LemmatizerSpec& lm_spec,
                 const std::string& constraints_path,
                 const std::string& matches_path,
                 const std::string& termbase_path, VariantPolicy policy) {
  Lemmatizer lemmatizer(lm_spec);
  std::optional<TermBase> tb;
  if (!termbase_path.empty()) tb.emplace(TermBase::load(termbase_path, lemmatizer));
  std::optional<ConstraintSidecar> constraints;
  if (!constraints_path.empty()) constraints.emplace(ConstraintSidecar::load(constraints_path));
  std::optional<MatchSidecar> matches;
  if (!matches_path.empty()) matches.emplace(MatchSidecar::load(matches_path));

  if (cfg.scheme != Scheme::Suffix && !tb)
    throw std::runtime_error("factored/replace schemes need --termbase");
  if (cfg.scheme == Scheme::Suffix && !constraints && !tb)
    throw std::runtime_error("suffix scheme needs --constraints or --termbase");
  if (matches && !tb)
    throw std::runtime_error("--matches needs --termbase to resolve entries");

  std::optional<LineReader> reader;
  if (!source.empty()) reader.emplace(source);
  else reader.emplace(std::cin);
  OutStream out(out_path);

  std::uint64_t index = 0;
  while (auto sentence = reader->next()) {
    std::vector<TermMatch> line_matches;
    if (matches) line_matches = matches->for_line(index);
    else if (tb) line_matches = find_matches(*sentence, *tb, lemmatizer);

    AnnotatedSentence annotated;
    if (cfg.scheme == Scheme::Suffix) {
      std::vector<ConstraintSpec> cs;
      if (constraints) {
        cs = constraints->for_line(index);
        if (cfg.mode == Level::Lemma) cs = lemmatizer.constraints(std::move(cs));
      } else {
        cs = matches_to_constraints(line_matches, *tb, cfg.mode, policy);
      }
      annotated = annotate_suffix(*sentence, cs, cfg, index);
      out.get() << detokenize(annotated.source) << '\n';
    } else if (cfg.scheme == Scheme::Factored) {
      annotated = annotate_factored(*sentence, line_matches, *tb, cfg, index);
      out.get() << to_factored_line(annotated) << '\n';
    } else {
      annotated = annotate_replace(*sentence, line_matches, *tb, cfg, index);
      out.get() << detokenize(annotated.source) << '\n';
    }
    ++index;
  }
  return 0;
}

int cmd_evaluate(const std::string& src, const std::string& hyp,
                 const std::string& ref, const std::string& terms_path,
                 const std::string& report_path, const LemmatizerSpec& lm_spec,
                 const EvalConfig& cfg) {
  Lemmatizer lemmatizer(lm_spec);
  auto hyps = read_all_lines(hyp);
  auto refs = read_all_lines(ref);
  if (hyps.size() != refs.size())
    throw std::runtime_error("hypothesis/reference line counts differ");
  std::vector<TokenizedSentence> srcs;
  if (!src.empty()) {
    srcs = read_all_lines(src);
    if (srcs.size() != hyps.size())
      throw std::runtime_error("source line count differs from hypothesis");
  }
  ConstraintSidecar terms;
  if (!terms_path.empty()) terms = ConstraintSidecar::load(terms_path);

  std::vector<EvalInstance> instances;
  instances.reserve(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    EvalInstance inst;
    if (!srcs.empty()) inst.source = srcs[i];
    inst.hypothesis = lemmatizer.sentence(std::move(hyps[i]));
    inst.reference = lemmatizer.sentence(std::move(refs[i]));
    inst.expected_terms = terms.for_line(i);
    instances.push_back(std::move(inst));
  }

  MetricReport report = evaluate(instances, lemmatizer, cfg);
  std::cout << "BLEU " << report.bleu << "  EM " << report.exact_match
            << "  window2 " << report.window2 << "  window3 " << report.window3
            << "  1-TERm " << report.one_minus_term << "  terms "
            << report.terms_covered << '/' << report.terms_total
            << (report.em_vacuous ? "  (no terms: EM vacuous)" : "") << '\n';
  if (!report_path.empty()) {
    auto out = open_out(report_path);
    *out << report_to_json(report) << '\n';
  }
  return 0;
}

int cmd_combine(const std::vector<std::string>& system_args,
                const std::string& baseline, const std::string& terms_path,
                const std::string& out_path, const std::string& provenance_path,
                const LemmatizerSpec& lm_spec, bool prefer_partial) {
  std::vector<SystemOutput> systems;
  for (const auto& arg : system_args) {
    auto eq = arg.find('=');
    auto colon = arg.rfind(':');
    if (eq == std::string::npos || colon == std::string::npos || colon < eq)
      throw std::runtime_error("--system expects id=path:bleu, got '" + arg + "'");
    SystemOutput sys;
    sys.system_id = arg.substr(0, eq);
    sys.validation_bleu = std::stod(arg.substr(colon + 1));
    sys.translations = read_all_lines(arg.substr(eq + 1, colon - eq - 1));
    systems.push_back(std::move(sys));
  }
  if (systems.empty()) throw std::runtime_error("no --system given");
  const std::size_t lines = systems.front().translations.size();

  ConstraintSidecar terms;
  if (!terms_path.empty()) terms = ConstraintSidecar::load(terms_path);
  std::vector<std::vector<ConstraintSpec>> per_line;
  per_line.reserve(lines);
  for (std::size_t i = 0; i < lines; ++i) per_line.push_back(terms.for_line(i));

  Lemmatizer lemmatizer(lm_spec);
  CombineOptions opts;
  opts.prefer_partial_coverage = prefer_partial;
  CombineResult result = combine(std::move(systems), baseline, per_line, lemmatizer, opts);

  OutStream out(out_path);
  for (const auto& t : result.translations) out.get() << detokenize(t) << '\n';
  if (!provenance_path.empty()) {
    auto prov = open_out(provenance_path);
    for (std::size_t i = 0; i < result.chosen_system.size(); ++i)
      *prov << i << '\t' << result.chosen_system[i] << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"terminology-constrained NMT data preparation and evaluation"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads for parallel stages")
      ->capture_default_str();

  std::string lemmatizer_arg = "identity";
  auto add_lemmatizer = [&](CLI::App* cmd) {
    cmd->add_option("--lemmatizer", lemmatizer_arg,
                    "identity | dict:<path> (append ,keep-case to disable lowercasing)");
  };

  // clean
  PairInputArgs clean_input;
  FilterConfig filter;
  std::string clean_out_source, clean_out_target, clean_out_tsv;
  auto* clean_cmd = app.add_subcommand("clean", "length/ratio filtering and deduplication");
  clean_input.attach(clean_cmd);
  clean_cmd->add_option("--min-tokens", filter.min_tokens)->capture_default_str();
  clean_cmd->add_option("--max-tokens", filter.max_tokens)->capture_default_str();
  clean_cmd->add_option("--max-ratio", filter.max_ratio)->capture_default_str();
  clean_cmd->add_flag("!--no-dedup", filter.dedup, "disable deduplication");
  clean_cmd->add_flag("!--no-dedup-verify", filter.dedup_verify,
                      "trust 128-bit hashes without storing originals");
  clean_cmd->add_option("--out-source", clean_out_source);
  clean_cmd->add_option("--out-target", clean_out_target);
  clean_cmd->add_option("--out-tsv", clean_out_tsv, "default: TSV to stdout");

  // ngram-pool
  std::string pool_target, pool_out;
  int pool_max_len = 9;
  std::size_t pool_reservoir = 10000;
  std::uint64_t pool_seed = 1;
  auto* pool_cmd = app.add_subcommand("ngram-pool",
                                      "reservoir-sample n-grams from a target corpus");
  pool_cmd->add_option("--target", pool_target, "target corpus (default: stdin)");
  pool_cmd->add_option("--out", pool_out, "pool TSV (default: stdout)");
  pool_cmd->add_option("--max-len", pool_max_len)->capture_default_str();
  pool_cmd->add_option("--reservoir", pool_reservoir, "sample size per length")
      ->capture_default_str();
  pool_cmd->add_option("--seed", pool_seed)->capture_default_str();

  // sample
  PairInputArgs sample_input;
  SamplerConfig sampler;
  std::string sample_pool, sample_out;
  auto* sample_cmd = app.add_subcommand("sample",
                                        "sample synthetic constraints from target sentences");
  sample_input.attach(sample_cmd);
  sample_cmd->add_option("--s", sampler.s)->capture_default_str();
  sample_cmd->add_option("--e", sampler.e)->capture_default_str();
  sample_cmd->add_option("--n", sampler.n)->capture_default_str();
  sample_cmd->add_option("--v", sampler.v)->capture_default_str();
  sample_cmd->add_option("--l", sampler.l)->capture_default_str();
  sample_cmd->add_option("--seed", sampler.seed)->capture_default_str();
  sample_cmd->add_flag("--shuffle-variants", sampler.shuffle_variants,
                       "randomize variant order instead of true-variant-first");
  sample_cmd->add_option("--pool", sample_pool, "n-gram pool TSV for decoy variants");
  sample_cmd->add_option("--out", sample_out, "constraint sidecar (default: stdout)");

  // match
  std::string match_source, match_tb, match_out;
  auto* match_cmd = app.add_subcommand("match", "find term-base occurrences in source text");
  match_cmd->add_option("--source", match_source, "source file (default: stdin)");
  match_cmd->add_option("--termbase", match_tb, "term base TSV")->required();
  match_cmd->add_option("--out", match_out, "match sidecar (default: stdout)");
  add_lemmatizer(match_cmd);

  // annotate
  std::string ann_source, ann_out, ann_constraints, ann_matches, ann_tb;
  std::string ann_scheme = "suffix", ann_mode = "surface", ann_variants = "all";
  AnnotationConfig ann_cfg;
  auto* ann_cmd = app.add_subcommand("annotate", "rewrite source sentences to carry constraints");
  ann_cmd->add_option("--source", ann_source, "source file (default: stdin)");
  ann_cmd->add_option("--out", ann_out, "default: stdout");
  ann_cmd->add_option("--scheme", ann_scheme, "suffix | factored | replace")
      ->capture_default_str();
  ann_cmd->add_option("--mode", ann_mode, "surface | lemma")->capture_default_str();
  ann_cmd->add_option("--sep", ann_cfg.sep_token)->capture_default_str();
  ann_cmd->add_option("--cdelim", ann_cfg.constraint_delim)->capture_default_str();
  ann_cmd->add_option("--vdelim", ann_cfg.variant_delim)->capture_default_str();
  ann_cmd->add_option("--constraints", ann_constraints, "constraint sidecar file");
  ann_cmd->add_option("--matches", ann_matches, "match sidecar file");
  ann_cmd->add_option("--termbase", ann_tb, "term base TSV for inline matching");
  ann_cmd->add_option("--variants", ann_variants, "first | all (term-base variants)")
      ->capture_default_str();
  add_lemmatizer(ann_cmd);

  // evaluate
  std::string eval_src, eval_hyp, eval_ref, eval_terms, eval_report;
  std::string eval_sub_rule = "max", eval_window_norm = "ref";
  EvalConfig eval_cfg;
  bool eval_keep_case = false, eval_unique = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "terminology-aware metrics");
  eval_cmd->add_option("--src", eval_src, "source file (optional)");
  eval_cmd->add_option("--hyp", eval_hyp, "system output")->required();
  eval_cmd->add_option("--ref", eval_ref, "reference")->required();
  eval_cmd->add_option("--terms", eval_terms, "expected-term sidecar");
  eval_cmd->add_option("--report", eval_report, "write a JSON report here");
  eval_cmd->add_option("--base-weight", eval_cfg.weights.base_weight)->capture_default_str();
  eval_cmd->add_option("--term-weight", eval_cfg.weights.term_weight)->capture_default_str();
  eval_cmd->add_option("--shift-cost", eval_cfg.ter.shift_cost)->capture_default_str();
  eval_cmd->add_option("--sub-rule", eval_sub_rule, "max | avg | ref")->capture_default_str();
  eval_cmd->add_option("--window-norm", eval_window_norm, "ref | hyp | max")
      ->capture_default_str();
  eval_cmd->add_flag("--case-sensitive-lemmas", eval_keep_case,
                     "do not lowercase the lemma-level search");
  eval_cmd->add_flag("--unique-occurrences", eval_unique,
                     "count repeated expected terms once per sentence");
  add_lemmatizer(eval_cmd);

  // combine
  std::vector<std::string> comb_systems;
  std::string comb_baseline, comb_terms, comb_out, comb_prov;
  bool comb_partial = false;
  auto* comb_cmd = app.add_subcommand("combine",
                                      "rank systems by BLEU and pick term-covering translations");
  comb_cmd->add_option("--system", comb_systems, "id=path:bleu (repeatable)")
      ->required()
      ->take_all();
  comb_cmd->add_option("--baseline", comb_baseline, "baseline system id")->required();
  comb_cmd->add_option("--terms", comb_terms, "expected-term sidecar");
  comb_cmd->add_option("--out", comb_out, "default: stdout");
  comb_cmd->add_option("--provenance", comb_prov, "line<TAB>system_id TSV");
  comb_cmd->add_flag("--prefer-partial", comb_partial,
                     "most-terms-covered tiebreak before the baseline fallback");
  add_lemmatizer(comb_cmd);

  // pipeline
  std::string pipeline_config;
  auto* pipe_cmd = app.add_subcommand("pipeline", "run clean -> pool -> sample -> annotate");
  pipe_cmd->add_option("config", pipeline_config, "INI-style pipeline config")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (clean_cmd->parsed())
      return cmd_clean(clean_input, filter, clean_out_source, clean_out_target,
                       clean_out_tsv);
    if (pool_cmd->parsed())
      return cmd_ngram_pool(pool_target, pool_out, pool_max_len, pool_reservoir,
                            pool_seed);
    if (sample_cmd->parsed())
      return cmd_sample(sample_input, sampler, sample_pool, sample_out, jobs);
    if (match_cmd->parsed())
      return cmd_match(match_source, match_tb, parse_lemmatizer_arg(lemmatizer_arg),
                       match_out);
    if (ann_cmd->parsed()) {
      if (ann_scheme == "suffix") ann_cfg.scheme = Scheme::Suffix;
      else if (ann_scheme == "factored") ann_cfg.scheme = Scheme::Factored;
      else if (ann_scheme == "replace") ann_cfg.scheme = Scheme::Replace;
      else throw std::runtime_error("--scheme must be suffix, factored or replace");
      if (ann_mode == "lemma") ann_cfg.mode = Level::Lemma;
      else if (ann_mode == "surface") ann_cfg.mode = Level::Surface;
      else throw std::runtime_error("--mode must be surface or lemma");
      VariantPolicy policy;
      if (ann_variants == "first") policy = VariantPolicy::FirstOnly;
      else if (ann_variants == "all") policy = VariantPolicy::All;
      else throw std::runtime_error("--variants must be first or all");
      return cmd_annotate(ann_source, ann_out, ann_cfg,
                          parse_lemmatizer_arg(lemmatizer_arg), ann_constraints,
                          ann_matches, ann_tb, policy);
    }
    if (eval_cmd->parsed()) {
      if (eval_sub_rule == "max") eval_cfg.ter.substitution = SubWeightRule::Max;
      else if (eval_sub_rule == "avg") eval_cfg.ter.substitution = SubWeightRule::Average;
      else if (eval_sub_rule == "ref") eval_cfg.ter.substitution = SubWeightRule::RefSide;
      else throw std::runtime_error("--sub-rule must be max, avg or ref");
      if (eval_window_norm == "ref") eval_cfg.window_norm = WindowNorm::Ref;
      else if (eval_window_norm == "hyp") eval_cfg.window_norm = WindowNorm::Hyp;
      else if (eval_window_norm == "max") eval_cfg.window_norm = WindowNorm::MaxSide;
      else throw std::runtime_error("--window-norm must be ref, hyp or max");
      eval_cfg.lowercase_lemma_search = !eval_keep_case;
      eval_cfg.count_duplicate_occurrences = !eval_unique;
      return cmd_evaluate(eval_src, eval_hyp, eval_ref, eval_terms, eval_report,
                          parse_lemmatizer_arg(lemmatizer_arg), eval_cfg);
    }
    if (comb_cmd->parsed())
      return cmd_combine(comb_systems, comb_baseline, comb_terms, comb_out,
                         comb_prov, parse_lemmatizer_arg(lemmatizer_arg),
                         comb_partial);
    if (pipe_cmd->parsed()) {
      PipelineConfig cfg = load_pipeline_config(pipeline_config);
      PipelineResult result = run_pipeline(cfg, jobs > 1 ? jobs : 0);
      std::cerr << "pipeline: read " << result.clean.read << " kept "
                << result.clean.kept << " out " << result.lines_out
                << " constraints " << result.variants.constraints
                << " manifest " << result.manifest_path << '\n';
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
