// Command-line front end: predict / eval / ablate / synth / report.
// Exit codes: 0 success, 1 runtime failure, 2 usage or validation problem.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpalign/mpalign.hpp"

namespace fs = std::filesystem;
using namespace mpalign;

namespace {

std::vector<EditionId> parse_editions(const std::vector<std::string>& items) {
  std::vector<EditionId> out;
  out.reserve(items.size());
  for (const std::string& s : items) out.push_back(parse_edition(s));
  return out;
}

EditionPair parse_pair(const std::vector<std::string>& items) {
  if (items.size() != 2)
    fail_config("expected exactly two editions, e.g. --target eng-kjv,fra-lsg");
  return EditionPair{parse_edition(items[0]), parse_edition(items[1])};
}

// Collects every pairwise alignment file found in `dir` for the edition set,
// accepting either filename orientation.
PairAlignments load_initial(const fs::path& dir,
                            const std::vector<EditionId>& editions,
                            const Corpus& corpus) {
  if (!fs::is_directory(dir))
    fail_config("alignment directory not found: " + dir.string());
  std::vector<EditionId> sorted(editions);
  std::sort(sorted.begin(), sorted.end());
  PairAlignments initial;
  for (std::size_t a = 0; a < sorted.size(); ++a)
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      EditionPair pair{sorted[a], sorted[b]};
      if (auto loaded = load_pair_alignments(dir, pair, &corpus))
        initial.emplace(pair, std::move(*loaded));
    }
  if (initial.empty())
    fail_config("no pairwise alignment files (<A>__<B>.align) found in " +
                dir.string());
  return initial;
}

VerseAlignments load_baseline(const std::string& explicit_path,
                              const fs::path& dir, const EditionPair& target,
                              const Corpus& corpus) {
  if (!explicit_path.empty()) {
    if (!fs::exists(explicit_path))
      fail_config("baseline alignment file not found: " + explicit_path);
    return load_alignments(explicit_path, target, &corpus);
  }
  if (auto loaded = load_pair_alignments(dir, target, &corpus))
    return *loaded;
  fail_config("no baseline alignment for " + target.str() + ": tried " +
              (dir / (target.str() + ".align")).string() + " and " +
              (dir / (target.flipped().str() + ".align")).string());
}

struct PipelineFlags {
  std::string method = "adad";
  double r_max = 5.0;
  double r_min = 1.0;
  double tau = -1.0;  // <0: method default
  std::string tie_break = "lowest-index";
  std::string negative_sampling;  // "", "on", "off"
  bool same_language_negatives = false;
  std::size_t nmf_rank = NmfConfig{}.rank;
  std::size_t nmf_epochs = NmfConfig{}.epochs;
  double nmf_lambda = NmfConfig{}.lambda;
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--method", method, "prediction method")
        ->check(CLI::IsMember({"adad", "wadad", "nmf"}));
    cmd->add_option("--rmax", r_max, "rating for aligned cells");
    cmd->add_option("--rmin", r_min, "rating for sampled negatives");
    cmd->add_option("--tau", tau,
                    "extraction threshold; kept edges score strictly above "
                    "it (default: 0 for adad/wadad, rating midpoint for nmf)");
    cmd->add_option("--tie-break", tie_break, "argmax tie handling")
        ->check(CLI::IsMember({"lowest-index", "drop-ties"}));
    cmd->add_option("--negative-sampling", negative_sampling,
                    "override the per-method default")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_flag("--same-language-negatives", same_language_negatives,
                  "also sample negatives within the source edition");
    cmd->add_option("--nmf-rank", nmf_rank, "factorization rank");
    cmd->add_option("--nmf-epochs", nmf_epochs, "factorization epochs");
    cmd->add_option("--nmf-lambda", nmf_lambda, "Tikhonov weight");
    cmd->add_option("--seed", seed, "root seed; all output is reproducible");
    cmd->add_option("--jobs", jobs, "worker threads over verses");
  }

  PipelineConfig to_config() const {
    PipelineConfig cfg;
    auto m = parse_method(method);
    if (!m) fail_config("unknown method " + method);
    cfg.method = *m;
    cfg.scale = RatingScale{r_max, r_min};
    if (!negative_sampling.empty())
      cfg.negative_sampling = negative_sampling == "on";
    cfg.same_language_negatives = same_language_negatives;
    cfg.nmf.rank = nmf_rank;
    cfg.nmf.epochs = nmf_epochs;
    cfg.nmf.lambda = nmf_lambda;
    if (tau >= 0.0) cfg.extraction.min_score = tau;
    cfg.extraction.tie_break = tie_break == "drop-ties"
                                   ? TieBreak::drop_ties
                                   : TieBreak::lowest_index;
    cfg.seed = seed;
    cfg.jobs = jobs;
    return cfg;
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// Expands "--config FILE" into ordinary flags: every "key=value" line
// becomes "--key=value" unless --key was already given, so command-line
// flags always win over the file.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  std::ifstream in(config_path);
  if (!in) fail_config("config file not found: " + config_path);

  auto given = [&](const std::string& flag) {
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      fail_config(config_path + ":" + std::to_string(lineno) +
                  ": expected key=value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      fail_config(config_path + ":" + std::to_string(lineno) + ": empty key");
    if (!given("--" + key)) args.push_back("--" + key + "=" + value);
  }
  return args;
}

void write_provenance(const VerseAlignments& merged, const fs::path& file,
                      const std::string& method) {
  std::ofstream out(file);
  if (!out) fail_io("cannot write " + file.string());
  out << "verse_id\tsource\ttarget\tscore\tmethod\n";
  for (const auto& [verse_id, set] : merged)
    for (const auto& [link, data] : set.edges) {
      if (!data.predicted) continue;
      out << verse_id << '\t' << link.first << '\t' << link.second << '\t';
      if (data.score) out << format_score(*data.score);
      out << '\t' << method << '\n';
    }
}

SentenceGraph rebuild_verse_graph(const MultiSentence& sentence,
                                  const PairAlignments& initial,
                                  const PipelineConfig& cfg) {
  std::vector<const AlignmentSet*> sets;
  for (const auto& [pair, verses] : initial) {
    if (!sentence.has(pair.first) || !sentence.has(pair.second)) continue;
    auto it = verses.find(sentence.verse_id);
    if (it != verses.end()) sets.push_back(&it->second);
  }
  GraphOptions gopts;
  gopts.mode = graph_mode_for(cfg.method);
  gopts.scale = cfg.scale;
  gopts.negative_sampling =
      cfg.negative_sampling.value_or(cfg.method == Method::nmf);
  gopts.same_language_negatives = cfg.same_language_negatives;
  gopts.seed = derive_seed(cfg.seed, "graph-negatives", sentence.verse_id);
  return build_graph(sentence, sets, gopts);
}

// Rebuilds each verse graph with the pipeline's seeds and dumps it as TSV.
void dump_graphs(const Corpus& corpus, const PairAlignments& initial,
                 const EditionPair& target, const PipelineConfig& cfg,
                 const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& [verse_id, sentence] : corpus) {
    if (!sentence.has(target.first) || !sentence.has(target.second)) continue;
    SentenceGraph graph = rebuild_verse_graph(sentence, initial, cfg);
    std::ofstream out(dir / (verse_id + ".tsv"));
    if (!out) fail_io("cannot write graph dump for verse " + verse_id);
    graph.dump(out);
  }
}

void write_matrix(const DenseMatrix& m, const fs::path& file) {
  std::ofstream out(file);
  if (!out) fail_io("cannot write " + file.string());
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out << '\t';
      out << format_score(m.at(r, c));
    }
    out << '\n';
  }
}

// Debug dump of the trained factors, one <verse>.T.tsv / <verse>.V.tsv pair
// per verse that the nmf pipeline factorized.
void dump_factors(const Corpus& corpus, const PairAlignments& initial,
                  const EditionPair& target, const PipelineConfig& cfg,
                  const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& [verse_id, sentence] : corpus) {
    if (!sentence.has(target.first) || !sentence.has(target.second)) continue;
    SentenceGraph graph = rebuild_verse_graph(sentence, initial, cfg);
    NmfConfig nmf_cfg = cfg.nmf;
    nmf_cfg.seed = derive_seed(cfg.seed, "nmf-init", verse_id);
    try {
      FactorPair factors = factorize(graph, nmf_cfg);
      write_matrix(factors.T, dir / (verse_id + ".T.tsv"));
      write_matrix(factors.V, dir / (verse_id + ".V.tsv"));
    } catch (const Error&) {
      // verses the pipeline fell back on have no factors to dump
    }
  }
}

void print_metric_rows(std::ostream& os, const EvalResult& r) {
  os << "precision\t" << format_score(r.precision) << "\n"
     << "recall\t" << format_score(r.recall) << "\n"
     << "f1\t" << format_score(r.f1) << "\n"
     << "aer\t" << format_score(r.aer) << "\n"
     << "hyp_edges\t" << r.hyp << "\n"
     << "sure_edges\t" << r.sure << "\n"
     << "possible_edges\t" << r.possible << "\n"
     << "hyp_and_sure\t" << r.hyp_and_sure << "\n"
     << "hyp_and_possible\t" << r.hyp_and_possible << "\n";
}

void print_strata(std::ostream& os, const StratumReport& report) {
  os << "bin_low\tbin_high\tverses\tbaseline_f1\tmerged_f1\tdelta_f1\n";
  for (const Stratum& st : report.strata)
    os << format_score(st.lo) << '\t' << format_score(st.hi) << '\t'
       << st.count << '\t' << format_score(st.baseline_mean_f1) << '\t'
       << format_score(st.merged_mean_f1) << '\t'
       << format_score(st.improvement()) << '\n';
}

const EditionPair kEvalPair{{"src", "hyp"}, {"tgt", "hyp"}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiparallel word alignment toolkit"};
  app.require_subcommand(1);

  // predict
  auto* predict_cmd = app.add_subcommand(
      "predict", "predict alignment edges and merge them into a baseline");
  std::string p_corpus, p_alignments, p_baseline, p_output, p_provenance,
      p_dump;
  std::vector<std::string> p_editions, p_target;
  PipelineFlags p_flags;
  predict_cmd->add_option("--corpus", p_corpus, "corpus directory")->required();
  predict_cmd
      ->add_option("--editions", p_editions,
                   "editions (<lang>-<edition>, comma separated)")
      ->required()
      ->delimiter(',');
  predict_cmd->add_option("--target", p_target, "target pair A,B")
      ->required()
      ->delimiter(',');
  predict_cmd
      ->add_option("--alignments", p_alignments,
                   "directory of pairwise <A>__<B>.align files (graph input)")
      ->required();
  predict_cmd->add_option(
      "--baseline", p_baseline,
      "merge-target alignment file (default: the target pair's file in "
      "--alignments)");
  predict_cmd->add_option("--output", p_output, "merged alignment file")
      ->required();
  predict_cmd->add_option("--provenance", p_provenance,
                          "TSV of edges added by prediction");
  predict_cmd->add_option("--dump-graphs", p_dump,
                          "directory for per-verse graph TSV dumps");
  std::string p_dump_factors;
  predict_cmd->add_option("--dump-factors", p_dump_factors,
                          "directory for per-verse factor dumps (nmf only)");
  p_flags.attach(predict_cmd);
  std::string p_config;
  predict_cmd->add_option("--config", p_config,
                          "key=value config file; flags win");

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "score a hypothesis against a gold standard");
  std::string e_hyp, e_gold, e_per_verse, e_stratify;
  int e_base = 0;
  eval_cmd->add_option("--hypothesis", e_hyp, "alignment file")->required();
  eval_cmd->add_option("--gold", e_gold, "gold file")->required();
  eval_cmd->add_option("--per-verse", e_per_verse, "write per-verse TSV here");
  eval_cmd->add_option("--stratify", e_stratify,
                       "baseline alignment file; adds a difficulty table");
  eval_cmd->add_option("--gold-index-base", e_base, "0 or 1")
      ->check(CLI::IsMember({0, 1}));
  std::string e_config;
  eval_cmd->add_option("--config", e_config,
                       "key=value config file; flags win");

  // ablate
  auto* ablate_cmd = app.add_subcommand(
      "ablate", "measure the value of auxiliary languages for a target pair");
  std::string a_corpus, a_alignments, a_baseline, a_gold, a_schedule = "sizes",
              a_output;
  std::vector<std::string> a_target, a_pool, a_sizes;
  bool a_allow_target_languages = false;
  int a_gold_base = 0;
  PipelineFlags a_flags;
  ablate_cmd->add_option("--corpus", a_corpus, "corpus directory")->required();
  ablate_cmd->add_option("--target", a_target, "target pair A,B")
      ->required()
      ->delimiter(',');
  ablate_cmd->add_option("--pool", a_pool, "auxiliary editions")
      ->required()
      ->delimiter(',');
  ablate_cmd->add_option("--alignments", a_alignments, "pairwise .align dir")
      ->required();
  ablate_cmd->add_option("--baseline", a_baseline, "merge-target file");
  ablate_cmd->add_option("--gold", a_gold, "gold file for the target pair")
      ->required();
  ablate_cmd->add_option("--schedule", a_schedule, "sizes or leave-one-in")
      ->check(CLI::IsMember({"sizes", "leave-one-in"}));
  ablate_cmd->add_option("--sizes", a_sizes, "auxiliary-set sizes, e.g. 0,2,5")
      ->delimiter(',');
  ablate_cmd->add_flag("--allow-target-languages", a_allow_target_languages,
                       "permit pool editions in the target languages");
  ablate_cmd->add_option("--gold-index-base", a_gold_base, "0 or 1")
      ->check(CLI::IsMember({0, 1}));
  ablate_cmd->add_option("--output", a_output, "TSV path (default stdout)");
  a_flags.attach(ablate_cmd);
  std::string a_config;
  ablate_cmd->add_option("--config", a_config,
                         "key=value config file; flags win");

  // synth
  auto* synth_cmd = app.add_subcommand(
      "synth", "generate a synthetic corpus with gold and corrupted alignments");
  std::string s_out, s_prefix = "v";
  SynthConfig s_cfg;
  synth_cmd->add_option("--out", s_out, "output directory")->required();
  synth_cmd->add_option("--languages", s_cfg.n_languages,
                        "number of languages (first two form the target pair)");
  synth_cmd->add_option("--verses", s_cfg.n_verses, "number of verses");
  synth_cmd->add_option("--concepts", s_cfg.concepts_per_verse,
                        "concepts per verse");
  synth_cmd->add_option("--coverage", s_cfg.coverage,
                        "probability a concept surfaces in a language");
  synth_cmd->add_option("--p-drop", s_cfg.p_drop,
                        "drop rate on target-pair gold edges");
  synth_cmd->add_option("--p-aux", s_cfg.p_aux, "drop rate on other pairs");
  synth_cmd->add_option("--noise", s_cfg.noise_rate,
                        "Poisson rate of spurious edges per verse and pair");
  synth_cmd->add_option("--fertility", s_cfg.fertility,
                        "tokens per realized concept");
  synth_cmd->add_option("--seed", s_cfg.seed, "root seed");
  synth_cmd->add_option("--verse-prefix", s_prefix, "verse id prefix");
  std::string s_config;
  synth_cmd->add_option("--config", s_config,
                        "key=value config file; flags win");

  // report
  auto* report_cmd = app.add_subcommand(
      "report", "compare a merged alignment with its baseline against gold");
  std::string r_gold, r_baseline, r_merged;
  int r_base = 0;
  report_cmd->add_option("--gold", r_gold, "gold file")->required();
  report_cmd->add_option("--baseline", r_baseline, "baseline alignment file")
      ->required();
  report_cmd->add_option("--merged", r_merged, "merged alignment file")
      ->required();
  report_cmd->add_option("--gold-index-base", r_base, "0 or 1")
      ->check(CLI::IsMember({0, 1}));

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (predict_cmd->parsed()) {
      auto editions = parse_editions(p_editions);
      EditionPair target = parse_pair(p_target);
      bool first_ok = false, second_ok = false;
      for (const EditionId& e : editions) {
        first_ok |= e == target.first;
        second_ok |= e == target.second;
      }
      if (!first_ok || !second_ok)
        fail_config("target pair must appear in --editions");
      PipelineConfig cfg = p_flags.to_config();
      if (!p_dump_factors.empty() && cfg.method != Method::nmf)
        fail_config("--dump-factors requires --method nmf");

      Corpus corpus = load_corpus(p_corpus, editions);
      PairAlignments initial = load_initial(p_alignments, editions, corpus);
      VerseAlignments baseline =
          load_baseline(p_baseline, p_alignments, target, corpus);

      PipelineResult result =
          run_pipeline(corpus, initial, target, baseline, cfg);
      print_warnings(result.warnings);
      write_alignments(result.merged, p_output);
      if (!p_provenance.empty())
        write_provenance(result.merged, p_provenance, p_flags.method);
      if (!p_dump.empty()) dump_graphs(corpus, initial, target, cfg, p_dump);
      if (!p_dump_factors.empty())
        dump_factors(corpus, initial, target, cfg, p_dump_factors);
      std::cerr << "predicted " << result.predicted_verses
                << " verses, passed through " << result.fallback_verses
                << ", wrote " << p_output << "\n";
      return 0;
    }

    if (eval_cmd->parsed()) {
      VerseAlignments hyp = load_alignments(e_hyp, kEvalPair);
      GoldMap gold = load_gold(e_gold, kEvalPair, nullptr, e_base);
      std::vector<std::string> warnings;
      Evaluation eval = evaluate(hyp, gold, &warnings);
      print_warnings(warnings);
      std::cout << "metric\tvalue\n";
      print_metric_rows(std::cout, eval.overall);
      std::cout << "verses\t" << eval.per_verse.size() << "\n";
      if (!e_per_verse.empty()) {
        std::ofstream out(e_per_verse);
        if (!out) fail_io("cannot write " + e_per_verse);
        out << "verse_id\tprecision\trecall\tf1\taer\n";
        for (const auto& [verse_id, r] : eval.per_verse)
          out << verse_id << '\t' << format_score(r.precision) << '\t'
              << format_score(r.recall) << '\t' << format_score(r.f1) << '\t'
              << format_score(r.aer) << '\n';
      }
      if (!e_stratify.empty()) {
        VerseAlignments base = load_alignments(e_stratify, kEvalPair);
        Evaluation base_eval = evaluate(base, gold, &warnings);
        StratumReport report = stratify(base_eval.per_verse, eval.per_verse);
        std::cout << "\n";
        print_strata(std::cout, report);
      }
      return 0;
    }

    if (ablate_cmd->parsed()) {
      EditionPair target = parse_pair(a_target);
      std::vector<EditionId> pool = parse_editions(a_pool);
      std::vector<EditionId> editions = pool;
      editions.push_back(target.first);
      editions.push_back(target.second);

      AblationConfig cfg;
      cfg.mode = a_schedule == "sizes" ? AblationMode::sizes
                                       : AblationMode::leave_one_in;
      for (const std::string& s : a_sizes)
        cfg.sizes.push_back(std::stoul(s));
      if (cfg.mode == AblationMode::sizes && cfg.sizes.empty())
        fail_config("sizes schedule needs --sizes");
      cfg.allow_target_languages = a_allow_target_languages;
      cfg.seed = a_flags.seed;
      cfg.pipeline = a_flags.to_config();

      Corpus corpus = load_corpus(a_corpus, editions);
      PairAlignments initial = load_initial(a_alignments, editions, corpus);
      VerseAlignments baseline =
          load_baseline(a_baseline, a_alignments, target, corpus);
      if (!fs::exists(a_gold)) fail_config("gold file not found: " + a_gold);
      GoldMap gold = load_gold(a_gold, target, &corpus, a_gold_base);

      auto rows = language_ablation(corpus, initial, target, baseline, gold,
                                    pool, cfg);
      std::ofstream file;
      std::ostream* os = &std::cout;
      if (!a_output.empty() && a_output != "-") {
        file.open(a_output);
        if (!file) fail_io("cannot write " + a_output);
        os = &file;
      }
      *os << (cfg.mode == AblationMode::sizes ? "n_languages\tf1"
                                              : "language\tdelta_f1")
          << "\n";
      for (const auto& row : rows)
        *os << row.label << '\t' << format_score(row.value) << '\n';
      return 0;
    }

    if (synth_cmd->parsed()) {
      s_cfg.verse_prefix = s_prefix;
      SynthInstance inst = generate(s_cfg);
      write_instance(inst, s_out);
      std::cerr << "wrote " << inst.corpus.size() << " verses in "
                << inst.editions.size() << " editions to " << s_out
                << " (target pair " << inst.target.str() << ")\n";
      return 0;
    }

    if (report_cmd->parsed()) {
      GoldMap gold = load_gold(r_gold, kEvalPair, nullptr, r_base);
      std::vector<std::string> warnings;
      Evaluation base = evaluate(load_alignments(r_baseline, kEvalPair), gold,
                                 &warnings);
      Evaluation merged = evaluate(load_alignments(r_merged, kEvalPair), gold,
                                   &warnings);
      print_warnings(warnings);
      std::cout << "metric\tbaseline\tmerged\tdelta\n";
      const EvalResult& b = base.overall;
      const EvalResult& m = merged.overall;
      auto row = [&](const char* name, double bv, double mv) {
        std::cout << name << '\t' << format_score(bv) << '\t'
                  << format_score(mv) << '\t' << format_score(mv - bv) << '\n';
      };
      row("precision", b.precision, m.precision);
      row("recall", b.recall, m.recall);
      row("f1", b.f1, m.f1);
      row("aer", b.aer, m.aer);
      std::cout << "\n";
      print_strata(std::cout, stratify(base.per_verse, merged.per_verse));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::config ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
