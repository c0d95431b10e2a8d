// Command-line front end: build, stats, split, train, eval, bench, rank.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "extra/pipeline.hpp"

namespace fs = std::filesystem;
using namespace extra;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

struct BuildOptions {
  fs::path input;
  fs::path out_dir;
  fs::path lexicon;
  fs::path pronouns;
  bool strict = false;
  GroupingConfig grouping;
  int show_top = 10;
};

struct SplitOptions {
  fs::path data;
  fs::path out_dir;
  double train_fraction = 0.7;
  int n_splits = 5;
  std::uint64_t seed = 1;
};

struct ModelOptions {
  std::string model = "pitf";
  TrainConfig train;
};

struct EvalCliOptions {
  std::size_t top_n = 10;
  std::string mode = "global";
  int threads = 1;
};

struct TrainCli {
  fs::path data, split_dir, checkpoint, loss_log;
  int split = 0;
  ModelOptions model;
};

struct EvalCli {
  fs::path data, split_dir, checkpoint, report;
  int split = 0;
  ModelOptions model;
  EvalCliOptions eval;
};

struct BenchCli {
  fs::path data, out_dir = "bench-results";
  std::vector<std::string> models = all_methods();
  SplitOptions split;
  ModelOptions model;
  EvalCliOptions eval;
};

struct RankCli {
  fs::path data, split_dir, checkpoint;
  int split = 0;
  std::string user, item;
  ModelOptions model;
  std::size_t top_n = 5;
};

void add_train_flags(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--factors", m.train.factors, "Latent factors d")->capture_default_str();
  cmd->add_option("--lambda", m.train.lambda, "L2 regularization")->capture_default_str();
  cmd->add_option("--lr", m.train.learning_rate, "SGD learning rate")->capture_default_str();
  cmd->add_option("--iters", m.train.iterations, "Training passes T")->capture_default_str();
  cmd->add_option("--seed", m.train.seed, "Init / sampling / RAND seed")->capture_default_str();
}

void add_eval_flags(CLI::App* cmd, EvalCliOptions& e) {
  cmd->add_option("--topn", e.top_n, "List length N")->capture_default_str();
  cmd->add_option("--mode", e.mode, "Candidate set: global or item")
      ->check(CLI::IsMember({"global", "item"}))
      ->capture_default_str();
  cmd->add_option("--threads", e.threads, "Evaluation threads")->capture_default_str();
}

EvalOptions to_eval(const EvalCliOptions& e) {
  EvalOptions out;
  out.top_n = e.top_n;
  out.mode = parse_ranking_mode(e.mode);
  out.threads = e.threads;
  return out;
}

// Config of the active subcommand in the same format --config reads.
void write_provenance(const CLI::App& app, const fs::path& path) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  const CLI::App& sub = *app.get_subcommands().front();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write provenance file " + path.string());
  out << "# extra " << kVersion << "\n"
      << "# rerun from the original working directory: extra --config " << path.string()
      << " " << sub.get_name() << "\n"
      << "[" << sub.get_name() << "]\n"
      << sub.config_to_str(true, false);
}

void check_split_index(int split) {
  if (split < 0) throw UsageError("--split must be >= 0");
}

// ---------------------------------------------------------------------------

int run_build(const CLI::App& app, const BuildOptions& o) {
  o.grouping.validate();
  ParseOptions parse;
  parse.on_malformed = o.strict ? OnMalformed::abort : OnMalformed::skip;
  parse.on_issue = [](const IngestIssue& issue) {
    std::cerr << "ingest: line " << issue.line << ": " << issue.message << '\n';
  };
  ParseReport corpus = read_corpus_file(o.input, parse);
  if (corpus.records.empty()) std::cerr << "warning: corpus has no valid records\n";

  const fs::path default_dir = PosLexicon::bundled_dir();
  PosLexicon lexicon = PosLexicon::load(o.lexicon.empty() ? default_dir / "lexicon.tsv" : o.lexicon,
                                        o.pronouns.empty() ? default_dir / "pronouns.txt" : o.pronouns);
  SentenceFilter filter(std::move(lexicon));

  BuildResult built = build_dataset(corpus.records, filter, o.grouping);
  emit_dataset(built.dataset, o.out_dir);
  write_provenance(app, o.out_dir / "provenance.ini");

  const auto& groups = built.grouping.groups;
  std::cout << "records:      " << corpus.records.size() << " (" << corpus.issues.size()
            << " rejected)\n"
            << "sentences:    " << built.n_sentences << '\n'
            << "candidates:   " << built.n_candidates << '\n'
            << "groups:       " << groups.size() << '\n'
            << "kept records: " << built.dataset.records().size() << '\n';

  std::vector<const ExplanationGroup*> ranked;
  for (const auto& g : groups) ranked.push_back(&g);
  std::stable_sort(ranked.begin(), ranked.end(), [](auto* a, auto* b) {
    return a->occurrence() > b->occurrence();
  });
  if (!ranked.empty()) {
    std::cout << "\nExplanation\tOccurrence\n";
    for (std::size_t k = 0; k < ranked.size() && k < static_cast<std::size_t>(o.show_top); ++k) {
      std::cout << built.sentence_text.at(ranked[k]->explanation_id) << '\t'
                << ranked[k]->occurrence() << '\n';
    }
  }
  return kOk;
}

int run_stats(const fs::path& data) {
  Dataset ds = load_dataset(data);
  std::cout << format_stats(compute_stats(ds));
  return kOk;
}

int run_split(const CLI::App& app, const SplitOptions& o) {
  Dataset ds = load_dataset(o.data);
  auto triplets = ds.triplets();
  auto splits = make_splits(triplets, ds.counts(), o.train_fraction, o.n_splits, o.seed);
  for (std::size_t k = 0; k < splits.size(); ++k) {
    write_split(splits[k], ds, o.out_dir, static_cast<int>(k));
    std::cout << "split" << k << ": train " << splits[k].train.size() << ", test "
              << splits[k].test.size() << ", realized train fraction " << std::fixed
              << std::setprecision(4) << splits[k].train_fraction() << '\n';
  }
  write_provenance(app, o.out_dir / "provenance.ini");
  return kOk;
}

int run_train(const CLI::App& app, const TrainCli& o) {
  check_split_index(o.split);
  Variant variant = parse_variant(o.model.model);
  Dataset ds = load_dataset(o.data);
  Split split = read_split(ds, o.split_dir, o.split);
  auto result = train_bpr(split.train, ds.counts(), variant, o.model.train,
                          [&](int it, double loss) {
                            if ((it + 1) % 50 == 0) {
                              std::cerr << "iter " << it + 1 << " loss " << loss << '\n';
                            }
                          });
  result.model.set_vocab_fingerprint(vocab_fingerprint(ds));
  result.model.save(o.checkpoint);
  if (!o.loss_log.empty()) {
    std::ofstream log(o.loss_log, std::ios::trunc);
    log << std::setprecision(17);
    for (std::size_t k = 0; k < result.loss_per_iteration.size(); ++k) {
      log << k + 1 << ' ' << result.loss_per_iteration[k] << '\n';
    }
  }
  fs::path prov = o.checkpoint;
  prov += ".provenance.ini";
  write_provenance(app, prov);
  std::cout << "wrote " << o.checkpoint.string() << " (final loss "
            << (result.loss_per_iteration.empty() ? 0.0 : result.loss_per_iteration.back())
            << ")\n";
  return kOk;
}

// Loads or builds the scorer for eval/rank.
ScorerBundle load_scorer(const ModelOptions& m, const fs::path& checkpoint, const Dataset& ds,
                         const std::optional<Split>& split) {
  if (m.model == "cd" || m.model == "pitf") {
    if (checkpoint.empty()) throw UsageError("--checkpoint is required for " + m.model);
    LatentModel model = LatentModel::load(checkpoint);
    if (model.variant() != parse_variant(m.model)) {
      throw UsageError("checkpoint holds a " + to_string(model.variant()) + " model");
    }
    auto c = model.counts();
    auto d = ds.counts();
    if (c.users != d.users || c.items != d.items || c.explanations != d.explanations ||
        (model.vocab_fingerprint() != 0 && model.vocab_fingerprint() != vocab_fingerprint(ds))) {
      throw DataError("checkpoint was trained on a different dataset");
    }
    ScorerBundle b;
    b.scorer = std::make_unique<LatentModel>(std::move(model));
    return b;
  }
  if ((m.model == "rucf" || m.model == "ricf") && !split) {
    throw UsageError("--split-dir is required for " + m.model);
  }
  std::vector<Triplet> none;
  return make_scorer(m.model, split ? std::span<const Triplet>(split->train) : none, ds.counts(),
                     m.train);
}

int run_eval(const CLI::App& app, const EvalCli& o) {
  check_split_index(o.split);
  Dataset ds = load_dataset(o.data);
  Split split = read_split(ds, o.split_dir, o.split);
  ScorerBundle bundle = load_scorer(o.model, o.checkpoint, ds, split);
  NeighborIndex train_index(split.train, ds.counts());
  EvalOptions eval = to_eval(o.eval);
  MetricsReport report = evaluate(*bundle.scorer, split.test, train_index, eval);
  std::vector<NamedReport> rows{{display_name(o.model.model), report}};
  std::cout << format_metrics_table(rows, eval.top_n);
  if (!o.report.empty()) {
    std::ofstream out(o.report, std::ios::trunc);
    out << format_metrics_kv(rows, eval.top_n);
    fs::path prov = o.report;
    prov += ".provenance.ini";
    write_provenance(app, prov);
  }
  return kOk;
}

int run_bench(const CLI::App& app, const BenchCli& o) {
  Dataset ds = load_dataset(o.data);
  auto triplets = ds.triplets();
  auto splits = make_splits(triplets, ds.counts(), o.split.train_fraction, o.split.n_splits,
                            o.split.seed);
  BenchOptions bench;
  bench.methods = o.models;
  bench.train = o.model.train;
  bench.eval = to_eval(o.eval);
  for (const auto& m : bench.methods) {
    if (std::find(all_methods().begin(), all_methods().end(), m) == all_methods().end()) {
      throw UsageError("unknown method '" + m + "'");
    }
  }
  BenchResult result = extra::run_bench(splits, ds.counts(), bench, &std::cerr);

  std::ostringstream tables;
  for (std::size_t s = 0; s < result.per_split.size(); ++s) {
    tables << "split " << s << " (train fraction " << std::fixed << std::setprecision(4)
           << splits[s].train_fraction() << ")\n"
           << format_metrics_table(result.per_split[s], bench.eval.top_n) << '\n';
  }
  tables << "mean over " << result.per_split.size() << " splits (%)\n"
         << format_metrics_table(result.mean, bench.eval.top_n);
  std::cout << tables.str();

  fs::create_directories(o.out_dir);
  std::ofstream(o.out_dir / "table.txt", std::ios::trunc) << tables.str();
  std::ofstream kv(o.out_dir / "metrics.txt", std::ios::trunc);
  kv << format_metrics_kv(result.mean, bench.eval.top_n);
  for (std::size_t s = 0; s < result.per_split.size(); ++s) {
    auto rows = result.per_split[s];
    for (auto& r : rows) r.method = "split" + std::to_string(s) + "." + r.method;
    kv << format_metrics_kv(rows, bench.eval.top_n);
  }
  write_provenance(app, o.out_dir / "provenance.ini");
  return kOk;
}

int run_rank(const RankCli& o) {
  Dataset ds = load_dataset(o.data);
  std::optional<Split> split;
  if (!o.split_dir.empty()) {
    check_split_index(o.split);
    split = read_split(ds, o.split_dir, o.split);
  }
  if (!ds.users().contains(o.user)) {
    throw DataError("unknown user '" + o.user + "'; expected a userID from IDs.txt such as '" +
                    (ds.users().size() ? ds.users().key(0) : std::string("?")) + "'");
  }
  if (!ds.items().contains(o.item)) {
    throw DataError("unknown item '" + o.item + "'; expected an itemID from IDs.txt such as '" +
                    (ds.items().size() ? ds.items().key(0) : std::string("?")) + "'");
  }
  const Index u = ds.users().at(o.user);
  const Index i = ds.items().at(o.item);
  ScorerBundle bundle = load_scorer(o.model, o.checkpoint, ds, split);

  std::set<Index> truth;
  if (split) {
    for (const auto& t : split->test) {
      if (t.user == u && t.item == i) truth.insert(t.explanation);
    }
  }
  const std::size_t n_exps = ds.counts().explanations;
  RankedList full = top_n_global(*bundle.scorer, u, i, n_exps);

  auto print = [&](std::size_t from, std::size_t to) {
    for (std::size_t r = from; r < to; ++r) {
      const Index e = full.explanations[r];
      std::cout << std::setw(6) << r + 1 << "  " << std::setw(12) << std::fixed << std::setprecision(6)
                << full.scores[r] << "  " << (truth.contains(e) ? '*' : ' ') << ' '
                << ds.explanation_text(e) << '\n';
    }
  };
  std::cout << display_name(o.model.model) << " ranking for user " << o.user << ", item "
            << o.item << " (" << truth.size() << " ground-truth explanations marked *)\n";
  if (o.top_n >= n_exps) {
    print(0, n_exps);
  } else {
    std::cout << "Top-" << o.top_n << ":\n";
    print(0, o.top_n);
    std::cout << "Bottom-" << o.top_n << ":\n";
    print(n_exps - o.top_n, n_exps);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explanation ranking dataset builder and benchmark"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "key = value config file; flags override it");
  app.require_subcommand(1);

  BuildOptions build;
  auto* cmd_build = app.add_subcommand("build", "Corpus -> IDs.txt + id2exp.txt");
  cmd_build->add_option("--input", build.input, "JSON-lines corpus (optionally gzip)")
      ->required()->check(CLI::ExistingFile);
  cmd_build->add_option("--out-dir", build.out_dir, "Dataset output directory")->required();
  cmd_build->add_option("--lexicon", build.lexicon, "word<TAB>tags lexicon (default: bundled)");
  cmd_build->add_option("--pronouns", build.pronouns, "Pronoun list (default: bundled)");
  cmd_build->add_flag("--strict", build.strict, "Abort on the first malformed line");
  cmd_build->add_option("--shingle-size", build.grouping.shingle_size)->capture_default_str();
  cmd_build->add_option("--threshold", build.grouping.threshold)->capture_default_str();
  cmd_build->add_option("--min-group-size", build.grouping.min_group_size,
                        "Groups need more members than this")->capture_default_str();
  cmd_build->add_option("--num-perm", build.grouping.num_permutations)->capture_default_str();
  cmd_build->add_option("--seed", build.grouping.seed)->capture_default_str();
  cmd_build->add_option("--threads", build.grouping.threads)->capture_default_str();
  cmd_build->add_option("--show-top", build.show_top, "Print this many top groups")
      ->capture_default_str();

  fs::path stats_dir;
  auto* cmd_stats = app.add_subcommand("stats", "Print dataset statistics");
  cmd_stats->add_option("--data", stats_dir, "Dataset directory")->required();

  SplitOptions split_opts;
  auto* cmd_split = app.add_subcommand("split", "Write coverage-constrained train/test splits");
  cmd_split->add_option("--data", split_opts.data, "Dataset directory")->required();
  cmd_split->add_option("--out-dir", split_opts.out_dir, "Split output directory")->required();
  cmd_split->add_option("--train-fraction", split_opts.train_fraction)->capture_default_str();
  cmd_split->add_option("--n-splits", split_opts.n_splits)->capture_default_str();
  cmd_split->add_option("--seed", split_opts.seed)->capture_default_str();

  TrainCli train;
  auto* cmd_train = app.add_subcommand("train", "Train a CD or PITF model with BPR");
  cmd_train->add_option("--data", train.data, "Dataset directory")->required();
  cmd_train->add_option("--split-dir", train.split_dir, "Directory of split files")->required();
  cmd_train->add_option("--split", train.split, "Split index")->capture_default_str();
  cmd_train->add_option("--model", train.model.model)
      ->check(CLI::IsMember({"cd", "pitf"}))->capture_default_str();
  cmd_train->add_option("--out,--checkpoint", train.checkpoint, "Checkpoint path")->required();
  cmd_train->add_option("--loss-log", train.loss_log, "Write per-iteration loss here");
  add_train_flags(cmd_train, train.model);

  EvalCli eval;
  auto* cmd_eval = app.add_subcommand("eval", "Evaluate one method on one split");
  cmd_eval->add_option("--data", eval.data, "Dataset directory")->required();
  cmd_eval->add_option("--split-dir", eval.split_dir, "Directory of split files")->required();
  cmd_eval->add_option("--split", eval.split, "Split index")->capture_default_str();
  cmd_eval->add_option("--model", eval.model.model)
      ->check(CLI::IsMember(all_methods()))->capture_default_str();
  cmd_eval->add_option("--checkpoint", eval.checkpoint, "Model file for cd/pitf");
  cmd_eval->add_option("--report", eval.report, "Write key = value metrics here");
  cmd_eval->add_option("--seed", eval.model.train.seed, "RAND seed")->capture_default_str();
  add_eval_flags(cmd_eval, eval.eval);

  BenchCli bench;
  auto* cmd_bench = app.add_subcommand("bench", "Split, train and evaluate every method");
  cmd_bench->add_option("--data", bench.data, "Dataset directory")->required();
  cmd_bench->add_option("--out-dir", bench.out_dir, "Report directory")->capture_default_str();
  cmd_bench->add_option("--model", bench.models, "Methods to run (repeatable)")
      ->check(CLI::IsMember(all_methods()))->capture_default_str();
  cmd_bench->add_option("--train-fraction", bench.split.train_fraction)->capture_default_str();
  cmd_bench->add_option("--n-splits", bench.split.n_splits)->capture_default_str();
  cmd_bench->add_option("--split-seed", bench.split.seed)->capture_default_str();
  add_train_flags(cmd_bench, bench.model);
  add_eval_flags(cmd_bench, bench.eval);

  RankCli rank;
  auto* cmd_rank = app.add_subcommand("rank", "Print top-N and bottom-N explanations for a pair");
  cmd_rank->add_option("--data", rank.data, "Dataset directory")->required();
  cmd_rank->add_option("--user", rank.user, "userID")->required();
  cmd_rank->add_option("--item", rank.item, "itemID")->required();
  cmd_rank->add_option("--model", rank.model.model)
      ->check(CLI::IsMember(all_methods()))->capture_default_str();
  cmd_rank->add_option("--checkpoint", rank.checkpoint, "Model file for cd/pitf");
  cmd_rank->add_option("--split-dir", rank.split_dir, "Split files (ground truth, CF neighbors)");
  cmd_rank->add_option("--split", rank.split, "Split index")->capture_default_str();
  cmd_rank->add_option("--topn", rank.top_n, "List length N")->capture_default_str();
  cmd_rank->add_option("--seed", rank.model.train.seed, "RAND seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (*cmd_build) return run_build(app, build);
    if (*cmd_stats) return run_stats(stats_dir);
    if (*cmd_split) return run_split(app, split_opts);
    if (*cmd_train) return run_train(app, train);
    if (*cmd_eval) return run_eval(app, eval);
    if (*cmd_bench) return run_bench(app, bench);
    if (*cmd_rank) return run_rank(rank);
  } catch (const UsageError& e) {
    std::cerr << stage << ": usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    std::cerr << stage << ": numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << stage << ": data error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
