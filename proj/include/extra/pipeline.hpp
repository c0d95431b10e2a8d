#pragma once

#include <cstdint>
#include <map>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extra/corpus.hpp"
#include "extra/dataset.hpp"
#include "extra/eval.hpp"
#include "extra/filter.hpp"
#include "extra/grouping.hpp"
#include "extra/rankers.hpp"

namespace extra {

inline constexpr std::string_view kVersion = "1.0.0";

struct BuildResult {
  Dataset dataset;
  GroupingResult grouping;
  std::size_t n_sentences = 0;
  std::size_t n_candidates = 0;
  /// Text of every candidate sentence, for reporting.
  std::map<SentenceId, std::string> sentence_text;
};

/// Splits records into sentences, keeps filter candidates, groups them and
/// links every record to the explanation groups its sentences fell into.
/// Records without any grouped sentence are dropped.
BuildResult build_dataset(std::span<const RawRecord> records, const SentenceFilter& filter,
                          const GroupingConfig& config);

/// Hash of the dataset's user, item and explanation vocabularies in index
/// order; stored in checkpoints to catch mismatched datasets.
std::uint64_t vocab_fingerprint(const Dataset& dataset);

inline const std::vector<std::string>& all_methods() {
  static const std::vector<std::string> methods = {"rand", "rucf", "ricf", "cd", "pitf"};
  return methods;
}

/// Builds a scorer for `method` on one training split. Latent models are
/// trained with `train`; `progress` sees their per-iteration loss.
struct ScorerBundle {
  std::unique_ptr<NeighborIndex> index;
  std::unique_ptr<Scorer> scorer;
  std::vector<double> loss_trajectory;
};
ScorerBundle make_scorer(const std::string& method, std::span<const Triplet> train_split,
                         const EntityCounts& counts, const TrainConfig& train,
                         const TrainProgress& progress = {});

/// Upper-case display name (RAND, RUCF, ...).
std::string display_name(const std::string& method);

struct BenchOptions {
  std::vector<std::string> methods = all_methods();
  TrainConfig train;
  EvalOptions eval;
};

struct BenchResult {
  /// per_split[s][m] is method m on split s.
  std::vector<std::vector<NamedReport>> per_split;
  std::vector<NamedReport> mean;
};

/// Trains and evaluates every method on every split. Progress lines go to
/// `log` when non-null.
BenchResult run_bench(std::span<const Split> splits, const EntityCounts& counts,
                      const BenchOptions& options, std::ostream* log = nullptr);

std::string format_stats(const DatasetStats& stats);

}  // namespace extra
