#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "extra/dataset.hpp"
#include "extra/rankers.hpp"

namespace extra {

/// Top-N explanations for one pair, best first. Ties go to the lower
/// explanation index.
struct RankedList {
  Index user = 0;
  Index item = 0;
  std::vector<Index> explanations;
  std::vector<double> scores;

  std::size_t size() const { return explanations.size(); }
};

/// Selects the n best of `candidates` from a dense score vector indexed by
/// explanation.
RankedList select_top_n(std::span<const double> scores, std::span<const Index> candidates,
                        std::size_t n);
/// Same over every explanation.
RankedList select_top_n(std::span<const double> scores, std::size_t n);

/// Ranks all explanations.
RankedList top_n_global(const Scorer& scorer, Index u, Index i, std::size_t n);
/// Ranks only the item's own explanations (taken from training data).
RankedList top_n_item(const Scorer& scorer, Index u, Index i,
                      std::span<const Index> item_candidates, std::size_t n);

/// Binary-gain NDCG with 1/log2(rank + 1) discounts; the ideal DCG spans
/// min(|relevant|, n) positions. `relevant` must be sorted and non-empty.
double ndcg_at_n(const RankedList& ranked, std::span<const Index> relevant, std::size_t n);

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// precision = hits / n, recall = hits / |relevant|, f1 their harmonic mean
/// (0 when both are 0).
PrecisionRecallF1 precision_recall_f1_at_n(const RankedList& ranked,
                                           std::span<const Index> relevant, std::size_t n);

enum class RankingMode { global, item };

std::string to_string(RankingMode m);
RankingMode parse_ranking_mode(const std::string& s);

/// Means over test pairs, in percent. F1 is averaged per pair.
struct MetricsReport {
  double ndcg = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_pairs = 0;
};

struct EvalOptions {
  RankingMode mode = RankingMode::global;
  std::size_t top_n = 10;
  int threads = 1;
};

/// Every distinct (u, i) in `test` is one query whose ground truth is the
/// union of its test explanations. `train_index` supplies the item-level
/// candidate sets. Throws DataError when `test` is empty.
MetricsReport evaluate(const Scorer& scorer, std::span<const Triplet> test,
                       const NeighborIndex& train_index, const EvalOptions& options = {});

/// Element-wise mean of several reports (n_pairs summed).
MetricsReport average(std::span<const MetricsReport> reports);

struct NamedReport {
  std::string method;
  MetricsReport report;
};

/// Aligned text table with NDCG@N, Pre@N, Rec@N and F1@N columns.
std::string format_metrics_table(std::span<const NamedReport> rows, std::size_t top_n);

/// `method.metric = value` lines.
std::string format_metrics_kv(std::span<const NamedReport> rows, std::size_t top_n);

}  // namespace extra
