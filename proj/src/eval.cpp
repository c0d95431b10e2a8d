#include "extra/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

namespace extra {

namespace {

// Higher score first, then lower index.
struct Better {
  std::span<const double> scores;
  bool operator()(Index a, Index b) const {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  }
};

std::size_t count_hits(const RankedList& ranked, std::span<const Index> relevant, std::size_t n) {
  std::size_t hits = 0;
  const std::size_t depth = std::min(n, ranked.size());
  for (std::size_t r = 0; r < depth; ++r) {
    hits += std::binary_search(relevant.begin(), relevant.end(), ranked.explanations[r]);
  }
  return hits;
}

}  // namespace

RankedList select_top_n(std::span<const double> scores, std::span<const Index> candidates,
                        std::size_t n) {
  std::vector<Index> pool(candidates.begin(), candidates.end());
  const std::size_t k = std::min(n, pool.size());
  Better better{scores};
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end(),
                    better);
  pool.resize(k);
  RankedList out;
  out.scores.reserve(k);
  for (Index e : pool) out.scores.push_back(scores[e]);
  out.explanations = std::move(pool);
  return out;
}

RankedList select_top_n(std::span<const double> scores, std::size_t n) {
  std::vector<Index> all(scores.size());
  std::iota(all.begin(), all.end(), Index{0});
  return select_top_n(scores, all, n);
}

RankedList top_n_global(const Scorer& scorer, Index u, Index i, std::size_t n) {
  std::vector<double> scores(scorer.num_explanations());
  scorer.score_all(u, i, scores);
  RankedList out = select_top_n(scores, n);
  out.user = u;
  out.item = i;
  return out;
}

RankedList top_n_item(const Scorer& scorer, Index u, Index i,
                      std::span<const Index> item_candidates, std::size_t n) {
  std::vector<double> scores(scorer.num_explanations());
  scorer.score_all(u, i, scores);
  RankedList out = select_top_n(scores, item_candidates, n);
  out.user = u;
  out.item = i;
  return out;
}

double ndcg_at_n(const RankedList& ranked, std::span<const Index> relevant, std::size_t n) {
  if (relevant.empty()) throw UsageError("NDCG needs at least one relevant explanation");
  double dcg = 0.0;
  const std::size_t depth = std::min(n, ranked.size());
  for (std::size_t r = 0; r < depth; ++r) {
    if (std::binary_search(relevant.begin(), relevant.end(), ranked.explanations[r])) {
      dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
    }
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min(n, relevant.size());
  for (std::size_t r = 0; r < ideal; ++r) idcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

PrecisionRecallF1 precision_recall_f1_at_n(const RankedList& ranked,
                                           std::span<const Index> relevant, std::size_t n) {
  if (relevant.empty()) throw UsageError("precision/recall need at least one relevant explanation");
  if (n == 0) throw UsageError("N must be >= 1");
  const auto hits = static_cast<double>(count_hits(ranked, relevant, n));
  PrecisionRecallF1 m;
  m.precision = hits / static_cast<double>(n);
  m.recall = hits / static_cast<double>(relevant.size());
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

std::string to_string(RankingMode m) { return m == RankingMode::global ? "global" : "item"; }

RankingMode parse_ranking_mode(const std::string& s) {
  if (s == "global") return RankingMode::global;
  if (s == "item") return RankingMode::item;
  throw UsageError("unknown ranking mode '" + s + "' (expected global or item)");
}

MetricsReport evaluate(const Scorer& scorer, std::span<const Triplet> test,
                       const NeighborIndex& train_index, const EvalOptions& options) {
  if (test.empty()) throw DataError("empty test split");
  if (options.top_n == 0) throw UsageError("N must be >= 1");

  std::map<std::pair<Index, Index>, std::vector<Index>> truth;
  for (const auto& t : test) truth[{t.user, t.item}].push_back(t.explanation);
  struct Query {
    Index user, item;
    std::vector<Index> relevant;
  };
  std::vector<Query> queries;
  queries.reserve(truth.size());
  for (auto& [pair, exps] : truth) {
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
    queries.push_back({pair.first, pair.second, std::move(exps)});
  }

  struct PairMetrics {
    double ndcg, precision, recall, f1;
  };
  std::vector<PairMetrics> per_pair(queries.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> scores(scorer.num_explanations());
    for (std::size_t q = begin; q < end; ++q) {
      const Query& query = queries[q];
      scorer.score_all(query.user, query.item, scores);
      RankedList ranked =
          options.mode == RankingMode::global
              ? select_top_n(scores, options.top_n)
              : select_top_n(scores, train_index.item_explanations(query.item), options.top_n);
      auto prf = precision_recall_f1_at_n(ranked, query.relevant, options.top_n);
      per_pair[q] = {ndcg_at_n(ranked, query.relevant, options.top_n), prf.precision,
                     prf.recall, prf.f1};
    }
  };

  const auto n_threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.threads, 1)),
                                                 1, queries.size());
  if (n_threads == 1) {
    work(0, queries.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (queries.size() + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      std::size_t begin = t * chunk, end = std::min(queries.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  // Summed in query order so results do not depend on the thread count.
  MetricsReport report;
  for (const auto& m : per_pair) {
    report.ndcg += m.ndcg;
    report.precision += m.precision;
    report.recall += m.recall;
    report.f1 += m.f1;
  }
  const double scale = 100.0 / static_cast<double>(per_pair.size());
  report.ndcg *= scale;
  report.precision *= scale;
  report.recall *= scale;
  report.f1 *= scale;
  report.n_pairs = per_pair.size();
  return report;
}

MetricsReport average(std::span<const MetricsReport> reports) {
  MetricsReport out;
  if (reports.empty()) return out;
  for (const auto& r : reports) {
    out.ndcg += r.ndcg;
    out.precision += r.precision;
    out.recall += r.recall;
    out.f1 += r.f1;
    out.n_pairs += r.n_pairs;
  }
  const auto n = static_cast<double>(reports.size());
  out.ndcg /= n;
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  return out;
}

std::string format_metrics_table(std::span<const NamedReport> rows, std::size_t top_n) {
  std::ostringstream out;
  const std::string n = std::to_string(top_n);
  std::size_t name_width = 6;
  for (const auto& row : rows) name_width = std::max(name_width, row.method.size());
  out << std::left << std::setw(static_cast<int>(name_width)) << "" << std::right;
  for (const char* col : {"NDCG@", "Pre@", "Rec@", "F1@"}) {
    out << "  " << std::setw(9) << (col + n);
  }
  out << '\n';
  out << std::fixed << std::setprecision(3);
  for (const auto& row : rows) {
    out << std::left << std::setw(static_cast<int>(name_width)) << row.method << std::right;
    for (double v : {row.report.ndcg, row.report.precision, row.report.recall, row.report.f1}) {
      out << "  " << std::setw(9) << v;
    }
    out << '\n';
  }
  return out.str();
}

std::string format_metrics_kv(std::span<const NamedReport> rows, std::size_t top_n) {
  std::ostringstream out;
  out << std::setprecision(17);
  const std::string n = std::to_string(top_n);
  for (const auto& row : rows) {
    out << row.method << ".ndcg@" << n << " = " << row.report.ndcg << '\n'
        << row.method << ".precision@" << n << " = " << row.report.precision << '\n'
        << row.method << ".recall@" << n << " = " << row.report.recall << '\n'
        << row.method << ".f1@" << n << " = " << row.report.f1 << '\n'
        << row.method << ".pairs = " << row.report.n_pairs << '\n';
  }
  return out.str();
}

}  // namespace extra
