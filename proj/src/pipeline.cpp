#include "extra/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace extra {

BuildResult build_dataset(std::span<const RawRecord> records, const SentenceFilter& filter,
                          const GroupingConfig& config) {
  BuildResult out;
  std::vector<Sentence> sentences = extract_sentences(records);
  out.n_sentences = sentences.size();

  std::vector<Sentence> candidates;
  for (auto& s : sentences) {
    if (filter.is_candidate(s.text)) candidates.push_back(s);
  }
  out.n_candidates = candidates.size();
  out.grouping = group_sentences(candidates, config);
  for (const auto& s : candidates) out.sentence_text.emplace(s.id, s.text);

  // Candidates are in record order already.
  std::size_t next = 0;
  for (std::size_t r = 0; r < records.size(); ++r) {
    std::vector<ExplanationRef> refs;
    for (; next < candidates.size() && candidates[next].record_index == r; ++next) {
      auto it = out.grouping.assignment.find(candidates[next].id);
      if (it != out.grouping.assignment.end()) refs.push_back({it->second, it->first});
    }
    if (refs.empty()) continue;
    for (const auto& ref : refs) {
      out.dataset.set_text(ref.exp_id, out.sentence_text.at(ref.exp_id));
      out.dataset.set_text(ref.sen_id, out.sentence_text.at(ref.sen_id));
    }
    const RawRecord& rec = records[r];
    out.dataset.add_record(rec.user_id, rec.item_id, rec.rating, rec.timestamp, std::move(refs));
  }
  return out;
}

std::uint64_t vocab_fingerprint(const Dataset& dataset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  for (const auto& u : dataset.users().keys()) mix(u);
  mix("|");
  for (const auto& i : dataset.items().keys()) mix(i);
  mix("|");
  for (ExpId e : dataset.explanations().keys()) mix(std::to_string(e));
  return h;
}

std::string display_name(const std::string& method) {
  std::string out = method;
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

ScorerBundle make_scorer(const std::string& method, std::span<const Triplet> train_split,
                         const EntityCounts& counts, const TrainConfig& train,
                         const TrainProgress& progress) {
  ScorerBundle b;
  if (method == "rand") {
    b.scorer = std::make_unique<RandScorer>(counts.explanations, train.seed);
  } else if (method == "rucf") {
    b.index = std::make_unique<NeighborIndex>(train_split, counts);
    b.scorer = std::make_unique<RucfScorer>(*b.index);
  } else if (method == "ricf") {
    b.index = std::make_unique<NeighborIndex>(train_split, counts);
    b.scorer = std::make_unique<RicfScorer>(*b.index);
  } else if (method == "cd" || method == "pitf") {
    auto result = train_bpr(train_split, counts, parse_variant(method), train, progress);
    b.loss_trajectory = std::move(result.loss_per_iteration);
    b.scorer = std::make_unique<LatentModel>(std::move(result.model));
  } else {
    throw UsageError("unknown method '" + method + "' (expected rand, rucf, ricf, cd or pitf)");
  }
  return b;
}

BenchResult run_bench(std::span<const Split> splits, const EntityCounts& counts,
                      const BenchOptions& options, std::ostream* log) {
  BenchResult result;
  for (std::size_t s = 0; s < splits.size(); ++s) {
    const Split& split = splits[s];
    NeighborIndex train_index(split.train, counts);
    std::vector<NamedReport> row;
    for (const auto& method : options.methods) {
      TrainProgress progress;
      if (log != nullptr) {
        progress = [&, total = options.train.iterations](int it, double loss) {
          if ((it + 1) % 100 == 0 || it + 1 == total) {
            *log << "  split " << s << " " << display_name(method) << " iter " << it + 1
                 << " loss " << loss << '\n';
          }
        };
      }
      ScorerBundle bundle;
      try {
        bundle = make_scorer(method, split.train, counts, options.train, progress);
      } catch (const NumericError& e) {
        throw NumericError("split " + std::to_string(s) + ": " + e.what());
      }
      MetricsReport report = evaluate(*bundle.scorer, split.test, train_index, options.eval);
      if (log != nullptr) {
        *log << "split " << s << " " << display_name(method) << " NDCG@" << options.eval.top_n
             << " = " << report.ndcg << '\n';
      }
      row.push_back({display_name(method), report});
    }
    result.per_split.push_back(std::move(row));
  }
  for (std::size_t m = 0; m < options.methods.size(); ++m) {
    std::vector<MetricsReport> reports;
    for (const auto& row : result.per_split) reports.push_back(row[m].report);
    result.mean.push_back({display_name(options.methods[m]), average(reports)});
  }
  return result;
}

std::string format_stats(const DatasetStats& s) {
  std::ostringstream out;
  auto line = [&out](const std::string& label, const std::string& value) {
    out << std::left << std::setw(34) << label << std::right << std::setw(16) << value << '\n';
  };
  auto fixed = [](double v, int digits) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(digits) << v;
    return o.str();
  };
  line("# of users", std::to_string(s.n_users));
  line("# of items", std::to_string(s.n_items));
  line("# of explanations", std::to_string(s.n_explanations));
  line("# of (u, i) pairs", std::to_string(s.n_pairs));
  line("# of (u, i, e) triplets", std::to_string(s.n_triplets));
  line("# of explanations / (u, i) pair", fixed(s.exps_per_pair, 2));
  line("Density (x 10^-10)", fixed(s.density_e10(), 2));
  return out.str();
}

}  // namespace extra
