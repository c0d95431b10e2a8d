#include <set>
#include <sstream>

#include "doctest.h"
#include "extra/error.hpp"
#include "extra/pipeline.hpp"
#include "planted.hpp"

using namespace extra;

namespace {

const SentenceFilter& bundled_filter() {
  static const SentenceFilter filter(PosLexicon::bundled());
  return filter;
}

std::vector<RawRecord> fixture() {
  return read_corpus_file(std::string(EXTRA_TEST_DATA_DIR) + "/fixture_corpus.jsonl").records;
}

}  // namespace

TEST_CASE("fixture corpus builds a consistent dataset") {
  auto records = fixture();
  REQUIRE(records.size() == 200);
  GroupingConfig cfg;
  auto built = build_dataset(records, bundled_filter(), cfg);
  const Dataset& ds = built.dataset;
  CHECK(built.n_candidates <= built.n_sentences);
  CHECK_FALSE(built.grouping.groups.empty());
  CHECK_NOTHROW(ds.validate());

  std::set<ExpId> reps;
  for (const auto& g : built.grouping.groups) {
    CHECK(g.occurrence() > 5);
    reps.insert(g.explanation_id);
  }
  for (const auto& r : ds.records()) {
    REQUIRE_FALSE(r.explanations.empty());
    for (const auto& ref : r.explanations) {
      CHECK(reps.count(ref.exp_id) == 1);
      CHECK(built.grouping.assignment.at(ref.sen_id) == ref.exp_id);
    }
  }
  CHECK(ds.counts().explanations == built.grouping.groups.size());
  // Group texts are the short planted phrases.
  for (const auto& g : built.grouping.groups) {
    CHECK(built.sentence_text.at(g.explanation_id).size() < 80);
  }
}

TEST_CASE("build is deterministic") {
  auto records = fixture();
  GroupingConfig cfg;
  auto a = build_dataset(records, bundled_filter(), cfg);
  cfg.threads = 4;
  auto b = build_dataset(records, bundled_filter(), cfg);
  CHECK(a.dataset.triplets() == b.dataset.triplets());
  CHECK(a.dataset.texts() == b.dataset.texts());
  CHECK(vocab_fingerprint(a.dataset) == vocab_fingerprint(b.dataset));
}

TEST_CASE("empty corpus builds an empty dataset") {
  auto built = build_dataset({}, bundled_filter(), GroupingConfig{});
  CHECK(built.dataset.records().empty());
  CHECK(built.n_sentences == 0);
}

TEST_CASE("vocab fingerprint tracks the vocabularies") {
  Dataset a, b;
  a.add_record("u", "i", 5, 0, {{1, 2}});
  b.add_record("u", "j", 5, 0, {{1, 2}});
  CHECK(vocab_fingerprint(a) != vocab_fingerprint(b));
}

TEST_CASE("every method yields a scorer") {
  testing::PlantedConfig pc;
  pc.users = 100;
  pc.items = 40;
  pc.explanations = 40;
  pc.user_clusters = 2;
  pc.item_clusters = 2;
  auto data = testing::make_planted(pc);
  TrainConfig tc;
  tc.iterations = 3;
  tc.factors = 4;
  for (const auto& m : all_methods()) {
    auto bundle = make_scorer(m, data.triplets, data.counts, tc);
    REQUIRE(bundle.scorer);
    CHECK(bundle.scorer->num_explanations() == 40);
    CHECK(bundle.scorer->name() == display_name(m));
    if (m == "cd" || m == "pitf") CHECK(bundle.loss_trajectory.size() == 3);
  }
  CHECK_THROWS_AS(make_scorer("svd", data.triplets, data.counts, tc), UsageError);
}

TEST_CASE("bench runs every method on every split") {
  testing::PlantedConfig pc;
  pc.users = 300;
  pc.items = 60;
  pc.explanations = 40;
  pc.user_clusters = 2;
  pc.item_clusters = 2;
  auto data = testing::make_planted(pc);
  auto splits = make_splits(data.triplets, data.counts, 0.7, 2, 1);
  BenchOptions opts;
  opts.train.iterations = 20;
  opts.train.factors = 8;
  opts.train.learning_rate = 0.05;
  std::ostringstream log;
  auto result = run_bench(splits, data.counts, opts, &log);
  REQUIRE(result.per_split.size() == 2);
  REQUIRE(result.mean.size() == 5);
  for (const auto& row : result.per_split) CHECK(row.size() == 5);
  CHECK(result.mean[0].method == "RAND");
  CHECK(result.mean[4].method == "PITF");
  CHECK(result.mean[4].report.ndcg > result.mean[0].report.ndcg);
  CHECK(log.str().find("split 1 PITF") != std::string::npos);
}

TEST_CASE("stats formatting") {
  auto text = format_stats(DatasetStats::from_counts(109121, 47113, 33767, 569838, 793481));
  CHECK(text.find("109121") != std::string::npos);
  CHECK(text.find("793481") != std::string::npos);
  CHECK(text.find("45.71") != std::string::npos);
  CHECK(text.find("1.39") != std::string::npos);
}
