#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "extra/error.hpp"
#include "extra/rankers.hpp"

using namespace extra;

namespace {

// Set-based oracle written directly from the definitions.
struct Oracle {
  std::vector<Triplet> train;

  std::set<Index> exps_of_user(Index u) const {
    std::set<Index> s;
    for (const auto& t : train) if (t.user == u) s.insert(t.explanation);
    return s;
  }
  std::set<Index> exps_of_item(Index i) const {
    std::set<Index> s;
    for (const auto& t : train) if (t.item == i) s.insert(t.explanation);
    return s;
  }
  static double jac(const std::set<Index>& a, const std::set<Index>& b) {
    std::size_t inter = 0;
    for (auto x : a) inter += b.count(x);
    std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
  }
  double rucf(Index u, Index i, Index e, std::size_t n_users) const {
    double sum = 0;
    for (Index v = 0; v < n_users; ++v) {
      if (v == u) continue;
      double s = jac(exps_of_user(u), exps_of_user(v));
      if (s <= 0) continue;
      bool with_i = false, with_e = false;
      for (const auto& t : train) {
        if (t.user != v) continue;
        with_i |= t.item == i;
        with_e |= t.explanation == e;
      }
      if (with_i && with_e) sum += s;
    }
    return sum;
  }
  double ricf(Index u, Index i, Index e, std::size_t n_items) const {
    double sum = 0;
    for (Index j = 0; j < n_items; ++j) {
      if (j == i) continue;
      double s = jac(exps_of_item(i), exps_of_item(j));
      if (s <= 0) continue;
      bool with_u = false, with_e = false;
      for (const auto& t : train) {
        if (t.item != j) continue;
        with_u |= t.user == u;
        with_e |= t.explanation == e;
      }
      if (with_u && with_e) sum += s;
    }
    return sum;
  }
};

std::vector<Triplet> random_train(std::size_t users, std::size_t items, std::size_t exps,
                                  std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<Triplet> s;
  while (s.size() < n) {
    s.insert({static_cast<Index>(rng() % users), static_cast<Index>(rng() % items),
              static_cast<Index>(rng() % exps)});
  }
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("jaccard") {
  std::vector<Index> a = {0, 1, 2}, b = {1, 2, 3}, c = {7, 8};
  CHECK(jaccard(a, b) == 0.5);
  CHECK(jaccard(a, a) == 1.0);
  CHECK(jaccard(a, c) == 0.0);
  CHECK(jaccard({}, {}) == 0.0);
}

TEST_CASE("user and item similarity are symmetric") {
  auto train = random_train(6, 6, 8, 60, 1);
  NeighborIndex index(train, EntityCounts{6, 6, 8});
  Oracle oracle{train};
  for (Index u = 0; u < 6; ++u) {
    for (Index v = 0; v < 6; ++v) {
      CHECK(jaccard_user_sim(u, v, index) == jaccard_user_sim(v, u, index));
      CHECK(jaccard_user_sim(u, v, index) ==
            doctest::Approx(Oracle::jac(oracle.exps_of_user(u), oracle.exps_of_user(v))));
      CHECK(jaccard_item_sim(u, v, index) == jaccard_item_sim(v, u, index));
    }
  }
  CHECK_THROWS_AS(jaccard_user_sim(0, 6, index), UsageError);
  CHECK_THROWS_AS(jaccard_item_sim(9, 0, index), UsageError);
}

TEST_CASE("RUCF single neighbor") {
  // u0: {e0, e1}, u1: {e0, e1, e2, e3} -> s = 2/4.
  std::vector<Triplet> train = {{0, 0, 0}, {0, 0, 1}, {1, 1, 0}, {1, 1, 1}, {1, 1, 2}, {1, 2, 3}};
  NeighborIndex index(train, EntityCounts{2, 3, 4});
  CHECK(jaccard_user_sim(0, 1, index) == 0.5);
  CHECK(score_rucf(0, 1, 2, index) == 0.5);
  // Item and explanation membership are checked separately, not as a pair.
  CHECK(score_rucf(0, 2, 2, index) == 0.5);
  CHECK(score_rucf(0, 0, 2, index) == 0.0);
  CHECK(score_rucf(0, 0, 0, index) == 0.0);  // only u0 itself interacted with item 0
}

TEST_CASE("RICF single neighbor") {
  // i0: {e0}, i1: {e0, e1, e2, e3} -> s = 1/4.
  std::vector<Triplet> train = {{0, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 1, 2}, {1, 1, 3}};
  NeighborIndex index(train, EntityCounts{2, 2, 4});
  CHECK(jaccard_item_sim(0, 1, index) == 0.25);
  CHECK(score_ricf(1, 0, 2, index) == 0.25);
  CHECK(score_ricf(0, 0, 2, index) == 0.0);
}

TEST_CASE("RUCF and RICF match the brute-force oracle") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto train = random_train(5, 5, 6, 40, seed);
    EntityCounts counts{5, 5, 6};
    NeighborIndex index(train, counts);
    Oracle oracle{train};
    RucfScorer rucf(index);
    RicfScorer ricf(index);
    std::vector<double> all_u(6), all_i(6);
    for (Index u = 0; u < 5; ++u) {
      for (Index i = 0; i < 5; ++i) {
        rucf.score_all(u, i, all_u);
        ricf.score_all(u, i, all_i);
        for (Index e = 0; e < 6; ++e) {
          const double want_u = oracle.rucf(u, i, e, 5);
          const double want_i = oracle.ricf(u, i, e, 5);
          CHECK(score_rucf(u, i, e, index) == doctest::Approx(want_u).epsilon(1e-12));
          CHECK(score_ricf(u, i, e, index) == doctest::Approx(want_i).epsilon(1e-12));
          CHECK(all_u[e] == doctest::Approx(want_u).epsilon(1e-12));
          CHECK(all_i[e] == doctest::Approx(want_i).epsilon(1e-12));
          CHECK(all_u[e] >= 0.0);
          CHECK(all_i[e] >= 0.0);
        }
      }
    }
  }
}

TEST_CASE("neighbor index sets are mutually consistent") {
  auto train = random_train(10, 8, 12, 100, 4);
  NeighborIndex index(train, EntityCounts{10, 8, 12});
  for (Index u = 0; u < 10; ++u) {
    for (Index i : index.user_items(u)) {
      const auto& users = index.item_users(i);
      CHECK(std::binary_search(users.begin(), users.end(), u));
    }
  }
  for (const auto& t : train) {
    auto pe = index.pair_explanations(t.user, t.item);
    CHECK(std::find(pe.begin(), pe.end(), t.explanation) != pe.end());
  }
  CHECK_THROWS_AS(index.check(10, 0, 0), UsageError);
  CHECK_THROWS_AS(score_rucf(0, 0, 12, index), UsageError);
}

TEST_CASE("RAND is deterministic and rank-uniform") {
  CHECK(score_rand(1, 2, 3, 9) == score_rand(1, 2, 3, 9));
  CHECK(score_rand(1, 2, 3, 9) != score_rand(1, 2, 3, 10));
  const std::size_t n_exps = 10;
  RandScorer scorer(n_exps, 5);
  std::vector<std::vector<int>> hist(n_exps, std::vector<int>(n_exps, 0));
  std::vector<double> scores(n_exps);
  const int pairs = 5000;
  for (int p = 0; p < pairs; ++p) {
    scorer.score_all(static_cast<Index>(p % 97), static_cast<Index>(p / 97), scores);
    std::set<double> distinct(scores.begin(), scores.end());
    CHECK(distinct.size() == n_exps);
    for (std::size_t e = 0; e < n_exps; ++e) {
      std::size_t rank = 0;
      for (double s : scores) rank += s > scores[e];
      ++hist[e][rank];
    }
  }
  // Chi-square over each explanation's rank histogram, 9 degrees of freedom;
  // the 99.9% quantile is 27.88.
  const double expected = static_cast<double>(pairs) / n_exps;
  for (const auto& row : hist) {
    double chi2 = 0;
    for (int c : row) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 27.88);
  }
}
