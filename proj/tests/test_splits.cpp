#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "extra/dataset.hpp"
#include "test_util.hpp"

using namespace extra;
using extra::testing::TempDir;

namespace {

struct Synthetic {
  std::vector<Triplet> triplets;
  EntityCounts counts;
};

Synthetic synthetic(std::size_t n, std::size_t users, std::size_t items, std::size_t exps,
                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<Triplet> seen;
  Synthetic s;
  s.counts = {users, items, exps};
  auto add = [&](Triplet t) {
    if (seen.insert(t).second) s.triplets.push_back(t);
  };
  // One triplet per entity so coverage is satisfiable.
  const std::size_t m = std::max({users, items, exps});
  for (std::size_t k = 0; k < m; ++k) {
    add({static_cast<Index>(k % users), static_cast<Index>(k % items),
         static_cast<Index>(k % exps)});
  }
  while (s.triplets.size() < n) {
    add({static_cast<Index>(rng() % users), static_cast<Index>(rng() % items),
         static_cast<Index>(rng() % exps)});
  }
  return s;
}

}  // namespace

TEST_CASE("splits partition the triplets and cover every entity") {
  auto data = synthetic(10000, 800, 500, 300, 1);
  auto splits = make_splits(data.triplets, data.counts, 0.7, 5, 42);
  REQUIRE(splits.size() == 5);
  const std::size_t entities = data.counts.total();
  std::multiset<Triplet> all(data.triplets.begin(), data.triplets.end());
  for (const auto& s : splits) {
    CHECK(split_covers(s, data.counts));
    CHECK(s.train.size() >= 7000);
    CHECK(s.train.size() <= 7000 + entities);
    std::multiset<Triplet> joined(s.train.begin(), s.train.end());
    joined.insert(s.test.begin(), s.test.end());
    CHECK(joined == all);
  }
  CHECK(splits[0].train != splits[1].train);
}

TEST_CASE("every entity of a test triplet already occurs in train") {
  auto data = synthetic(5000, 600, 400, 200, 2);
  auto splits = make_splits(data.triplets, data.counts, 0.7, 3, 9);
  const auto base = static_cast<std::size_t>(std::ceil(0.7 * 5000));
  for (const auto& s : splits) {
    CHECK(s.train.size() >= base);
    for (const auto& t : s.test) {
      CHECK(std::any_of(s.train.begin(), s.train.end(), [&](const Triplet& x) { return x.user == t.user; }));
      CHECK(std::any_of(s.train.begin(), s.train.end(), [&](const Triplet& x) { return x.item == t.item; }));
      CHECK(std::any_of(s.train.begin(), s.train.end(),
                        [&](const Triplet& x) { return x.explanation == t.explanation; }));
    }
  }
}

TEST_CASE("a lone triplet always lands in train") {
  std::vector<Triplet> triplets;
  for (Index u = 0; u < 20; ++u) {
    for (Index i = 0; i < 5; ++i) triplets.push_back({u, i, 0});
  }
  triplets.push_back({3, 2, 1});
  EntityCounts counts{20, 5, 2};
  for (const auto& s : make_splits(triplets, counts, 0.7, 5, 123)) {
    CHECK(std::find(s.train.begin(), s.train.end(), Triplet{3, 2, 1}) != s.train.end());
  }
}

TEST_CASE("same seed gives identical splits") {
  auto data = synthetic(2000, 100, 100, 50, 3);
  auto a = make_splits(data.triplets, data.counts, 0.7, 5, 77);
  auto b = make_splits(data.triplets, data.counts, 0.7, 5, 77);
  auto c = make_splits(data.triplets, data.counts, 0.7, 5, 78);
  for (int k = 0; k < 5; ++k) {
    CHECK(a[k].train == b[k].train);
    CHECK(a[k].test == b[k].test);
  }
  CHECK(a[0].train != c[0].train);
}

TEST_CASE("unsatisfiable coverage and bad arguments") {
  std::vector<Triplet> triplets = {{0, 0, 0}};
  CHECK_THROWS_AS(make_splits(triplets, EntityCounts{2, 1, 1}, 0.7, 1, 1), DataError);
  CHECK_THROWS_AS(make_splits(triplets, EntityCounts{1, 1, 1}, 0.0, 1, 1), UsageError);
  CHECK_THROWS_AS(make_splits(triplets, EntityCounts{1, 1, 1}, 0.7, 0, 1), UsageError);
}

TEST_CASE("split files round-trip") {
  Dataset ds;
  ds.add_record("alice", "hotel1", 5, 1, {{10, 100}, {11, 101}});
  ds.add_record("bob", "hotel1", 4, 2, {{10, 102}});
  ds.add_record("bob", "hotel2", 3, 3, {{12, 103}});
  ds.add_record("carol", "hotel2", 2, 4, {{11, 104}, {12, 105}});
  auto triplets = ds.triplets();
  auto splits = make_splits(triplets, ds.counts(), 0.7, 2, 5);
  TempDir dir("splits");
  for (int k = 0; k < 2; ++k) write_split(splits[k], ds, dir.path(), k);
  for (int k = 0; k < 2; ++k) {
    auto back = read_split(ds, dir.path(), k);
    CHECK(back.train == splits[k].train);
    CHECK(back.test == splits[k].test);
  }
  CHECK(extra::testing::read_file(dir / "split0.train").find("::") != std::string::npos);
  extra::testing::write_file(dir / "split0.test", "dave::hotel1::10\n");
  CHECK_THROWS_AS(read_split(ds, dir.path(), 0), ParseError);
}
