#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "extra/error.hpp"
#include "extra/rankers.hpp"
#include "test_util.hpp"

using namespace extra;

namespace {

void set_row(Matrix& m, std::size_t r, std::initializer_list<double> values) {
  std::copy(values.begin(), values.end(), m.row(r).begin());
}

std::vector<std::size_t> ranking(const LatentModel& m, Index u, Index i) {
  std::vector<double> s(m.num_explanations());
  m.score_all(u, i, s);
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s[a] > s[b]; });
  return idx;
}

}  // namespace

TEST_CASE("CD hand example") {
  auto m = LatentModel::zeros(Variant::cd, EntityCounts{1, 1, 1}, 2);
  set_row(m.user_factors(), 0, {1, 2});
  set_row(m.item_factors(), 0, {3, 4});
  set_row(m.exp_factors(), 0, {5, 6});
  CHECK(score_cd(m, 0, 0, 0) == 63.0);
  CHECK(m.score(0, 0, 0) == 63.0);
  CHECK_THROWS_AS(score_pitf(m, 0, 0, 0), UsageError);
  CHECK_THROWS_AS(score_cd(m, 1, 0, 0), UsageError);

  set_row(m.user_factors(), 0, {3, 6});
  CHECK(score_cd(m, 0, 0, 0) == 3 * 63.0);
  set_row(m.item_factors(), 0, {0, 0});
  CHECK(score_cd(m, 0, 0, 0) == 0.0);
}

TEST_CASE("PITF hand example") {
  auto m = LatentModel::zeros(Variant::pitf, EntityCounts{1, 1, 1}, 2);
  CHECK(score_pitf(m, 0, 0, 0) == 0.0);
  set_row(m.user_factors(), 0, {1, 0});
  set_row(m.exp_user_factors(), 0, {2, 0});
  set_row(m.item_factors(), 0, {0, 1});
  set_row(m.exp_item_factors(), 0, {0, 3});
  CHECK(score_pitf(m, 0, 0, 0) == 5.0);
  CHECK_THROWS_AS(score_cd(m, 0, 0, 0), UsageError);

  set_row(m.exp_item_factors(), 0, {0, 0});
  const double without_item = score_pitf(m, 0, 0, 0);
  set_row(m.item_factors(), 0, {7, -9});
  CHECK(score_pitf(m, 0, 0, 0) == without_item);
}

TEST_CASE("score_all agrees with score") {
  for (Variant v : {Variant::cd, Variant::pitf}) {
    auto m = LatentModel::random(v, EntityCounts{4, 3, 9}, 5, 7);
    std::vector<double> out(9);
    for (Index u = 0; u < 4; ++u) {
      for (Index i = 0; i < 3; ++i) {
        m.score_all(u, i, out);
        for (Index e = 0; e < 9; ++e) CHECK(out[e] == doctest::Approx(m.score(u, i, e)));
      }
    }
    std::vector<double> wrong(8);
    CHECK_THROWS_AS(m.score_all(0, 0, wrong), UsageError);
  }
}

TEST_CASE("random init is seeded and centered") {
  auto a = LatentModel::random(Variant::pitf, EntityCounts{200, 100, 100}, 20, 3);
  auto b = LatentModel::random(Variant::pitf, EntityCounts{200, 100, 100}, 20, 3);
  auto c = LatentModel::random(Variant::pitf, EntityCounts{200, 100, 100}, 20, 4);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  const auto& data = a.user_factors().data;
  double mean = std::accumulate(data.begin(), data.end(), 0.0) / data.size();
  double var = 0;
  for (double x : data) var += (x - mean) * (x - mean);
  var /= data.size();
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::sqrt(var) == doctest::Approx(0.1).epsilon(0.05));
  CHECK(a.all_finite());
  CHECK_THROWS_AS(LatentModel::zeros(Variant::cd, EntityCounts{1, 1, 1}, 0), UsageError);
}

TEST_CASE("uniform positive rescaling keeps PITF rankings") {
  auto m = LatentModel::random(Variant::pitf, EntityCounts{5, 5, 30}, 8, 11);
  auto scaled = m;
  for (Matrix* mat : {&scaled.user_factors(), &scaled.item_factors(), &scaled.exp_user_factors(),
                      &scaled.exp_item_factors()}) {
    for (double& x : mat->data) x *= 2.5;
  }
  for (Index u = 0; u < 5; ++u) {
    for (Index i = 0; i < 5; ++i) {
      CHECK(ranking(m, u, i) == ranking(scaled, u, i));
      CHECK(scaled.score(u, i, 3) == doctest::Approx(6.25 * m.score(u, i, 3)));
    }
  }
}

TEST_CASE("checkpoints round-trip exactly") {
  extra::testing::TempDir dir("model");
  for (Variant v : {Variant::cd, Variant::pitf}) {
    auto m = LatentModel::random(v, EntityCounts{6, 4, 7}, 3, 99);
    m.set_vocab_fingerprint(0xabcdef);
    m.user_factors().data[0] = 1.0 / 3.0;
    m.item_factors().data[1] = -1e-300;
    auto path = dir / ("model_" + to_string(v) + ".txt");
    m.save(path);
    auto back = LatentModel::load(path);
    CHECK(back == m);
    CHECK(back.variant() == v);
    CHECK(back.factors() == 3);
    CHECK(back.vocab_fingerprint() == 0xabcdef);
  }
  extra::testing::write_file(dir / "junk.txt", "not a model\n");
  CHECK_THROWS_AS(LatentModel::load(dir / "junk.txt"), DataError);
  CHECK_THROWS_AS(LatentModel::load(dir / "absent.txt"), DataError);
}

TEST_CASE("variant names") {
  CHECK(parse_variant("cd") == Variant::cd);
  CHECK(parse_variant("PITF") == Variant::pitf);
  CHECK_THROWS_AS(parse_variant("svd"), UsageError);
}
