#include <algorithm>
#include <random>

#include "doctest.h"
#include "extra/error.hpp"
#include "extra/lsh.hpp"

using namespace extra;

namespace {

constexpr int kPerm = 128;
constexpr std::uint64_t kSeed = 11;

MinHashSignature sig_of(std::string_view sentence) {
  return minhash(shingles(sentence, 2), kPerm, kSeed);
}

// Random signature; distinct calls collide on no slot with overwhelming odds.
MinHashSignature random_sig(std::mt19937_64& rng) {
  MinHashSignature s{std::vector<std::uint64_t>(kPerm), kSeed};
  for (auto& v : s.mins) v = rng();
  return s;
}

}  // namespace

TEST_CASE("a key finds itself") {
  LshIndex index(0.9, kPerm, kSeed);
  index.insert(7, sig_of("the room was clean and quiet"));
  CHECK(index.query(sig_of("the room was clean and quiet")) == std::vector<LshIndex::Key>{7});
  CHECK(index.contains(7));
  CHECK(index.size() == 1);
}

TEST_CASE("empty index returns nothing") {
  LshIndex index(0.9, kPerm, kSeed);
  CHECK(index.query(sig_of("anything at all")).empty());
  CHECK(index.empty());
}

TEST_CASE("duplicate and missing keys") {
  LshIndex index(0.9, kPerm, kSeed);
  index.insert(1, sig_of("a b c"));
  CHECK_THROWS_AS(index.insert(1, sig_of("d e f")), UsageError);
  CHECK_THROWS_AS(index.remove(2), UsageError);
  index.remove(1);
  CHECK_THROWS_AS(index.remove(1), UsageError);
  CHECK(index.empty());
}

TEST_CASE("incompatible signatures are rejected") {
  LshIndex index(0.9, kPerm, kSeed);
  CHECK_THROWS_AS(index.insert(1, minhash(shingles("a b", 2), 64, kSeed)), UsageError);
  CHECK_THROWS_AS(index.insert(1, minhash(shingles("a b", 2), kPerm, kSeed + 1)), UsageError);
  CHECK_THROWS_AS(index.query(minhash(shingles("a b", 2), 64, kSeed)), UsageError);
}

TEST_CASE("identical sentences all come back, sorted") {
  LshIndex index(0.9, kPerm, kSeed);
  std::vector<LshIndex::Key> keys = {42, 3, 17, 8};
  for (auto k : keys) index.insert(k, sig_of("great location close to everything"));
  index.insert(100, sig_of("terrible breakfast and rude staff"));
  auto got = index.query(sig_of("great location close to everything"));
  std::sort(keys.begin(), keys.end());
  CHECK(got == keys);
}

TEST_CASE("removed keys stop appearing") {
  LshIndex index(0.9, kPerm, kSeed);
  for (LshIndex::Key k = 0; k < 100; ++k) index.insert(k, sig_of("same sentence every time"));
  for (LshIndex::Key k = 0; k < 100; k += 2) index.remove(k);
  auto got = index.query(sig_of("same sentence every time"));
  REQUIRE(got.size() == 50);
  for (auto k : got) CHECK(k % 2 == 1);
  CHECK(index.size() == 50);
}

TEST_CASE("bulk insert of unrelated signatures") {
  std::mt19937_64 rng(5);
  LshIndex index(0.9, kPerm, kSeed);
  std::vector<MinHashSignature> sigs;
  for (LshIndex::Key k = 0; k < 10000; ++k) {
    sigs.push_back(random_sig(rng));
    index.insert(k, sigs.back());
  }
  for (LshIndex::Key k = 0; k < 10000; k += 97) {
    CHECK(index.query(sigs[k]) == std::vector<LshIndex::Key>{k});
  }
}

TEST_CASE("every returned key clears the threshold") {
  std::mt19937_64 rng(9);
  LshIndex index(0.8, kPerm, kSeed);
  std::vector<MinHashSignature> sigs;
  auto base = random_sig(rng);
  // Perturb a growing number of slots to spread similarities over [0.5, 1].
  for (LshIndex::Key k = 0; k < 300; ++k) {
    auto s = base;
    const auto changed = k % 65;
    for (std::size_t j = 0; j < changed; ++j) s.mins[(j * 37 + k) % kPerm] = rng();
    sigs.push_back(s);
    index.insert(k, s);
  }
  for (LshIndex::Key q = 0; q < 300; q += 7) {
    auto got = index.query(sigs[q]);
    CHECK(std::is_sorted(got.begin(), got.end()));
    CHECK(std::find(got.begin(), got.end(), q) != got.end());
    for (auto k : got) CHECK(estimate_jaccard(sigs[k], sigs[q]) >= 0.8);
  }
}

TEST_CASE("band layout follows the threshold") {
  LshIndex index(0.9, kPerm, kSeed);
  CHECK(index.params().bands * index.params().rows == kPerm);
  CHECK(index.params().bands == band_params(0.9, kPerm).bands);
}
