#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "extra/minhash.hpp"

namespace extra {

/// Banded MinHash LSH index over sentence signatures. Queries return the
/// keys that share at least one band bucket with the query AND whose
/// estimated Jaccard against it is at least the threshold.
///
/// Single writer. Concurrent const queries are fine between mutations.
class LshIndex {
 public:
  using Key = std::uint64_t;

  LshIndex(double threshold, int num_permutations, std::uint64_t seed);

  /// Throws UsageError for a duplicate key or an incompatible signature.
  void insert(Key key, MinHashSignature sig);
  /// Keys in ascending order.
  std::vector<Key> query(const MinHashSignature& sig) const;
  /// Throws UsageError when key is absent.
  void remove(Key key);

  bool contains(Key key) const { return signatures_.contains(key); }
  std::size_t size() const { return signatures_.size(); }
  bool empty() const { return signatures_.empty(); }

  double threshold() const { return threshold_; }
  BandParams params() const { return params_; }
  int num_permutations() const { return num_permutations_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t band_key(const MinHashSignature& sig, int band) const;
  void check_compatible(const MinHashSignature& sig) const;

  double threshold_;
  int num_permutations_;
  std::uint64_t seed_;
  BandParams params_;
  std::vector<std::unordered_map<std::uint64_t, std::unordered_set<Key>>> tables_;
  std::unordered_map<Key, MinHashSignature> signatures_;
};

}  // namespace extra
