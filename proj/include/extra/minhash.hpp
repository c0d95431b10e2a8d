#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace extra {

/// Ordered tuple of n lowercase tokens.
using Shingle = std::vector<std::string>;
using ShingleSet = std::set<Shingle>;

/// All consecutive n-token windows of the tokenized sentence. A sentence with
/// fewer than n (but at least one) tokens yields one shingle holding every
/// token. Throws UsageError when n < 1.
ShingleSet shingles(std::string_view sentence, int n);
ShingleSet shingles(std::span<const std::string> tokens, int n);

/// Stable 64-bit hash of a shingle's bytes (tokens joined by 0x1f).
std::uint64_t shingle_hash(const Shingle& shingle);

struct MinHashSignature {
  std::vector<std::uint64_t> mins;
  std::uint64_t seed = 0;

  std::size_t size() const { return mins.size(); }
  friend bool operator==(const MinHashSignature&, const MinHashSignature&) = default;
};

/// Value of every slot in the signature of an empty set.
inline constexpr std::uint64_t kEmptySlot = std::numeric_limits<std::uint64_t>::max();

/// k affine permutations h_j(x) = (a_j x + b_j) mod (2^61 - 1) of a base
/// shingle hash, with (a_j, b_j) drawn from a seeded mt19937_64.
class MinHasher {
 public:
  static constexpr int kMinPermutations = 16;

  MinHasher(int num_permutations, std::uint64_t seed);

  MinHashSignature sign(const ShingleSet& set) const;
  /// Signature from already-hashed shingles.
  MinHashSignature sign_hashes(std::span<const std::uint64_t> base_hashes) const;

  int num_permutations() const { return static_cast<int>(a_.size()); }
  std::uint64_t seed() const { return seed_; }

 private:
  std::vector<std::uint64_t> a_;
  std::vector<std::uint64_t> b_;
  std::uint64_t seed_;
};

MinHashSignature minhash(const ShingleSet& set, int k, std::uint64_t seed);

/// Fraction of slots where the two signatures agree. Throws UsageError when
/// lengths or seeds differ.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

struct BandParams {
  int bands = 0;
  int rows = 0;
};

/// Probability that a pair with Jaccard s collides in at least one band.
double band_collision_probability(double s, BandParams p);

/// Weights of the false-positive area (integral of the S-curve over [0, t])
/// and the false-negative area (integral of 1 - S-curve over [t, 1]).
/// Band candidates are verified against the estimated Jaccard afterwards, so
/// a missed pair costs more than an extra candidate.
inline constexpr double kFalsePositiveWeight = 0.25;
inline constexpr double kFalseNegativeWeight = 0.75;

/// Exact factorization b * r = k minimizing the weighted sum of the two areas.
BandParams band_params(double threshold, int k);

}  // namespace extra
