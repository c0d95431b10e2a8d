#include "extra/minhash.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "extra/error.hpp"
#include "extra/text.hpp"

namespace extra {

namespace {

constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

std::uint64_t mod_mersenne61(unsigned __int128 x) {
  std::uint64_t lo = static_cast<std::uint64_t>(x & kMersenne61);
  std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
  std::uint64_t r = lo + hi;
  while (r >= kMersenne61) r -= kMersenne61;
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

ShingleSet shingles(std::span<const std::string> tokens, int n) {
  if (n < 1) throw UsageError("shingle size must be >= 1");
  ShingleSet out;
  if (tokens.empty()) return out;
  const auto width = static_cast<std::size_t>(n);
  if (tokens.size() < width) {
    out.emplace(tokens.begin(), tokens.end());
    return out;
  }
  for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
    out.emplace(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                tokens.begin() + static_cast<std::ptrdiff_t>(i + width));
  }
  return out;
}

ShingleSet shingles(std::string_view sentence, int n) {
  auto tokens = text::tokenize(sentence);
  return shingles(std::span<const std::string>(tokens), n);
}

std::uint64_t shingle_hash(const Shingle& shingle) {
  // FNV-1a over the joined bytes, then a splitmix finalizer for avalanche.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (std::size_t t = 0; t < shingle.size(); ++t) {
    if (t > 0) mix(0x1f);
    for (char c : shingle[t]) mix(static_cast<unsigned char>(c));
  }
  return splitmix64(h);
}

MinHasher::MinHasher(int num_permutations, std::uint64_t seed) : seed_(seed) {
  if (num_permutations < kMinPermutations) {
    throw UsageError("num_permutations must be >= " + std::to_string(kMinPermutations));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick_a(1, kMersenne61 - 1);
  std::uniform_int_distribution<std::uint64_t> pick_b(0, kMersenne61 - 1);
  a_.resize(static_cast<std::size_t>(num_permutations));
  b_.resize(static_cast<std::size_t>(num_permutations));
  for (std::size_t j = 0; j < a_.size(); ++j) {
    a_[j] = pick_a(rng);
    b_[j] = pick_b(rng);
  }
}

MinHashSignature MinHasher::sign_hashes(std::span<const std::uint64_t> base_hashes) const {
  MinHashSignature sig{std::vector<std::uint64_t>(a_.size(), kEmptySlot), seed_};
  for (std::uint64_t raw : base_hashes) {
    const std::uint64_t x = raw % kMersenne61;
    for (std::size_t j = 0; j < a_.size(); ++j) {
      auto prod = static_cast<unsigned __int128>(a_[j]) * x + b_[j];
      sig.mins[j] = std::min(sig.mins[j], mod_mersenne61(prod));
    }
  }
  return sig;
}

MinHashSignature MinHasher::sign(const ShingleSet& set) const {
  std::vector<std::uint64_t> hashes;
  hashes.reserve(set.size());
  for (const auto& sh : set) hashes.push_back(shingle_hash(sh));
  return sign_hashes(hashes);
}

MinHashSignature minhash(const ShingleSet& set, int k, std::uint64_t seed) {
  return MinHasher(k, seed).sign(set);
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.size() != b.size()) {
    throw UsageError("signature lengths differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  if (a.seed != b.seed) throw UsageError("signatures built with different seeds");
  if (a.mins.empty()) throw UsageError("empty signature");
  std::size_t equal = 0;
  for (std::size_t j = 0; j < a.size(); ++j) equal += a.mins[j] == b.mins[j];
  return static_cast<double>(equal) / static_cast<double>(a.size());
}

double band_collision_probability(double s, BandParams p) {
  return 1.0 - std::pow(1.0 - std::pow(s, p.rows), p.bands);
}

namespace {

// Composite Simpson's rule on [lo, hi].
template <typename F>
double integrate(F f, double lo, double hi, int intervals = 1000) {
  if (hi <= lo) return 0.0;
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) sum += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

BandParams band_params(double threshold, int k) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw UsageError("LSH threshold must lie in (0, 1)");
  }
  if (k < MinHasher::kMinPermutations) {
    throw UsageError("num_permutations must be >= " + std::to_string(MinHasher::kMinPermutations));
  }
  BandParams best;
  double best_error = std::numeric_limits<double>::infinity();
  for (int b = 1; b <= k; ++b) {
    if (k % b != 0) continue;
    BandParams p{b, k / b};
    double fp = integrate([p](double s) { return band_collision_probability(s, p); }, 0.0,
                          threshold);
    double fn = integrate([p](double s) { return 1.0 - band_collision_probability(s, p); },
                          threshold, 1.0);
    double err = kFalsePositiveWeight * fp + kFalseNegativeWeight * fn;
    if (err < best_error) {
      best_error = err;
      best = p;
    }
  }
  if (best.bands == 0) throw UsageError("no band factorization for k=" + std::to_string(k));
  return best;
}

}  // namespace extra
