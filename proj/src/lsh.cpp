#include "extra/lsh.hpp"

#include <algorithm>
#include <string>

#include "extra/error.hpp"

namespace extra {

LshIndex::LshIndex(double threshold, int num_permutations, std::uint64_t seed)
    : threshold_(threshold),
      num_permutations_(num_permutations),
      seed_(seed),
      params_(band_params(threshold, num_permutations)),
      tables_(static_cast<std::size_t>(params_.bands)) {}

void LshIndex::check_compatible(const MinHashSignature& sig) const {
  if (sig.size() != static_cast<std::size_t>(num_permutations_) || sig.seed != seed_) {
    throw UsageError("signature (k=" + std::to_string(sig.size()) +
                     ", seed=" + std::to_string(sig.seed) + ") incompatible with index (k=" +
                     std::to_string(num_permutations_) + ", seed=" + std::to_string(seed_) + ")");
  }
}

std::uint64_t LshIndex::band_key(const MinHashSignature& sig, int band) const {
  std::uint64_t h = 0x84222325cbf29ce4ULL ^ static_cast<std::uint64_t>(band);
  const auto begin = static_cast<std::size_t>(band * params_.rows);
  for (std::size_t j = begin; j < begin + static_cast<std::size_t>(params_.rows); ++j) {
    h ^= sig.mins[j] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

void LshIndex::insert(Key key, MinHashSignature sig) {
  check_compatible(sig);
  if (signatures_.contains(key)) {
    throw UsageError("key " + std::to_string(key) + " already in LSH index");
  }
  for (int b = 0; b < params_.bands; ++b) {
    tables_[static_cast<std::size_t>(b)][band_key(sig, b)].insert(key);
  }
  signatures_.emplace(key, std::move(sig));
}

std::vector<LshIndex::Key> LshIndex::query(const MinHashSignature& sig) const {
  check_compatible(sig);
  std::unordered_set<Key> candidates;
  for (int b = 0; b < params_.bands; ++b) {
    const auto& table = tables_[static_cast<std::size_t>(b)];
    auto it = table.find(band_key(sig, b));
    if (it == table.end()) continue;
    candidates.insert(it->second.begin(), it->second.end());
  }
  std::vector<Key> out;
  out.reserve(candidates.size());
  for (Key k : candidates) {
    // Band hashes can collide across different band contents; the Jaccard
    // check below also filters those out.
    if (estimate_jaccard(signatures_.at(k), sig) >= threshold_) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void LshIndex::remove(Key key) {
  auto it = signatures_.find(key);
  if (it == signatures_.end()) {
    throw UsageError("key " + std::to_string(key) + " not in LSH index");
  }
  for (int b = 0; b < params_.bands; ++b) {
    auto& table = tables_[static_cast<std::size_t>(b)];
    auto bucket = table.find(band_key(it->second, b));
    bucket->second.erase(key);
    if (bucket->second.empty()) table.erase(bucket);
  }
  signatures_.erase(it);
}

}  // namespace extra
