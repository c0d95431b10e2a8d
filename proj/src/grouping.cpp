#include "extra/grouping.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "extra/error.hpp"
#include "extra/lsh.hpp"

namespace extra {

void GroupingConfig::validate() const {
  if (shingle_size < 1) throw UsageError("shingle size must be >= 1");
  if (!(threshold > 0.0 && threshold < 1.0)) throw UsageError("threshold must lie in (0, 1)");
  if (min_group_size < 1) throw UsageError("min group size must be >= 1");
  if (num_permutations < MinHasher::kMinPermutations) {
    throw UsageError("num_permutations must be >= " +
                     std::to_string(MinHasher::kMinPermutations));
  }
  if (threads < 1) throw UsageError("threads must be >= 1");
}

SentenceId select_representative(SentenceId query_seed, std::span<const SentenceId> members) {
  if (std::find(members.begin(), members.end(), query_seed) == members.end()) {
    throw UsageError("query seed " + std::to_string(query_seed) + " is not a group member");
  }
  return query_seed;
}

GroupingResult group_signatures(std::span<const SentenceId> ids,
                                std::span<const MinHashSignature> signatures,
                                const GroupingConfig& config) {
  config.validate();
  if (ids.size() != signatures.size()) throw UsageError("ids and signatures differ in length");

  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (ids[order[k]] == ids[order[k - 1]]) {
      throw UsageError("duplicate sentence id " + std::to_string(ids[order[k]]));
    }
  }

  LshIndex index(config.threshold, config.num_permutations, config.seed);
  for (std::size_t pos : order) index.insert(ids[pos], signatures[pos]);

  GroupingResult result;
  std::unordered_set<SentenceId> queried;
  queried.reserve(ids.size());
  for (std::size_t pos : order) {
    const SentenceId id = ids[pos];
    if (queried.contains(id)) continue;
    std::vector<SentenceId> matched = index.query(signatures[pos]);
    ++result.queries;
    if (matched.size() > static_cast<std::size_t>(config.min_group_size)) {
      SentenceId rep = select_representative(id, matched);
      for (SentenceId m : matched) result.assignment.emplace(m, rep);
      result.groups.push_back(ExplanationGroup{rep, matched});
    }
    for (SentenceId m : matched) {
      index.remove(m);
      queried.insert(m);
      ++result.removals;
    }
  }
  return result;
}

GroupingResult group_sentences(std::span<const Sentence> sentences,
                               const GroupingConfig& config) {
  config.validate();
  MinHasher hasher(config.num_permutations, config.seed);
  std::vector<SentenceId> ids(sentences.size());
  std::vector<MinHashSignature> sigs(sentences.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      ids[s] = sentences[s].id;
      sigs[s] = hasher.sign(shingles(sentences[s].text, config.shingle_size));
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(config.threads),
                                               std::max<std::size_t>(sentences.size(), 1));
  if (n_threads <= 1) {
    work(0, sentences.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (sentences.size() + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      std::size_t begin = t * chunk;
      std::size_t end = std::min(sentences.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  return group_signatures(ids, sigs, config);
}

}  // namespace extra
