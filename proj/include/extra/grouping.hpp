#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "extra/corpus.hpp"
#include "extra/minhash.hpp"

namespace extra {

struct GroupingConfig {
  int shingle_size = 2;
  double threshold = 0.9;
  int min_group_size = 5;  // groups need strictly more members than this
  int num_permutations = 128;
  std::uint64_t seed = 1;
  int threads = 1;  // signature construction only; the greedy loop is serial

  void validate() const;
};

struct ExplanationGroup {
  SentenceId explanation_id = 0;
  std::vector<SentenceId> member_ids;  // ascending, contains explanation_id

  std::size_t occurrence() const { return member_ids.size(); }
};

struct GroupingResult {
  std::vector<ExplanationGroup> groups;  // in discovery order
  std::map<SentenceId, SentenceId> assignment;  // member -> explanation_id
  std::size_t queries = 0;
  std::size_t removals = 0;
};

/// The representative of a query result is the sentence that issued the
/// query. Throws UsageError if it is not among the members.
SentenceId select_representative(SentenceId query_seed, std::span<const SentenceId> members);

/// Greedy LSH grouping. Every sentence is inserted into one index; then, in
/// ascending id order, each sentence that has not yet been matched queries
/// the index, the whole result set is removed and marked as matched, and the
/// result is kept as a group only if it has more than min_group_size members.
GroupingResult group_sentences(std::span<const Sentence> sentences,
                               const GroupingConfig& config);

/// Same loop over precomputed signatures; `ids` and `signatures` are parallel.
GroupingResult group_signatures(std::span<const SentenceId> ids,
                                std::span<const MinHashSignature> signatures,
                                const GroupingConfig& config);

}  // namespace extra
