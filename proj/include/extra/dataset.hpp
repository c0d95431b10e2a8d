#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "extra/error.hpp"

namespace extra {

using Index = std::uint32_t;
using ExpId = std::uint64_t;

/// Bidirectional mapping between external IDs and dense indices assigned in
/// first-seen order.
template <typename Key>
class Vocabulary {
 public:
  Index add(const Key& key) {
    auto [it, inserted] = index_.try_emplace(key, static_cast<Index>(keys_.size()));
    if (inserted) keys_.push_back(key);
    return it->second;
  }

  /// Throws DataError for an unknown key.
  Index at(const Key& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) throw DataError("unknown id");
    return it->second;
  }
  const Key* find_key(Index i) const { return i < keys_.size() ? &keys_[i] : nullptr; }
  bool contains(const Key& key) const { return index_.contains(key); }
  const Key& key(Index i) const { return keys_.at(i); }
  std::size_t size() const { return keys_.size(); }
  const std::vector<Key>& keys() const { return keys_; }

 private:
  std::unordered_map<Key, Index> index_;
  std::vector<Key> keys_;
};

struct Triplet {
  Index user = 0;
  Index item = 0;
  Index explanation = 0;

  friend auto operator<=>(const Triplet&, const Triplet&) = default;
};

/// One explanation occurrence in a review: the group's representative ID
/// and the ID of the sentence that was matched to it.
struct ExplanationRef {
  ExpId exp_id = 0;
  ExpId sen_id = 0;

  friend bool operator==(const ExplanationRef&, const ExplanationRef&) = default;
};

struct DatasetRecord {
  Index user = 0;
  Index item = 0;
  int rating = 0;
  std::int64_t timestamp = 0;
  std::vector<ExplanationRef> explanations;
};

struct EntityCounts {
  std::size_t users = 0;
  std::size_t items = 0;
  std::size_t explanations = 0;

  std::size_t total() const { return users + items + explanations; }
};

/// User-item-explanation dataset. Explanation indices cover expIDs only;
/// senIDs are carried for file fidelity and text lookup.
class Dataset {
 public:
  /// Adds a record; throws DataError when it has no explanation.
  void add_record(const std::string& user, const std::string& item, int rating,
                  std::int64_t timestamp, std::vector<ExplanationRef> explanations);
  void set_text(ExpId id, std::string text) { texts_[id] = std::move(text); }

  /// Every distinct (u, i, e), in first-seen order.
  std::vector<Triplet> triplets() const;

  /// Throws DataError if any referenced expID or senID lacks a text.
  void validate() const;

  const Vocabulary<std::string>& users() const { return users_; }
  const Vocabulary<std::string>& items() const { return items_; }
  const Vocabulary<ExpId>& explanations() const { return explanations_; }
  const std::vector<DatasetRecord>& records() const { return records_; }
  const std::map<ExpId, std::string>& texts() const { return texts_; }
  const std::string& text(ExpId id) const;
  /// Text of the explanation with dense index e.
  const std::string& explanation_text(Index e) const { return text(explanations_.key(e)); }

  EntityCounts counts() const {
    return {users_.size(), items_.size(), explanations_.size()};
  }

 private:
  Vocabulary<std::string> users_;
  Vocabulary<std::string> items_;
  Vocabulary<ExpId> explanations_;
  std::vector<DatasetRecord> records_;
  std::map<ExpId, std::string> texts_;
};

/// Writes IDs.txt and id2exp.txt into out_dir (created if missing).
void emit_dataset(const Dataset& dataset, const std::filesystem::path& out_dir);
Dataset load_dataset(const std::filesystem::path& dir);

struct DatasetStats {
  std::size_t n_users = 0;
  std::size_t n_items = 0;
  std::size_t n_explanations = 0;
  std::size_t n_pairs = 0;
  std::size_t n_triplets = 0;
  double exps_per_pair = 0.0;
  double density = 0.0;

  double density_e10() const { return density * 1e10; }

  static DatasetStats from_counts(std::size_t users, std::size_t items,
                                  std::size_t explanations, std::size_t pairs,
                                  std::size_t triplets);
};

DatasetStats compute_stats(const Dataset& dataset);

struct Split {
  std::vector<Triplet> train;
  std::vector<Triplet> test;
  std::uint64_t seed = 0;

  double train_fraction() const {
    auto total = train.size() + test.size();
    return total == 0 ? 0.0 : static_cast<double>(train.size()) / static_cast<double>(total);
  }
};

/// n_splits independent random train/test partitions. Each draws
/// ceil(train_fraction * |triplets|) triplets for training, then moves test
/// triplets (in shuffled order) to train whenever they touch a user, item or
/// explanation that train does not yet cover. Throws DataError if some
/// entity has no triplet at all.
std::vector<Split> make_splits(std::span<const Triplet> triplets, const EntityCounts& counts,
                               double train_fraction, int n_splits, std::uint64_t seed);

/// True when every entity in `counts` occurs in at least one train triplet.
bool split_covers(const Split& split, const EntityCounts& counts);

/// split<k>.train / split<k>.test as `userID::itemID::expID` lines.
void write_split(const Split& split, const Dataset& dataset, const std::filesystem::path& dir,
                 int k);
Split read_split(const Dataset& dataset, const std::filesystem::path& dir, int k);

}  // namespace extra
