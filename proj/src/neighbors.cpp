#include "extra/rankers.hpp"

#include <algorithm>

namespace extra {

namespace {

std::uint64_t pair_key(Index u, Index i) {
  return (static_cast<std::uint64_t>(u) << 32) | i;
}

void sort_unique(std::vector<std::vector<Index>>& lists) {
  for (auto& v : lists) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

bool contains(const std::vector<Index>& sorted, Index x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void Scorer::score_all(Index u, Index i, std::span<double> out) const {
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = score(u, i, static_cast<Index>(e));
}

NeighborIndex::NeighborIndex(std::span<const Triplet> train, const EntityCounts& counts)
    : counts_(counts),
      user_exps_(counts.users),
      item_exps_(counts.items),
      item_users_(counts.items),
      user_items_(counts.users),
      exp_users_(counts.explanations),
      exp_items_(counts.explanations) {
  for (const auto& t : train) {
    check(t.user, t.item, t.explanation);
    user_exps_[t.user].push_back(t.explanation);
    item_exps_[t.item].push_back(t.explanation);
    item_users_[t.item].push_back(t.user);
    user_items_[t.user].push_back(t.item);
    exp_users_[t.explanation].push_back(t.user);
    exp_items_[t.explanation].push_back(t.item);
    pair_exps_[pair_key(t.user, t.item)].push_back(t.explanation);
  }
  for (auto* lists : {&user_exps_, &item_exps_, &item_users_, &user_items_, &exp_users_, &exp_items_}) {
    sort_unique(*lists);
  }
  for (auto& [key, v] : pair_exps_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

std::span<const Index> NeighborIndex::pair_explanations(Index u, Index i) const {
  auto it = pair_exps_.find(pair_key(u, i));
  if (it == pair_exps_.end()) return {};
  return it->second;
}

void NeighborIndex::check(Index u, Index i, Index e) const {
  if (u >= counts_.users) throw UsageError("unknown user index " + std::to_string(u));
  if (i >= counts_.items) throw UsageError("unknown item index " + std::to_string(i));
  if (e >= counts_.explanations) {
    throw UsageError("unknown explanation index " + std::to_string(e));
  }
}

double jaccard(std::span<const Index> a, std::span<const Index> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

double jaccard_user_sim(Index u, Index u2, const NeighborIndex& index) {
  if (u >= index.counts().users) throw UsageError("unknown user index " + std::to_string(u));
  if (u2 >= index.counts().users) throw UsageError("unknown user index " + std::to_string(u2));
  return jaccard(index.user_explanations(u), index.user_explanations(u2));
}

double jaccard_item_sim(Index i, Index i2, const NeighborIndex& index) {
  if (i >= index.counts().items) throw UsageError("unknown item index " + std::to_string(i));
  if (i2 >= index.counts().items) throw UsageError("unknown item index " + std::to_string(i2));
  return jaccard(index.item_explanations(i), index.item_explanations(i2));
}

double score_rucf(Index u, Index i, Index e, const NeighborIndex& index) {
  index.check(u, i, e);
  double total = 0.0;
  for (Index other : index.item_users(i)) {
    if (other == u || !contains(index.user_explanations(other), e)) continue;
    total += jaccard(index.user_explanations(u), index.user_explanations(other));
  }
  return total;
}

double score_ricf(Index u, Index i, Index e, const NeighborIndex& index) {
  index.check(u, i, e);
  double total = 0.0;
  for (Index other : index.user_items(u)) {
    if (other == i || !contains(index.item_explanations(other), e)) continue;
    total += jaccard(index.item_explanations(i), index.item_explanations(other));
  }
  return total;
}

void RucfScorer::score_all(Index u, Index i, std::span<double> out) const {
  index_->check(u, i, 0);
  std::fill(out.begin(), out.end(), 0.0);
  const auto& mine = index_->user_explanations(u);
  for (Index other : index_->item_users(i)) {
    if (other == u) continue;
    const auto& theirs = index_->user_explanations(other);
    double s = jaccard(mine, theirs);
    if (s <= 0.0) continue;
    for (Index e : theirs) out[e] += s;
  }
}

void RicfScorer::score_all(Index u, Index i, std::span<double> out) const {
  index_->check(u, i, 0);
  std::fill(out.begin(), out.end(), 0.0);
  const auto& mine = index_->item_explanations(i);
  for (Index other : index_->user_items(u)) {
    if (other == i) continue;
    const auto& theirs = index_->item_explanations(other);
    double s = jaccard(mine, theirs);
    if (s <= 0.0) continue;
    for (Index e : theirs) out[e] += s;
  }
}

double score_rand(Index u, Index i, Index e, std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ u);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(i) << 1));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(e) << 2));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace extra
