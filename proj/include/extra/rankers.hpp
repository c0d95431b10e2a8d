#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "extra/dataset.hpp"

namespace extra {

/// Scores explanations for a (user, item) pair. Implementations are
/// read-only after construction and safe to call concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string name() const = 0;
  virtual std::size_t num_explanations() const = 0;
  virtual double score(Index u, Index i, Index e) const = 0;
  /// Fills out[e] for every explanation; out.size() == num_explanations().
  virtual void score_all(Index u, Index i, std::span<double> out) const;
};

/// Interaction sets derived from one training split. All lists are sorted.
class NeighborIndex {
 public:
  NeighborIndex(std::span<const Triplet> train, const EntityCounts& counts);

  const std::vector<Index>& user_explanations(Index u) const { return user_exps_.at(u); }
  const std::vector<Index>& item_explanations(Index i) const { return item_exps_.at(i); }
  const std::vector<Index>& item_users(Index i) const { return item_users_.at(i); }
  const std::vector<Index>& user_items(Index u) const { return user_items_.at(u); }
  const std::vector<Index>& explanation_users(Index e) const { return exp_users_.at(e); }
  const std::vector<Index>& explanation_items(Index e) const { return exp_items_.at(e); }
  /// Explanations of the (u, i) pair in training; empty if the pair is unseen.
  std::span<const Index> pair_explanations(Index u, Index i) const;

  const EntityCounts& counts() const { return counts_; }
  void check(Index u, Index i, Index e) const;

 private:
  EntityCounts counts_;
  std::vector<std::vector<Index>> user_exps_, item_exps_, item_users_, user_items_, exp_users_,
      exp_items_;
  std::unordered_map<std::uint64_t, std::vector<Index>> pair_exps_;
};

/// |A ∩ B| / |A ∪ B| over sorted lists; 0 when both are empty.
double jaccard(std::span<const Index> a, std::span<const Index> b);

double jaccard_user_sim(Index u, Index u2, const NeighborIndex& index);
double jaccard_item_sim(Index i, Index i2, const NeighborIndex& index);

/// Sum of s(u, u') over users u' != u with s > 0 who interacted with item i
/// and with explanation e. Neighborhoods are not truncated.
double score_rucf(Index u, Index i, Index e, const NeighborIndex& index);
/// Item-side mirror of score_rucf.
double score_ricf(Index u, Index i, Index e, const NeighborIndex& index);

class RucfScorer final : public Scorer {
 public:
  explicit RucfScorer(const NeighborIndex& index) : index_(&index) {}
  std::string name() const override { return "RUCF"; }
  std::size_t num_explanations() const override { return index_->counts().explanations; }
  double score(Index u, Index i, Index e) const override { return score_rucf(u, i, e, *index_); }
  void score_all(Index u, Index i, std::span<double> out) const override;

 private:
  const NeighborIndex* index_;
};

class RicfScorer final : public Scorer {
 public:
  explicit RicfScorer(const NeighborIndex& index) : index_(&index) {}
  std::string name() const override { return "RICF"; }
  std::size_t num_explanations() const override { return index_->counts().explanations; }
  double score(Index u, Index i, Index e) const override { return score_ricf(u, i, e, *index_); }
  void score_all(Index u, Index i, std::span<double> out) const override;

 private:
  const NeighborIndex* index_;
};

/// Uniform [0, 1) value from a seeded hash of (u, i, e).
double score_rand(Index u, Index i, Index e, std::uint64_t seed);

class RandScorer final : public Scorer {
 public:
  RandScorer(std::size_t num_explanations, std::uint64_t seed)
      : n_exps_(num_explanations), seed_(seed) {}
  std::string name() const override { return "RAND"; }
  std::size_t num_explanations() const override { return n_exps_; }
  double score(Index u, Index i, Index e) const override { return score_rand(u, i, e, seed_); }

 private:
  std::size_t n_exps_;
  std::uint64_t seed_;
};

// ---------------------------------------------------------------------------
// Latent factor models

enum class Variant { cd, pitf };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// CD uses user_factors, item_factors and exp_factors; PITF uses
/// user_factors, item_factors, exp_user_factors and exp_item_factors.
class LatentModel final : public Scorer {
 public:
  LatentModel() = default;

  /// Zero-mean normal init with the given standard deviation.
  static LatentModel random(Variant variant, const EntityCounts& counts, int factors,
                            std::uint64_t seed, double stddev = 0.1);
  static LatentModel zeros(Variant variant, const EntityCounts& counts, int factors);

  std::string name() const override { return variant_ == Variant::cd ? "CD" : "PITF"; }
  std::size_t num_explanations() const override { return exps_.rows; }
  double score(Index u, Index i, Index e) const override;
  void score_all(Index u, Index i, std::span<double> out) const override;

  Variant variant() const { return variant_; }
  int factors() const { return static_cast<int>(users_.cols); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t vocab_fingerprint() const { return fingerprint_; }
  void set_vocab_fingerprint(std::uint64_t f) { fingerprint_ = f; }
  EntityCounts counts() const { return {users_.rows, items_.rows, exps_.rows}; }

  Matrix& user_factors() { return users_; }
  Matrix& item_factors() { return items_; }
  /// CD: the single explanation matrix. PITF: explanation factors paired
  /// with users.
  Matrix& exp_factors() { return exps_; }
  Matrix& exp_user_factors() { return exps_; }
  /// PITF only: explanation factors paired with items.
  Matrix& exp_item_factors() { return exps_item_; }
  const Matrix& user_factors() const { return users_; }
  const Matrix& item_factors() const { return items_; }
  const Matrix& exp_factors() const { return exps_; }
  const Matrix& exp_user_factors() const { return exps_; }
  const Matrix& exp_item_factors() const { return exps_item_; }

  bool all_finite() const;

  void save(const std::filesystem::path& path) const;
  static LatentModel load(const std::filesystem::path& path);

  friend bool operator==(const LatentModel& a, const LatentModel& b) {
    return a.variant_ == b.variant_ && a.seed_ == b.seed_ && a.fingerprint_ == b.fingerprint_ &&
           a.users_ == b.users_ && a.items_ == b.items_ && a.exps_ == b.exps_ &&
           a.exps_item_ == b.exps_item_;
  }

 private:
  Variant variant_ = Variant::pitf;
  std::uint64_t seed_ = 0;
  std::uint64_t fingerprint_ = 0;
  Matrix users_, items_, exps_, exps_item_;
};

/// sum_k p_uk q_ik o_ek. Throws UsageError for a PITF model.
double score_cd(const LatentModel& model, Index u, Index i, Index e);
/// p_u . o^U_e + q_i . o^I_e. Throws UsageError for a CD model.
double score_pitf(const LatentModel& model, Index u, Index i, Index e);

// ---------------------------------------------------------------------------
// BPR training

struct TrainConfig {
  int factors = 20;
  double lambda = 0.01;
  double learning_rate = 0.01;
  int iterations = 500;  // full passes over the training triplets
  std::uint64_t seed = 1;
  double init_stddev = 0.1;

  void validate() const;
};

/// Logistic argument clamp used by loss and gradient.
inline constexpr double kSigmoidClamp = 35.0;

/// -ln sigmoid(score(u,i,pos) - score(u,i,neg)) plus lambda times the squared
/// norm of every parameter row the step touches.
double bpr_step_loss(const LatentModel& model, Index u, Index i, Index pos, Index neg,
                     double lambda);

/// Gradient of bpr_step_loss with respect to the touched rows. For CD,
/// pos_item/neg_item are empty.
struct StepGradient {
  std::vector<double> user, item, pos, neg, pos_item, neg_item;
};
StepGradient bpr_step_gradient(const LatentModel& model, Index u, Index i, Index pos,
                               Index neg, double lambda);

/// One SGD update: theta -= learning_rate * gradient. Returns the step loss
/// evaluated before the update.
double bpr_sgd_step(LatentModel& model, Index u, Index i, Index pos, Index neg, double lambda,
                    double learning_rate);

struct TrainResult {
  LatentModel model;
  std::vector<double> loss_per_iteration;  // mean step loss of each pass
};

using TrainProgress = std::function<void(int iteration, double mean_loss)>;

/// Throws NumericError when a parameter becomes non-finite.
TrainResult train_bpr(std::span<const Triplet> train, const EntityCounts& counts,
                      Variant variant, const TrainConfig& config,
                      const TrainProgress& progress = {});

/// Mean step loss over `train` with one fixed negative per triplet drawn from
/// `seed`; used to compare models on identical samples.
double mean_bpr_loss(const LatentModel& model, std::span<const Triplet> train,
                     const NeighborIndex& index, double lambda, std::uint64_t seed);

}  // namespace extra
