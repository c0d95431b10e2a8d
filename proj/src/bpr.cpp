#include "extra/rankers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace extra {

void TrainConfig::validate() const {
  if (factors < 1) throw UsageError("factors must be >= 1");
  if (!(lambda >= 0.0)) throw UsageError("lambda must be >= 0");
  if (!(learning_rate > 0.0)) throw UsageError("learning rate must be > 0");
  if (iterations < 1) throw UsageError("iterations must be >= 1");
  if (!(init_stddev >= 0.0)) throw UsageError("init stddev must be >= 0");
}

namespace {

double clamp_logit(double x) { return std::clamp(x, -kSigmoidClamp, kSigmoidClamp); }

// -ln sigmoid(x) = ln(1 + e^-x)
double neg_log_sigmoid(double x) { return std::log1p(std::exp(-clamp_logit(x))); }

// d/dx of -ln sigmoid(x) = -sigmoid(-x)
double neg_log_sigmoid_slope(double x) { return -1.0 / (1.0 + std::exp(clamp_logit(x))); }

double sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void check_step(const LatentModel& model, Index u, Index i, Index pos, Index neg) {
  if (pos == neg) throw UsageError("positive and negative explanation must differ");
  auto c = model.counts();
  if (u >= c.users || i >= c.items || pos >= c.explanations || neg >= c.explanations) {
    throw UsageError("index out of range in BPR step");
  }
}

// Uniform draw from all explanations minus the pair's positives. Returns
// false when the pair already uses every explanation.
bool sample_negative(std::span<const Index> positives, std::size_t n_exps, std::mt19937_64& rng,
                     Index& out) {
  if (positives.size() >= n_exps) return false;
  std::uniform_int_distribution<Index> pick(0, static_cast<Index>(n_exps - 1));
  do {
    out = pick(rng);
  } while (std::binary_search(positives.begin(), positives.end(), out));
  return true;
}

}  // namespace

double bpr_step_loss(const LatentModel& model, Index u, Index i, Index pos, Index neg,
                     double lambda) {
  check_step(model, u, i, pos, neg);
  const double x = model.score(u, i, pos) - model.score(u, i, neg);
  double reg = sq_norm(model.user_factors().row(u)) + sq_norm(model.item_factors().row(i)) +
               sq_norm(model.exp_factors().row(pos)) + sq_norm(model.exp_factors().row(neg));
  if (model.variant() == Variant::pitf) {
    reg += sq_norm(model.exp_item_factors().row(pos)) + sq_norm(model.exp_item_factors().row(neg));
  }
  return neg_log_sigmoid(x) + lambda * reg;
}

StepGradient bpr_step_gradient(const LatentModel& model, Index u, Index i, Index pos,
                               Index neg, double lambda) {
  check_step(model, u, i, pos, neg);
  const double g = neg_log_sigmoid_slope(model.score(u, i, pos) - model.score(u, i, neg));
  const double r = 2.0 * lambda;
  auto p = model.user_factors().row(u);
  auto q = model.item_factors().row(i);
  const std::size_t d = p.size();

  StepGradient grad;
  grad.user.resize(d);
  grad.item.resize(d);
  grad.pos.resize(d);
  grad.neg.resize(d);
  if (model.variant() == Variant::cd) {
    auto op = model.exp_factors().row(pos);
    auto on = model.exp_factors().row(neg);
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = op[k] - on[k];
      grad.user[k] = g * q[k] * diff + r * p[k];
      grad.item[k] = g * p[k] * diff + r * q[k];
      grad.pos[k] = g * p[k] * q[k] + r * op[k];
      grad.neg[k] = -g * p[k] * q[k] + r * on[k];
    }
  } else {
    auto up = model.exp_user_factors().row(pos);
    auto un = model.exp_user_factors().row(neg);
    auto ip = model.exp_item_factors().row(pos);
    auto in = model.exp_item_factors().row(neg);
    grad.pos_item.resize(d);
    grad.neg_item.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      grad.user[k] = g * (up[k] - un[k]) + r * p[k];
      grad.item[k] = g * (ip[k] - in[k]) + r * q[k];
      grad.pos[k] = g * p[k] + r * up[k];
      grad.neg[k] = -g * p[k] + r * un[k];
      grad.pos_item[k] = g * q[k] + r * ip[k];
      grad.neg_item[k] = -g * q[k] + r * in[k];
    }
  }
  return grad;
}

double bpr_sgd_step(LatentModel& model, Index u, Index i, Index pos, Index neg, double lambda,
                    double learning_rate) {
  check_step(model, u, i, pos, neg);
  const double x = model.score(u, i, pos) - model.score(u, i, neg);
  const double g = neg_log_sigmoid_slope(x);
  const double r = 2.0 * lambda;
  const double lr = learning_rate;
  auto p = model.user_factors().row(u);
  auto q = model.item_factors().row(i);
  const std::size_t d = p.size();
  double reg = 0.0;

  // Every update reads pre-step values only.
  if (model.variant() == Variant::cd) {
    auto op = model.exp_factors().row(pos);
    auto on = model.exp_factors().row(neg);
    for (std::size_t k = 0; k < d; ++k) {
      const double pk = p[k], qk = q[k], opk = op[k], onk = on[k];
      reg += pk * pk + qk * qk + opk * opk + onk * onk;
      const double diff = opk - onk;
      p[k] = pk - lr * (g * qk * diff + r * pk);
      q[k] = qk - lr * (g * pk * diff + r * qk);
      op[k] = opk - lr * (g * pk * qk + r * opk);
      on[k] = onk - lr * (-g * pk * qk + r * onk);
    }
  } else {
    auto up = model.exp_user_factors().row(pos);
    auto un = model.exp_user_factors().row(neg);
    auto ip = model.exp_item_factors().row(pos);
    auto in = model.exp_item_factors().row(neg);
    for (std::size_t k = 0; k < d; ++k) {
      const double pk = p[k], qk = q[k], upk = up[k], unk = un[k], ipk = ip[k], ink = in[k];
      reg += pk * pk + qk * qk + upk * upk + unk * unk + ipk * ipk + ink * ink;
      p[k] = pk - lr * (g * (upk - unk) + r * pk);
      q[k] = qk - lr * (g * (ipk - ink) + r * qk);
      up[k] = upk - lr * (g * pk + r * upk);
      un[k] = unk - lr * (-g * pk + r * unk);
      ip[k] = ipk - lr * (g * qk + r * ipk);
      in[k] = ink - lr * (-g * qk + r * ink);
    }
  }
  return neg_log_sigmoid(x) + lambda * reg;
}

TrainResult train_bpr(std::span<const Triplet> train, const EntityCounts& counts,
                      Variant variant, const TrainConfig& config, const TrainProgress& progress) {
  config.validate();
  NeighborIndex index(train, counts);
  TrainResult result{LatentModel::random(variant, counts, config.factors, config.seed,
                                         config.init_stddev),
                     {}};
  LatentModel& model = result.model;
  // Separate stream from the initializer's.
  std::mt19937_64 rng(config.seed ^ 0x5bd1e9955bd1e995ULL);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  result.loss_per_iteration.reserve(static_cast<std::size_t>(config.iterations));

  for (int it = 0; it < config.iterations; ++it) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t steps = 0;
    for (std::size_t pos : order) {
      const Triplet& t = train[pos];
      Index neg = 0;
      if (!sample_negative(index.pair_explanations(t.user, t.item), counts.explanations, rng, neg)) {
        continue;
      }
      double loss = bpr_sgd_step(model, t.user, t.item, t.explanation, neg, config.lambda,
                                 config.learning_rate);
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite BPR loss at iteration " + std::to_string(it) +
                           " on triplet (" + std::to_string(t.user) + ", " +
                           std::to_string(t.item) + ", " + std::to_string(t.explanation) +
                           "), negative " + std::to_string(neg));
      }
      total += loss;
      ++steps;
    }
    if (!model.all_finite()) {
      throw NumericError("non-finite parameter after iteration " + std::to_string(it) +
                         "; try a smaller learning rate");
    }
    const double mean = steps ? total / static_cast<double>(steps) : 0.0;
    result.loss_per_iteration.push_back(mean);
    if (progress) progress(it, mean);
  }
  return result;
}

double mean_bpr_loss(const LatentModel& model, std::span<const Triplet> train,
                     const NeighborIndex& index, double lambda, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double total = 0.0;
  std::size_t steps = 0;
  for (const auto& t : train) {
    Index neg = 0;
    if (!sample_negative(index.pair_explanations(t.user, t.item), index.counts().explanations,
                         rng, neg)) {
      continue;
    }
    total += bpr_step_loss(model, t.user, t.item, t.explanation, neg, lambda);
    ++steps;
  }
  return steps ? total / static_cast<double>(steps) : 0.0;
}

}  // namespace extra
