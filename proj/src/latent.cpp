#include "extra/rankers.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace extra {

namespace {

constexpr std::string_view kMagic = "extra-model";
constexpr int kFormatVersion = 1;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void fill_normal(Matrix& m, std::mt19937_64& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (double& x : m.data) x = dist(rng);
}

void write_matrix(std::ostream& out, std::string_view tag, const Matrix& m) {
  out << tag << ' ' << m.rows << ' ' << m.cols << '\n';
  char buf[32];
  for (std::size_t r = 0; r < m.rows; ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols; ++c) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, row[c]);
      if (c) out << ' ';
      out.write(buf, end - buf);
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in, std::string_view tag, const std::string& file) {
  std::string got;
  std::size_t rows = 0, cols = 0;
  if (!(in >> got >> rows >> cols) || got != tag) {
    throw DataError(file + ": expected matrix '" + std::string(tag) + "'");
  }
  Matrix m(rows, cols);
  std::string token;
  for (double& x : m.data) {
    if (!(in >> token)) throw DataError(file + ": truncated matrix " + std::string(tag));
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw DataError(file + ": bad number '" + token + "' in " + std::string(tag));
    }
  }
  return m;
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::cd ? "cd" : "pitf"; }

Variant parse_variant(const std::string& s) {
  if (s == "cd" || s == "CD") return Variant::cd;
  if (s == "pitf" || s == "PITF") return Variant::pitf;
  throw UsageError("unknown latent model variant '" + s + "'");
}

LatentModel LatentModel::zeros(Variant variant, const EntityCounts& counts, int factors) {
  if (factors < 1) throw UsageError("factors must be >= 1");
  LatentModel m;
  const auto d = static_cast<std::size_t>(factors);
  m.variant_ = variant;
  m.users_ = Matrix(counts.users, d);
  m.items_ = Matrix(counts.items, d);
  m.exps_ = Matrix(counts.explanations, d);
  if (variant == Variant::pitf) m.exps_item_ = Matrix(counts.explanations, d);
  return m;
}

LatentModel LatentModel::random(Variant variant, const EntityCounts& counts, int factors,
                                std::uint64_t seed, double stddev) {
  LatentModel m = zeros(variant, counts, factors);
  m.seed_ = seed;
  std::mt19937_64 rng(seed);
  fill_normal(m.users_, rng, stddev);
  fill_normal(m.items_, rng, stddev);
  fill_normal(m.exps_, rng, stddev);
  if (variant == Variant::pitf) fill_normal(m.exps_item_, rng, stddev);
  return m;
}

double LatentModel::score(Index u, Index i, Index e) const {
  return variant_ == Variant::cd ? score_cd(*this, u, i, e) : score_pitf(*this, u, i, e);
}

void LatentModel::score_all(Index u, Index i, std::span<double> out) const {
  if (u >= users_.rows || i >= items_.rows) throw UsageError("user or item index out of range");
  if (out.size() != exps_.rows) throw UsageError("score buffer size mismatch");
  const std::size_t d = users_.cols;
  auto p = users_.row(u);
  auto q = items_.row(i);
  if (variant_ == Variant::cd) {
    std::vector<double> pq(d);
    for (std::size_t k = 0; k < d; ++k) pq[k] = p[k] * q[k];
    for (std::size_t e = 0; e < exps_.rows; ++e) out[e] = dot(pq, exps_.row(e));
  } else {
    for (std::size_t e = 0; e < exps_.rows; ++e) {
      out[e] = dot(p, exps_.row(e)) + dot(q, exps_item_.row(e));
    }
  }
}

bool LatentModel::all_finite() const {
  for (const Matrix* m : {&users_, &items_, &exps_, &exps_item_}) {
    for (double x : m->data) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

void LatentModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model " + path.string());
  out << kMagic << ' ' << kFormatVersion << '\n'
      << "variant " << to_string(variant_) << '\n'
      << "factors " << factors() << '\n'
      << "seed " << seed_ << '\n'
      << "users " << users_.rows << '\n'
      << "items " << items_.rows << '\n'
      << "explanations " << exps_.rows << '\n'
      << "vocab " << fingerprint_ << '\n';
  write_matrix(out, "P", users_);
  write_matrix(out, "Q", items_);
  if (variant_ == Variant::cd) {
    write_matrix(out, "O", exps_);
  } else {
    write_matrix(out, "OU", exps_);
    write_matrix(out, "OI", exps_item_);
  }
  if (!out) throw DataError("write failed: " + path.string());
}

LatentModel LatentModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read model " + path.string());
  const std::string file = path.string();

  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic) throw DataError(file + ": not a model file");
  if (version != kFormatVersion) {
    throw DataError(file + ": unsupported model version " + std::to_string(version));
  }
  auto field = [&](std::string_view key) {
    std::string k, v;
    if (!(in >> k >> v) || k != key) throw DataError(file + ": expected '" + std::string(key) + "'");
    return v;
  };
  LatentModel m;
  m.variant_ = parse_variant(field("variant"));
  const int d = std::stoi(field("factors"));
  m.seed_ = std::stoull(field("seed"));
  const std::size_t users = std::stoull(field("users"));
  const std::size_t items = std::stoull(field("items"));
  const std::size_t exps = std::stoull(field("explanations"));
  m.fingerprint_ = std::stoull(field("vocab"));

  m.users_ = read_matrix(in, "P", file);
  m.items_ = read_matrix(in, "Q", file);
  if (m.variant_ == Variant::cd) {
    m.exps_ = read_matrix(in, "O", file);
  } else {
    m.exps_ = read_matrix(in, "OU", file);
    m.exps_item_ = read_matrix(in, "OI", file);
  }
  auto ok = [&](const Matrix& mat, std::size_t rows) {
    return mat.rows == rows && mat.cols == static_cast<std::size_t>(d);
  };
  if (!ok(m.users_, users) || !ok(m.items_, items) || !ok(m.exps_, exps) ||
      (m.variant_ == Variant::pitf && !ok(m.exps_item_, exps))) {
    throw DataError(file + ": matrix shapes disagree with header");
  }
  return m;
}

double score_cd(const LatentModel& model, Index u, Index i, Index e) {
  if (model.variant() != Variant::cd) throw UsageError("score_cd needs a CD model");
  auto c = model.counts();
  if (u >= c.users || i >= c.items || e >= c.explanations) throw UsageError("index out of range");
  auto p = model.user_factors().row(u);
  auto q = model.item_factors().row(i);
  auto o = model.exp_factors().row(e);
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * q[k] * o[k];
  return s;
}

double score_pitf(const LatentModel& model, Index u, Index i, Index e) {
  if (model.variant() != Variant::pitf) throw UsageError("score_pitf needs a PITF model");
  auto c = model.counts();
  if (u >= c.users || i >= c.items || e >= c.explanations) throw UsageError("index out of range");
  return dot(model.user_factors().row(u), model.exp_user_factors().row(e)) +
         dot(model.item_factors().row(i), model.exp_item_factors().row(e));
}

}  // namespace extra
