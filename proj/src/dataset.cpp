#include "extra/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <string_view>

namespace extra {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kIdsFile = "IDs.txt";
constexpr std::string_view kTextFile = "id2exp.txt";

std::vector<std::string_view> split_on(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

void Dataset::add_record(const std::string& user, const std::string& item, int rating,
                         std::int64_t timestamp, std::vector<ExplanationRef> explanations) {
  if (explanations.empty()) {
    throw DataError("record (" + user + ", " + item + ") has no explanation");
  }
  if (user.empty() || item.empty()) throw DataError("empty user or item id");
  DatasetRecord r;
  r.user = users_.add(user);
  r.item = items_.add(item);
  r.rating = rating;
  r.timestamp = timestamp;
  for (const auto& ref : explanations) explanations_.add(ref.exp_id);
  r.explanations = std::move(explanations);
  records_.push_back(std::move(r));
}

std::vector<Triplet> Dataset::triplets() const {
  std::vector<Triplet> out;
  std::set<Triplet> seen;
  for (const auto& r : records_) {
    for (const auto& ref : r.explanations) {
      Triplet t{r.user, r.item, explanations_.at(ref.exp_id)};
      if (seen.insert(t).second) out.push_back(t);
    }
  }
  return out;
}

const std::string& Dataset::text(ExpId id) const {
  auto it = texts_.find(id);
  if (it == texts_.end()) throw DataError("no text for id " + std::to_string(id));
  return it->second;
}

void Dataset::validate() const {
  for (const auto& r : records_) {
    for (const auto& ref : r.explanations) {
      for (ExpId id : {ref.exp_id, ref.sen_id}) {
        if (!texts_.contains(id)) throw DataError("unmapped id " + std::to_string(id));
      }
    }
  }
}

void emit_dataset(const Dataset& dataset, const fs::path& out_dir) {
  dataset.validate();
  fs::create_directories(out_dir);

  std::set<ExpId> referenced;
  {
    auto out = open_out(out_dir / kIdsFile);
    for (const auto& r : dataset.records()) {
      out << dataset.users().key(r.user) << "::" << dataset.items().key(r.item)
          << "::" << r.rating << "::" << r.timestamp << "::";
      for (std::size_t k = 0; k < r.explanations.size(); ++k) {
        out << (k ? ":" : "") << r.explanations[k].exp_id;
      }
      out << "::";
      for (std::size_t k = 0; k < r.explanations.size(); ++k) {
        out << (k ? ":" : "") << r.explanations[k].sen_id;
      }
      out << '\n';
      for (const auto& ref : r.explanations) {
        referenced.insert(ref.exp_id);
        referenced.insert(ref.sen_id);
      }
    }
    if (!out) throw DataError("write failed: " + (out_dir / kIdsFile).string());
  }
  {
    auto out = open_out(out_dir / kTextFile);
    for (ExpId id : referenced) out << id << "::" << dataset.text(id) << '\n';
    if (!out) throw DataError("write failed: " + (out_dir / kTextFile).string());
  }
}

Dataset load_dataset(const fs::path& dir) {
  const fs::path ids_path = dir / kIdsFile;
  const fs::path text_path = dir / kTextFile;
  if (!fs::exists(ids_path)) throw DataError("missing " + ids_path.string());
  if (!fs::exists(text_path)) throw DataError("missing " + text_path.string());

  Dataset ds;
  std::string line;
  {
    auto in = open_in(text_path);
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(line);
      if (line.empty()) continue;
      std::size_t sep = line.find("::");
      ExpId id = 0;
      if (sep == std::string::npos || !parse_int(std::string_view(line).substr(0, sep), id)) {
        throw ParseError(text_path.string(), line_no, "expected expID::expSentence");
      }
      ds.set_text(id, line.substr(sep + 2));
    }
  }

  auto in = open_in(ids_path);
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw ParseError(ids_path.string(), line_no, what);
    };
    auto fields = split_on(line, "::");
    if (fields.size() != 6) {
      fail("expected 6 '::'-separated fields, got " + std::to_string(fields.size()));
    }
    int rating = 0;
    std::int64_t ts = 0;
    if (!parse_int(fields[2], rating)) fail("rating is not an integer");
    if (!parse_int(fields[3], ts)) fail("timestamp is not an integer");
    auto exp_ids = split_on(fields[4], ":");
    auto sen_ids = split_on(fields[5], ":");
    if (exp_ids.size() != sen_ids.size()) fail("expID and senID lists differ in length");
    std::vector<ExplanationRef> refs;
    for (std::size_t k = 0; k < exp_ids.size(); ++k) {
      ExplanationRef ref;
      if (!parse_int(exp_ids[k], ref.exp_id)) fail("bad expID '" + std::string(exp_ids[k]) + "'");
      if (!parse_int(sen_ids[k], ref.sen_id)) fail("bad senID '" + std::string(sen_ids[k]) + "'");
      for (ExpId id : {ref.exp_id, ref.sen_id}) {
        if (!ds.texts().contains(id)) fail("id " + std::to_string(id) + " missing from id2exp.txt");
      }
      refs.push_back(ref);
    }
    if (fields[0].empty() || fields[1].empty()) fail("empty user or item id");
    ds.add_record(std::string(fields[0]), std::string(fields[1]), rating, ts, std::move(refs));
  }
  return ds;
}

DatasetStats DatasetStats::from_counts(std::size_t users, std::size_t items,
                                       std::size_t explanations, std::size_t pairs,
                                       std::size_t triplets) {
  DatasetStats s;
  s.n_users = users;
  s.n_items = items;
  s.n_explanations = explanations;
  s.n_pairs = pairs;
  s.n_triplets = triplets;
  s.exps_per_pair = pairs == 0 ? 0.0 : static_cast<double>(triplets) / static_cast<double>(pairs);
  const double cube = static_cast<double>(users) * static_cast<double>(items) *
                      static_cast<double>(explanations);
  s.density = cube == 0.0 ? 0.0 : static_cast<double>(triplets) / cube;
  return s;
}

DatasetStats compute_stats(const Dataset& dataset) {
  auto triplets = dataset.triplets();
  std::set<std::pair<Index, Index>> pairs;
  for (const auto& t : triplets) pairs.emplace(t.user, t.item);
  auto c = dataset.counts();
  return DatasetStats::from_counts(c.users, c.items, c.explanations, pairs.size(),
                                   triplets.size());
}

namespace {

struct Coverage {
  std::vector<char> user, item, exp;

  explicit Coverage(const EntityCounts& c)
      : user(c.users, 0), item(c.items, 0), exp(c.explanations, 0) {}

  void add(const Triplet& t) {
    user[t.user] = 1;
    item[t.item] = 1;
    exp[t.explanation] = 1;
  }
  bool adds_new(const Triplet& t) const {
    return !user[t.user] || !item[t.item] || !exp[t.explanation];
  }
  bool complete() const {
    auto all = [](const std::vector<char>& v) {
      return std::all_of(v.begin(), v.end(), [](char c) { return c != 0; });
    };
    return all(user) && all(item) && all(exp);
  }
};

void check_range(const Triplet& t, const EntityCounts& c) {
  if (t.user >= c.users || t.item >= c.items || t.explanation >= c.explanations) {
    throw DataError("triplet index out of range");
  }
}

}  // namespace

bool split_covers(const Split& split, const EntityCounts& counts) {
  Coverage cov(counts);
  for (const auto& t : split.train) cov.add(t);
  return cov.complete();
}

std::vector<Split> make_splits(std::span<const Triplet> triplets, const EntityCounts& counts,
                               double train_fraction, int n_splits, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw UsageError("train fraction must lie in (0, 1]");
  }
  if (n_splits < 1) throw UsageError("need at least one split");

  Coverage all(counts);
  for (const auto& t : triplets) {
    check_range(t, counts);
    all.add(t);
  }
  if (!all.complete()) {
    throw DataError("coverage unsatisfiable: some user, item or explanation has no triplet");
  }

  const std::size_t n = triplets.size();
  const auto n_train = static_cast<std::size_t>(
      std::ceil(train_fraction * static_cast<double>(n) - 1e-9));

  std::vector<Split> splits;
  for (int k = 0; k < n_splits; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    Split split;
    split.seed = seed;
    Coverage cov(counts);
    std::vector<std::size_t> test_pos;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const Triplet& t = triplets[order[pos]];
      if (pos < n_train) {
        split.train.push_back(t);
        cov.add(t);
      } else {
        test_pos.push_back(order[pos]);
      }
    }
    for (std::size_t idx : test_pos) {
      const Triplet& t = triplets[idx];
      if (cov.adds_new(t)) {
        split.train.push_back(t);
        cov.add(t);
      } else {
        split.test.push_back(t);
      }
    }
    splits.push_back(std::move(split));
  }
  return splits;
}

void write_split(const Split& split, const Dataset& dataset, const fs::path& dir, int k) {
  fs::create_directories(dir);
  auto write = [&](const std::vector<Triplet>& part, const std::string& ext) {
    fs::path path = dir / ("split" + std::to_string(k) + ext);
    auto out = open_out(path);
    for (const auto& t : part) {
      out << dataset.users().key(t.user) << "::" << dataset.items().key(t.item)
          << "::" << dataset.explanations().key(t.explanation) << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
  };
  write(split.train, ".train");
  write(split.test, ".test");
}

Split read_split(const Dataset& dataset, const fs::path& dir, int k) {
  auto read = [&](const std::string& ext) {
    fs::path path = dir / ("split" + std::to_string(k) + ext);
    auto in = open_in(path);
    std::vector<Triplet> part;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(line);
      if (line.empty()) continue;
      auto fields = split_on(line, "::");
      ExpId exp = 0;
      if (fields.size() != 3 || !parse_int(fields[2], exp)) {
        throw ParseError(path.string(), line_no, "expected userID::itemID::expID");
      }
      std::string user(fields[0]), item(fields[1]);
      if (!dataset.users().contains(user)) throw ParseError(path.string(), line_no, "unknown user " + user);
      if (!dataset.items().contains(item)) throw ParseError(path.string(), line_no, "unknown item " + item);
      if (!dataset.explanations().contains(exp)) {
        throw ParseError(path.string(), line_no, "unknown explanation " + std::to_string(exp));
      }
      part.push_back({dataset.users().at(user), dataset.items().at(item),
                      dataset.explanations().at(exp)});
    }
    return part;
  };
  Split s;
  s.train = read(".train");
  s.test = read(".test");
  return s;
}

}  // namespace extra
