#include "eabandit/data.hpp"

#include "eabandit/csv.hpp"
#include "eabandit/errors.hpp"
#include "eabandit/random.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace eabandit {

namespace {

std::string_view detect_delimiter(std::string_view line) {
  if (line.find("::") != std::string_view::npos) return "::";
  if (line.find('\t') != std::string_view::npos) return "\t";
  if (line.find(',') != std::string_view::npos) return ",";
  return " ";
}

std::optional<Rating> parse_rating_line(std::string_view line,
                                        std::string_view delimiter) {
  const auto fields = split_fields(line, delimiter);
  if (fields.size() < 3 || fields.size() > 4) return std::nullopt;
  Rating r;
  if (!parse_int(fields[0], r.user) || !parse_int(fields[1], r.item) ||
      !parse_double(fields[2], r.rating)) {
    return std::nullopt;
  }
  if (!(r.rating >= 1.0 && r.rating <= 5.0)) return std::nullopt;
  if (fields.size() == 4) {
    std::int64_t ts = 0;
    double ts_real = 0.0;
    if (parse_int(fields[3], ts)) {
      r.timestamp = ts;
    } else if (parse_double(fields[3], ts_real)) {
      r.timestamp = static_cast<std::int64_t>(ts_real);
    } else {
      return std::nullopt;
    }
  }
  return r;
}

struct PairHash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const {
    return std::hash<std::int64_t>()(p.first * 1000003 ^ p.second);
  }
};

}  // namespace

RatingsTable parse_ratings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read ratings file " + path.string());
  return parse_ratings(in);
}

RatingsTable parse_ratings(std::istream& in) {
  RatingsTable table;
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::size_t,
                     PairHash>
      seen;
  std::string_view delimiter;
  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      delimiter = detect_delimiter(line);
      first = false;
      std::int64_t probe = 0;
      const auto fields = split_fields(line, delimiter);
      if (!fields.empty() && !parse_int(fields[0], probe)) continue;  // header
    }
    ++table.total_lines;
    auto rating = parse_rating_line(line, delimiter);
    if (!rating) {
      ++table.malformed_lines;
      continue;
    }
    const auto key = std::make_pair(rating->user, rating->item);
    const auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, table.rows.size());
      table.rows.push_back(*rating);
      continue;
    }
    ++table.duplicates_dropped;
    Rating& kept = table.rows[it->second];
    const bool newer = !kept.timestamp || !rating->timestamp ||
                       *rating->timestamp >= *kept.timestamp;
    if (newer) kept = *rating;
  }
  if (table.total_lines > 0 &&
      static_cast<double>(table.malformed_lines) >
          0.01 * static_cast<double>(table.total_lines)) {
    throw format_error(std::to_string(table.malformed_lines) + " of " +
                       std::to_string(table.total_lines) +
                       " rating lines are malformed (limit 1%)");
  }
  return table;
}

BinaryInteractions binarize(const RatingsTable& ratings) {
  BinaryInteractions out;
  out.reserve(ratings.rows.size());
  for (const Rating& r : ratings.rows) {
    out.push_back({r.user, r.item, r.rating >= 4.0 ? 1 : 0});
  }
  return out;
}

namespace {

std::unordered_set<std::int64_t> most_frequent(
    const std::unordered_map<std::int64_t, std::size_t>& counts,
    std::size_t keep) {
  std::vector<std::pair<std::int64_t, std::size_t>> ranked(counts.begin(),
                                                           counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > keep) ranked.resize(keep);
  std::unordered_set<std::int64_t> ids;
  for (const auto& [id, count] : ranked) ids.insert(id);
  return ids;
}

}  // namespace

BinaryInteractions filter_active(const BinaryInteractions& data,
                                 std::size_t top_users,
                                 std::optional<std::size_t> top_items) {
  std::unordered_map<std::int64_t, std::size_t> user_counts;
  std::unordered_map<std::int64_t, std::size_t> item_counts;
  for (const Interaction& x : data) {
    ++user_counts[x.user];
    ++item_counts[x.item];
  }
  const auto users = most_frequent(user_counts, top_users);
  std::unordered_set<std::int64_t> items;
  if (top_items) items = most_frequent(item_counts, *top_items);

  BinaryInteractions out;
  for (const Interaction& x : data) {
    if (!users.contains(x.user)) continue;
    if (top_items && !items.contains(x.item)) continue;
    out.push_back(x);
  }
  return out;
}

std::pair<BinaryInteractions, BinaryInteractions> split_train_test(
    const BinaryInteractions& data, std::uint64_t seed) {
  std::map<std::int64_t, BinaryInteractions> by_user;
  for (const Interaction& x : data) by_user[x.user].push_back(x);

  BinaryInteractions train;
  BinaryInteractions test;
  for (auto& [user, rows] : by_user) {
    std::sort(rows.begin(), rows.end(),
              [](const Interaction& a, const Interaction& b) {
                return a.item < b.item;
              });
    Rng rng = make_rng(seed, streams::kSplit,
                       static_cast<std::uint64_t>(user));
    std::shuffle(rows.begin(), rows.end(), rng);
    const std::size_t n_train = (rows.size() + 1) / 2;
    auto mid = rows.begin() + static_cast<long>(n_train);
    BinaryInteractions tr(rows.begin(), mid);
    BinaryInteractions te(mid, rows.end());
    const auto by_item = [](const Interaction& a, const Interaction& b) {
      return a.item < b.item;
    };
    std::sort(tr.begin(), tr.end(), by_item);
    std::sort(te.begin(), te.end(), by_item);
    train.insert(train.end(), tr.begin(), tr.end());
    test.insert(test.end(), te.begin(), te.end());
  }
  return {std::move(train), std::move(test)};
}

namespace {

struct Observation {
  std::size_t index;
  double label;
};

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::size_t index_of(const std::vector<std::int64_t>& ids, std::int64_t id) {
  return static_cast<std::size_t>(
      std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
}

// Ridge solve for one row of `target` given the fixed factor matrix.
void solve_rows(const std::vector<std::vector<Observation>>& observed,
                const Eigen::MatrixXd& fixed, double reg,
                Eigen::MatrixXd& target) {
  const Eigen::Index d = fixed.cols();
  Eigen::MatrixXd gram(d, d);
  Eigen::VectorXd rhs(d);
  for (std::size_t r = 0; r < observed.size(); ++r) {
    gram.setIdentity();
    gram *= reg;
    rhs.setZero();
    for (const Observation& o : observed[r]) {
      const auto f = fixed.row(static_cast<Eigen::Index>(o.index));
      gram.noalias() += f.transpose() * f;
      rhs.noalias() += o.label * f.transpose();
    }
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
      throw numeric_error("ALS normal equations are not positive definite");
    }
    target.row(static_cast<Eigen::Index>(r)) = llt.solve(rhs).transpose();
  }
}

}  // namespace

double factorization_objective(const BinaryInteractions& train,
                               const FactorizationResult& fr) {
  double loss = 0.0;
  for (const Interaction& x : train) {
    const auto u = static_cast<Eigen::Index>(index_of(fr.user_ids, x.user));
    const auto i = static_cast<Eigen::Index>(index_of(fr.item_ids, x.item));
    const double err =
        x.label - fr.user_embeddings.row(u).dot(fr.item_embeddings.row(i));
    loss += err * err;
  }
  return loss + fr.config.regularization *
                    (fr.user_embeddings.squaredNorm() +
                     fr.item_embeddings.squaredNorm());
}

FactorizationResult factorize(const BinaryInteractions& train,
                              const FactorizationConfig& config) {
  if (config.dim == 0) throw config_error("factorization dimension must be > 0");
  if (!(config.regularization > 0.0)) {
    throw config_error("factorization regularization must be > 0");
  }
  if (train.empty()) throw config_error("cannot factorize an empty training set");

  FactorizationResult fr;
  fr.config = config;
  std::vector<std::int64_t> users;
  std::vector<std::int64_t> items;
  for (const Interaction& x : train) {
    users.push_back(x.user);
    items.push_back(x.item);
  }
  fr.user_ids = sorted_unique(std::move(users));
  fr.item_ids = sorted_unique(std::move(items));

  std::vector<std::vector<Observation>> by_user(fr.user_ids.size());
  std::vector<std::vector<Observation>> by_item(fr.item_ids.size());
  for (const Interaction& x : train) {
    const std::size_t u = index_of(fr.user_ids, x.user);
    const std::size_t i = index_of(fr.item_ids, x.item);
    by_user[u].push_back({i, static_cast<double>(x.label)});
    by_item[i].push_back({u, static_cast<double>(x.label)});
  }

  const auto d = static_cast<Eigen::Index>(config.dim);
  Rng rng = make_rng(config.seed, streams::kFactorization);
  std::normal_distribution<double> normal(0.0, 0.1);
  fr.user_embeddings.resize(static_cast<Eigen::Index>(fr.user_ids.size()), d);
  fr.item_embeddings.resize(static_cast<Eigen::Index>(fr.item_ids.size()), d);
  for (Eigen::Index r = 0; r < fr.user_embeddings.rows(); ++r)
    for (Eigen::Index c = 0; c < d; ++c) fr.user_embeddings(r, c) = normal(rng);
  for (Eigen::Index r = 0; r < fr.item_embeddings.rows(); ++r)
    for (Eigen::Index c = 0; c < d; ++c) fr.item_embeddings(r, c) = normal(rng);

  int rising = 0;
  double previous = factorization_objective(train, fr);
  for (std::size_t sweep = 0; sweep < config.iterations; ++sweep) {
    solve_rows(by_item, fr.user_embeddings, config.regularization,
               fr.item_embeddings);
    solve_rows(by_user, fr.item_embeddings, config.regularization,
               fr.user_embeddings);
    const double current = factorization_objective(train, fr);
    fr.objective.push_back(current);
    rising = current > previous ? rising + 1 : 0;
    if (rising >= 3) {
      throw numeric_error("ALS objective increased for 3 consecutive sweeps");
    }
    previous = current;
  }
  return fr;
}

std::vector<double> compute_merit(const FactorizationResult& fr,
                                  double floor) {
  const auto m = static_cast<std::size_t>(fr.item_embeddings.rows());
  std::vector<double> merit(m, floor);
  const auto n_users = fr.user_embeddings.rows();
  if (n_users == 0) return merit;
  const Eigen::MatrixXd relevance =
      fr.user_embeddings * fr.item_embeddings.transpose();
  for (std::size_t i = 0; i < m; ++i) {
    const double avg =
        relevance.col(static_cast<Eigen::Index>(i)).sum() /
        static_cast<double>(n_users);
    merit[i] = std::max(floor, avg);
  }
  return merit;
}

void write_interactions_csv(const std::filesystem::path& path,
                            const BinaryInteractions& data) {
  CsvWriter out(path);
  out.row({"user_id", "item_id", "label"});
  for (const Interaction& x : data) {
    out.row({std::to_string(x.user), std::to_string(x.item),
             std::to_string(x.label)});
  }
}

BinaryInteractions read_interactions_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t cu = table.column("user_id");
  const std::size_t ci = table.column("item_id");
  const std::size_t cl = table.column("label");
  BinaryInteractions out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    Interaction x;
    std::int64_t label = 0;
    if (!parse_int(row[cu], x.user) || !parse_int(row[ci], x.item) ||
        !parse_int(row[cl], label) || (label != 0 && label != 1)) {
      throw format_error(path.string() + ": malformed interaction row");
    }
    x.label = static_cast<int>(label);
    out.push_back(x);
  }
  return out;
}

void write_embeddings_csv(const std::filesystem::path& path,
                          const std::vector<std::int64_t>& ids,
                          const Eigen::MatrixXd& embeddings,
                          const char* id_column) {
  CsvWriter out(path);
  std::vector<std::string> header{id_column};
  for (Eigen::Index c = 0; c < embeddings.cols(); ++c) {
    header.push_back("f_" + std::to_string(c + 1));
  }
  out.row(header);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    std::vector<std::string> row{std::to_string(ids[r])};
    for (Eigen::Index c = 0; c < embeddings.cols(); ++c) {
      // Full precision so that reloaded embeddings reproduce runs exactly.
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g",
                    embeddings(static_cast<Eigen::Index>(r), c));
      row.emplace_back(buf);
    }
    out.row(row);
  }
}

std::pair<std::vector<std::int64_t>, Eigen::MatrixXd> read_embeddings_csv(
    const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.header.size() < 2) {
    throw format_error(path.string() + ": embeddings need at least one factor");
  }
  const auto d = static_cast<Eigen::Index>(table.header.size() - 1);
  std::vector<std::int64_t> ids;
  Eigen::MatrixXd emb(static_cast<Eigen::Index>(table.rows.size()), d);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::int64_t id = 0;
    if (!parse_int(table.rows[r][0], id)) {
      throw format_error(path.string() + ": malformed id");
    }
    ids.push_back(id);
    for (Eigen::Index c = 0; c < d; ++c) {
      double v = 0.0;
      if (!parse_double(table.rows[r][static_cast<std::size_t>(c) + 1], v)) {
        throw format_error(path.string() + ": malformed factor value");
      }
      emb(static_cast<Eigen::Index>(r), c) = v;
    }
  }
  return {std::move(ids), std::move(emb)};
}

void write_merit_csv(const std::filesystem::path& path,
                     const std::vector<std::int64_t>& ids,
                     const std::vector<double>& merit) {
  CsvWriter out(path);
  out.row({"item_id", "merit"});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", merit[i]);
    out.row({std::to_string(ids[i]), buf});
  }
}

std::pair<std::vector<std::int64_t>, std::vector<double>> read_merit_csv(
    const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t ci = table.column("item_id");
  const std::size_t cm = table.column("merit");
  std::vector<std::int64_t> ids;
  std::vector<double> merit;
  for (const auto& row : table.rows) {
    std::int64_t id = 0;
    double v = 0.0;
    if (!parse_int(row[ci], id) || !parse_double(row[cm], v)) {
      throw format_error(path.string() + ": malformed merit row");
    }
    ids.push_back(id);
    merit.push_back(v);
  }
  return {std::move(ids), std::move(merit)};
}

}  // namespace eabandit
