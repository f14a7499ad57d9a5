#pragma once

// Ratings ingestion, binarization, activity filtering, per-user train/test
// split and explicit-feedback ALS matrix factorization.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace eabandit {

struct Rating {
  std::int64_t user = 0;
  std::int64_t item = 0;
  double rating = 0.0;
  std::optional<std::int64_t> timestamp;
};

struct RatingsTable {
  std::vector<Rating> rows;
  std::size_t total_lines = 0;
  std::size_t malformed_lines = 0;
  std::size_t duplicates_dropped = 0;
};

// Reads `user::item::rating[::timestamp]` lines, or tab / comma separated
// variants; the delimiter is detected from the first non-empty line and a
// non-numeric first line is treated as a header. Ratings outside [1, 5] are
// counted as malformed. Duplicate (user, item) pairs keep the latest rating
// (by timestamp, then by file order).
//
// Throws Error(kIo) if the file cannot be read and Error(kFormat) if more
// than 1% of the lines are malformed.
RatingsTable parse_ratings(const std::filesystem::path& path);
RatingsTable parse_ratings(std::istream& in);

struct Interaction {
  std::int64_t user = 0;
  std::int64_t item = 0;
  int label = 0;
};

using BinaryInteractions = std::vector<Interaction>;

// label = 1 iff rating >= 4.
BinaryInteractions binarize(const RatingsTable& ratings);

// Keeps interactions of the `top_users` users with the most interactions
// (and, when given, of the `top_items` most interacted items). Ties go to
// the smaller id. Item selection is computed on the input, before the user
// filter is applied.
BinaryInteractions filter_active(const BinaryInteractions& data,
                                 std::size_t top_users,
                                 std::optional<std::size_t> top_items = {});

// Shuffles each user's interactions with a seeded stream and sends the first
// ceil(n/2) to train, the rest to test. Output is sorted by (user, item).
std::pair<BinaryInteractions, BinaryInteractions> split_train_test(
    const BinaryInteractions& data, std::uint64_t seed);

struct FactorizationConfig {
  std::size_t dim = 10;
  double regularization = 0.1;
  std::size_t iterations = 20;
  std::uint64_t seed = 0;
};

struct FactorizationResult {
  std::vector<std::int64_t> user_ids;  // ascending
  std::vector<std::int64_t> item_ids;  // ascending
  Eigen::MatrixXd user_embeddings;     // |U| x d
  Eigen::MatrixXd item_embeddings;     // m x d
  FactorizationConfig config;
  std::vector<double> objective;       // after each sweep
};

// Alternating least squares minimizing
//   sum_observed (label - u v^T)^2 + reg (sum ||u||^2 + sum ||v||^2).
// Throws Error(kConfig) for d == 0 or empty input and Error(kNumeric) when
// the objective rises for three consecutive sweeps.
FactorizationResult factorize(const BinaryInteractions& train,
                              const FactorizationConfig& config);

double factorization_objective(const BinaryInteractions& train,
                               const FactorizationResult& fr);

// merit(i) = max(floor, mean_u u v_i^T).
std::vector<double> compute_merit(const FactorizationResult& fr,
                                  double floor = 1e-6);

// CSV persistence.
void write_interactions_csv(const std::filesystem::path& path,
                            const BinaryInteractions& data);
BinaryInteractions read_interactions_csv(const std::filesystem::path& path);

// `item_id,f_1..f_d` (or `user_id,...` for users).
void write_embeddings_csv(const std::filesystem::path& path,
                          const std::vector<std::int64_t>& ids,
                          const Eigen::MatrixXd& embeddings,
                          const char* id_column = "item_id");
std::pair<std::vector<std::int64_t>, Eigen::MatrixXd> read_embeddings_csv(
    const std::filesystem::path& path);

void write_merit_csv(const std::filesystem::path& path,
                     const std::vector<std::int64_t>& ids,
                     const std::vector<double>& merit);
std::pair<std::vector<std::int64_t>, std::vector<double>> read_merit_csv(
    const std::filesystem::path& path);

}  // namespace eabandit
