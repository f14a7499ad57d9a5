#pragma once

// Exposure accounting, Gini-based fairness, click / regret statistics and
// the closed-form regret-bound diagnostics.

#include "eabandit/catalog.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eabandit {

enum class ExposureNotion {
  kBinary,         // E^B
  kPosition,       // E^P
  kBinaryMerit,    // E^BM = E^B / merit
  kPositionMerit,  // E^PM = E^P / merit
};

ExposureNotion parse_exposure_notion(std::string_view name);
std::string to_string(ExposureNotion notion);

// 1 / log2(1 + k) for 1-based position k.
double position_discount(std::size_t position);

// Per-item exposure counts kept as integer tallies per list position, so
// that ledgers merge exactly and position-discounted sums do not depend on
// the order lists were recorded in.
class ExposureLedger {
 public:
  ExposureLedger() = default;
  ExposureLedger(std::size_t items, std::size_t max_list_size);

  std::size_t items() const { return items_; }
  std::size_t max_list_size() const { return max_k_; }
  std::uint64_t lists_recorded() const { return lists_; }

  void record_list(const RecommendationList& list);
  void record_list(std::span<const ItemIndex> items);

  // Associative and commutative.
  void merge(const ExposureLedger& other);

  std::uint64_t count(ItemIndex item, std::size_t position) const;
  double binary(ItemIndex item) const;
  double position(ItemIndex item) const;

  std::vector<double> binary() const;
  std::vector<double> position() const;

 private:
  std::size_t items_ = 0;
  std::size_t max_k_ = 0;
  std::uint64_t lists_ = 0;
  std::vector<std::uint64_t> counts_;  // items_ x max_k_, row-major
};

std::vector<double> exposure_distribution(const ExposureLedger& ledger,
                                          ExposureNotion notion,
                                          std::span<const double> merit);

// Population Gini index of a nonnegative distribution. Throws Error(kNumeric)
// for empty or all-zero input.
double gini(std::span<const double> values);

// 1 - gini(exposure_distribution(...)).
double fairness(const ExposureLedger& ledger, ExposureNotion notion,
                std::span<const double> merit);

struct FairnessValues {
  double equality_b = 0.0;
  double equality_p = 0.0;
  double equity_b = 0.0;
  double equity_p = 0.0;
};
FairnessValues all_fairness(const ExposureLedger& ledger,
                            std::span<const double> merit);

double avg_clicks(std::uint64_t total_clicks, std::size_t num_users,
                  std::size_t num_rounds);

enum class RegretMode {
  kExpected,  // both rewards are expectations under the true omega
  kRealized,  // dataset users: realized rewards, increment clamped at zero
};
double regret_step(double optimal, double achieved, RegretMode mode);

// Smallest exploration degree for which the regret bound holds.
double alpha_condition(double sigma, std::size_t dim, std::size_t rounds,
                       std::size_t list_size, double theta_norm);

// 2 alpha K sqrt(d n ln(1 + nK/(d sigma^2)) / ln(1 + 1/sigma^2)) + 1.
double regret_bound(double alpha, std::size_t list_size, std::size_t dim,
                    std::size_t rounds, double sigma);

// Symmetric percentage change 100 (a - b) / ((a + b) / 2); 0 when both are 0.
double delta_exposure(double e_new, double e_base);
std::vector<double> delta_exposure(std::span<const double> e_new,
                                   std::span<const double> e_base);

// Mean over items of each user's widths, then mean over users.
double record_exploration(const std::vector<std::vector<double>>& widths);
double mean(std::span<const double> values);

struct RoundRecord {
  std::size_t round = 0;
  std::uint64_t cum_clicks = 0;
  double cum_regret = 0.0;
  double mean_exploration = 0.0;
  FairnessValues fairness;
};

// Snapshots of cumulative statistics; cumulative fields never decrease.
class MetricsSeries {
 public:
  void push(const RoundRecord& record);
  const std::vector<RoundRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  const RoundRecord& back() const { return records_.back(); }

 private:
  std::vector<RoundRecord> records_;
};

}  // namespace eabandit
