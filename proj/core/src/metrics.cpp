#include "eabandit/metrics.hpp"

#include "eabandit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eabandit {

ExposureNotion parse_exposure_notion(std::string_view name) {
  if (name == "B" || name == "b") return ExposureNotion::kBinary;
  if (name == "P" || name == "p") return ExposureNotion::kPosition;
  if (name == "BM" || name == "bm") return ExposureNotion::kBinaryMerit;
  if (name == "PM" || name == "pm") return ExposureNotion::kPositionMerit;
  throw config_error("unknown exposure notion '" + std::string(name) +
                     "' (expected B, P, BM or PM)");
}

std::string to_string(ExposureNotion notion) {
  switch (notion) {
    case ExposureNotion::kBinary: return "B";
    case ExposureNotion::kPosition: return "P";
    case ExposureNotion::kBinaryMerit: return "BM";
    case ExposureNotion::kPositionMerit: return "PM";
  }
  return "?";
}

double position_discount(std::size_t position) {
  return 1.0 / std::log2(1.0 + static_cast<double>(position));
}

ExposureLedger::ExposureLedger(std::size_t items, std::size_t max_list_size)
    : items_(items), max_k_(max_list_size), counts_(items * max_list_size, 0) {}

void ExposureLedger::record_list(const RecommendationList& list) {
  record_list(std::span<const ItemIndex>(list.items));
}

void ExposureLedger::record_list(std::span<const ItemIndex> items) {
  if (items.size() > max_k_) {
    throw std::invalid_argument("list longer than the ledger's list size");
  }
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (items[k] >= items_) throw std::invalid_argument("item outside ledger");
    ++counts_[static_cast<std::size_t>(items[k]) * max_k_ + k];
  }
  ++lists_;
}

void ExposureLedger::merge(const ExposureLedger& other) {
  if (other.items_ != items_ || other.max_k_ != max_k_) {
    throw std::invalid_argument("cannot merge ledgers of different shape");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  lists_ += other.lists_;
}

std::uint64_t ExposureLedger::count(ItemIndex item,
                                    std::size_t position) const {
  return counts_[static_cast<std::size_t>(item) * max_k_ + (position - 1)];
}

double ExposureLedger::binary(ItemIndex item) const {
  std::uint64_t total = 0;
  for (std::size_t k = 1; k <= max_k_; ++k) total += count(item, k);
  return static_cast<double>(total);
}

double ExposureLedger::position(ItemIndex item) const {
  double total = 0.0;
  for (std::size_t k = 1; k <= max_k_; ++k) {
    total += static_cast<double>(count(item, k)) * position_discount(k);
  }
  return total;
}

std::vector<double> ExposureLedger::binary() const {
  std::vector<double> out(items_);
  for (std::size_t i = 0; i < items_; ++i) out[i] = binary(static_cast<ItemIndex>(i));
  return out;
}

std::vector<double> ExposureLedger::position() const {
  std::vector<double> out(items_);
  for (std::size_t i = 0; i < items_; ++i) out[i] = position(static_cast<ItemIndex>(i));
  return out;
}

std::vector<double> exposure_distribution(const ExposureLedger& ledger,
                                          ExposureNotion notion,
                                          std::span<const double> merit) {
  const bool positional = notion == ExposureNotion::kPosition ||
                          notion == ExposureNotion::kPositionMerit;
  std::vector<double> e = positional ? ledger.position() : ledger.binary();
  if (notion == ExposureNotion::kBinaryMerit ||
      notion == ExposureNotion::kPositionMerit) {
    if (merit.size() != e.size()) {
      throw std::invalid_argument("merit vector does not match ledger");
    }
    for (std::size_t i = 0; i < e.size(); ++i) e[i] /= merit[i];
  }
  return e;
}

double gini(std::span<const double> values) {
  if (values.empty()) throw numeric_error("Gini of an empty distribution");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  if (x.front() < 0.0) throw numeric_error("Gini of negative values");
  const auto m = static_cast<long double>(x.size());
  long double weighted = 0.0L;
  long double total = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double coeff = 2.0L * static_cast<long double>(i + 1) - m - 1.0L;
    weighted += coeff * x[i];
    total += x[i];
  }
  if (!(total > 0.0L)) {
    throw numeric_error("Gini of an all-zero distribution is undefined");
  }
  return static_cast<double>(weighted / (m * total));
}

double fairness(const ExposureLedger& ledger, ExposureNotion notion,
                std::span<const double> merit) {
  return 1.0 - gini(exposure_distribution(ledger, notion, merit));
}

FairnessValues all_fairness(const ExposureLedger& ledger,
                            std::span<const double> merit) {
  FairnessValues f;
  f.equality_b = fairness(ledger, ExposureNotion::kBinary, merit);
  f.equality_p = fairness(ledger, ExposureNotion::kPosition, merit);
  f.equity_b = fairness(ledger, ExposureNotion::kBinaryMerit, merit);
  f.equity_p = fairness(ledger, ExposureNotion::kPositionMerit, merit);
  return f;
}

double avg_clicks(std::uint64_t total_clicks, std::size_t num_users,
                  std::size_t num_rounds) {
  if (num_users == 0 || num_rounds == 0) {
    throw config_error("avg_clicks needs at least one user and one round");
  }
  return static_cast<double>(total_clicks) /
         (static_cast<double>(num_users) * static_cast<double>(num_rounds));
}

double regret_step(double optimal, double achieved, RegretMode mode) {
  const double diff = optimal - achieved;
  // Expected-mode gaps are nonnegative up to round-off; realized gaps can go
  // negative only when the optimum is mis-specified, and are clamped.
  (void)mode;
  return std::max(0.0, diff);
}

double alpha_condition(double sigma, std::size_t dim, std::size_t rounds,
                       std::size_t list_size, double theta_norm) {
  const auto d = static_cast<double>(dim);
  const auto n = static_cast<double>(rounds);
  const auto k = static_cast<double>(list_size);
  const double inner =
      d * std::log1p(n * k / (d * sigma * sigma)) + 2.0 * std::log(n);
  return std::sqrt(inner) / sigma + theta_norm;
}

double regret_bound(double alpha, std::size_t list_size, std::size_t dim,
                    std::size_t rounds, double sigma) {
  const auto d = static_cast<double>(dim);
  const auto n = static_cast<double>(rounds);
  const auto k = static_cast<double>(list_size);
  const double s2 = sigma * sigma;
  const double ratio =
      d * n * std::log1p(n * k / (d * s2)) / std::log1p(1.0 / s2);
  return 2.0 * alpha * k * std::sqrt(ratio) + 1.0;
}

double delta_exposure(double e_new, double e_base) {
  const double avg = 0.5 * (e_new + e_base);
  if (avg == 0.0) return 0.0;
  return 100.0 * (e_new - e_base) / avg;
}

std::vector<double> delta_exposure(std::span<const double> e_new,
                                   std::span<const double> e_base) {
  if (e_new.size() != e_base.size()) {
    throw std::invalid_argument("exposure vectors differ in length");
  }
  std::vector<double> out(e_new.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = delta_exposure(e_new[i], e_base[i]);
  }
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

double record_exploration(const std::vector<std::vector<double>>& widths) {
  std::vector<double> per_user;
  per_user.reserve(widths.size());
  for (const auto& w : widths) per_user.push_back(mean(w));
  return mean(per_user);
}

void MetricsSeries::push(const RoundRecord& record) {
  if (!records_.empty()) {
    const RoundRecord& prev = records_.back();
    if (record.round <= prev.round || record.cum_clicks < prev.cum_clicks ||
        record.cum_regret < prev.cum_regret) {
      throw std::invalid_argument("metrics series must be cumulative");
    }
  }
  records_.push_back(record);
}

}  // namespace eabandit
