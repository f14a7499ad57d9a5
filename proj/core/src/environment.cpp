#include "eabandit/environment.hpp"

#include "eabandit/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace eabandit {

UserGroundTruth UserGroundTruth::dataset(std::span<const ItemIndex> positives,
                                         std::size_t catalog_size) {
  UserGroundTruth user;
  user.mode_ = GroundTruthMode::kDatasetBinary;
  user.attraction_.assign(catalog_size, 0.0);
  for (ItemIndex i : positives) {
    if (i >= catalog_size) {
      throw std::invalid_argument("positive item outside the catalog");
    }
    if (user.attraction_[i] == 0.0) ++user.positives_;
    user.attraction_[i] = 1.0;
  }
  return user;
}

UserGroundTruth UserGroundTruth::synthetic(const Vec& theta_star,
                                           const ItemCatalog& catalog) {
  if (static_cast<std::size_t>(theta_star.size()) != catalog.dim()) {
    throw std::invalid_argument("theta* dimension does not match catalog");
  }
  UserGroundTruth user;
  user.mode_ = GroundTruthMode::kSyntheticLinear;
  user.theta_star_ = theta_star;
  const Eigen::VectorXd raw = catalog.features() * theta_star;
  user.attraction_.resize(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const double w = std::clamp(raw[static_cast<Eigen::Index>(i)], 0.0, 1.0);
    user.attraction_[i] = w;
    if (w > 0.0) ++user.positives_;
  }
  return user;
}

Vec sample_theta_star(std::size_t dim, Rng& rng, double norm) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(static_cast<Eigen::Index>(dim));
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  } while (v.norm() == 0.0);
  return v * (norm / v.norm());
}

FeatureMatrix sample_features(std::size_t items, std::size_t dim, Rng& rng) {
  FeatureMatrix x(static_cast<Eigen::Index>(items),
                  static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vec row = sample_theta_star(dim, rng, 1.0);
    x.row(i) = row.transpose();
  }
  return x;
}

Feedback simulate_click(const UserGroundTruth& user,
                        const RecommendationList& list, Rng& rng) {
  const std::size_t k = list.size();
  for (std::size_t pos = 0; pos < k; ++pos) {
    const double w = user.attraction(list.items[pos]);
    bool attracted = false;
    if (user.mode() == GroundTruthMode::kDatasetBinary) {
      attracted = w > 0.0;
    } else {
      attracted = uniform01(rng) < w;
    }
    if (attracted) return Feedback{static_cast<int>(pos + 1)};
  }
  return Feedback{static_cast<int>(k + 1)};
}

double expected_reward(const UserGroundTruth& user,
                       std::span<const ItemIndex> items) {
  double miss = 1.0;
  for (ItemIndex i : items) miss *= 1.0 - user.attraction(i);
  return 1.0 - miss;
}

std::vector<ItemIndex> optimal_list(const UserGroundTruth& user,
                                    std::size_t k) {
  const auto w = user.attractions();
  if (k > w.size()) throw config_error("list size exceeds catalog size");
  std::vector<ItemIndex> order(w.size());
  std::iota(order.begin(), order.end(), ItemIndex{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(k),
                    order.end(), [&](ItemIndex a, ItemIndex b) {
                      if (w[a] != w[b]) return w[a] > w[b];
                      return a < b;
                    });
  order.resize(k);
  return order;
}

double optimal_reward(const UserGroundTruth& user, std::size_t k) {
  return expected_reward(user, optimal_list(user, k));
}

int realized_reward(Feedback feedback, std::size_t k) {
  return feedback.clicked(k) ? 1 : 0;
}

}  // namespace eabandit
