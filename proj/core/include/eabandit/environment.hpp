#pragma once

// Simulated users that follow the cascade click model.

#include "eabandit/catalog.hpp"
#include "eabandit/linalg.hpp"
#include "eabandit/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace eabandit {

enum class GroundTruthMode {
  kDatasetBinary,    // omega(i) in {0,1} from held-out positives
  kSyntheticLinear,  // omega(i) = clamp(theta* x_i^T, 0, 1)
};

class UserGroundTruth {
 public:
  static UserGroundTruth dataset(std::span<const ItemIndex> positives,
                                 std::size_t catalog_size);
  static UserGroundTruth synthetic(const Vec& theta_star,
                                   const ItemCatalog& catalog);

  GroundTruthMode mode() const { return mode_; }
  double attraction(ItemIndex i) const { return attraction_[i]; }
  std::span<const double> attractions() const { return attraction_; }
  const Vec& theta_star() const { return theta_star_; }
  std::size_t positive_count() const { return positives_; }

 private:
  GroundTruthMode mode_ = GroundTruthMode::kDatasetBinary;
  std::vector<double> attraction_;
  Vec theta_star_;
  std::size_t positives_ = 0;
};

// Uniform direction on the unit sphere scaled by `norm`.
Vec sample_theta_star(std::size_t dim, Rng& rng, double norm = 0.9);

// Random catalog of `items` unit-norm Gaussian directions.
FeatureMatrix sample_features(std::size_t items, std::size_t dim, Rng& rng);

// Cascade scan of the list. Dataset users click the first positive item
// without consuming randomness; synthetic users draw one Bernoulli per
// examined position and stop at the first success.
Feedback simulate_click(const UserGroundTruth& user,
                        const RecommendationList& list, Rng& rng);

// 1 - prod_k (1 - omega(L(k))).
double expected_reward(const UserGroundTruth& user,
                       std::span<const ItemIndex> items);

// The K items with the largest attraction (ties by ascending index).
std::vector<ItemIndex> optimal_list(const UserGroundTruth& user, std::size_t k);

// Expected reward of the optimal list.
double optimal_reward(const UserGroundTruth& user, std::size_t k);

// 1 if C_t <= K, else 0.
int realized_reward(Feedback feedback, std::size_t k);

}  // namespace eabandit
