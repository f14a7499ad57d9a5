#pragma once

// Reference computations for tests. These use plain std::vector arithmetic
// and never call into the library's numerical routines.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

Dense identity(std::size_t n, double scale = 1.0);
Dense outer_update(const Dense& m, const std::vector<double>& x, double c);
std::vector<double> mat_vec(const Dense& m, const std::vector<double>& v);

// Gauss-Jordan elimination with partial pivoting.
Dense inverse(const Dense& m);
std::vector<double> solve(const Dense& m, const std::vector<double>& b);

// Gini via mean absolute pairwise difference: sum_ij |xi - xj| / (2 m^2 mean).
double pairwise_gini(const std::vector<double>& x);

// P(C = k) for k = 1..K+1 under the cascade model with attractions w.
std::vector<double> cascade_distribution(const std::vector<double>& w);

// 1 - prod (1 - w).
double list_reward(const std::vector<double>& w);

// Best expected reward over every ordered K-list drawn from m items.
double best_list_reward_exhaustive(const std::vector<double>& w, std::size_t k);

// Indices of the k largest scores, ties by ascending index, via full sort.
std::vector<std::size_t> top_k_full_sort(const std::vector<double>& scores,
                                         std::size_t k);

// Line-by-line replay of the exposure-aware update on explicit M, B.
struct ReplayState {
  Dense m;
  std::vector<double> b;
};
void replay_update(ReplayState& s, const std::vector<std::vector<double>>& list_x,
                   int click_position, double sigma, double gamma,
                   const std::vector<double>& weights);

}  // namespace oracle
