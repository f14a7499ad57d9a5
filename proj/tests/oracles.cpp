#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {

Dense identity(std::size_t n, double scale) {
  Dense m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = scale;
  return m;
}

Dense outer_update(const Dense& m, const std::vector<double>& x, double c) {
  Dense out = m;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) out[i][j] += c * x[i] * x[j];
  return out;
}

std::vector<double> mat_vec(const Dense& m, const std::vector<double>& v) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

Dense inverse(const Dense& m) {
  const std::size_t n = m.size();
  Dense a = m;
  Dense inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const double p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

std::vector<double> solve(const Dense& m, const std::vector<double>& b) {
  return mat_vec(inverse(m), b);
}

double pairwise_gini(const std::vector<double>& x) {
  const auto m = static_cast<double>(x.size());
  long double diff = 0.0L;
  long double total = 0.0L;
  for (double a : x) {
    total += a;
    for (double b : x) diff += std::abs(static_cast<long double>(a) - b);
  }
  const long double mean = total / m;
  return static_cast<double>(diff / (2.0L * m * m * mean));
}

std::vector<double> cascade_distribution(const std::vector<double>& w) {
  std::vector<double> p;
  double reach = 1.0;
  for (double wi : w) {
    p.push_back(reach * wi);
    reach *= 1.0 - wi;
  }
  p.push_back(reach);
  return p;
}

double list_reward(const std::vector<double>& w) {
  double miss = 1.0;
  for (double wi : w) miss *= 1.0 - wi;
  return 1.0 - miss;
}

namespace {

void enumerate(const std::vector<double>& w, std::size_t k,
               std::vector<bool>& used, std::vector<double>& chosen,
               double& best) {
  if (chosen.size() == k) {
    best = std::max(best, list_reward(chosen));
    return;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    chosen.push_back(w[i]);
    enumerate(w, k, used, chosen, best);
    chosen.pop_back();
    used[i] = false;
  }
}

}  // namespace

double best_list_reward_exhaustive(const std::vector<double>& w, std::size_t k) {
  std::vector<bool> used(w.size(), false);
  std::vector<double> chosen;
  double best = -1.0;
  enumerate(w, k, used, chosen, best);
  return best;
}

std::vector<std::size_t> top_k_full_sort(const std::vector<double>& scores,
                                         std::size_t k) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  idx.resize(k);
  return idx;
}

void replay_update(ReplayState& s, const std::vector<std::vector<double>>& list_x,
                   int click_position, double sigma, double gamma,
                   const std::vector<double>& weights) {
  const int last = std::min<int>(static_cast<int>(list_x.size()), click_position);
  for (int k = 1; k <= last; ++k) {
    const auto& x = list_x[static_cast<std::size_t>(k - 1)];
    s.m = outer_update(s.m, x, 1.0 / (sigma * sigma));
    const double f = weights[static_cast<std::size_t>(k - 1)];
    const double scale = (click_position == k) ? f : -gamma * f;
    for (std::size_t j = 0; j < x.size(); ++j) s.b[j] += scale * x[j];
  }
}

}  // namespace oracle
