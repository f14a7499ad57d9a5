#include "eabandit/bandit.hpp"

#include "eabandit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace eabandit {

void WeightFunction::validate(std::size_t k_max) const {
  for (std::size_t k = 1; k <= k_max; ++k) weight(*this, k);
}

WeightFunction parse_weight_function(std::string_view name,
                                     std::optional<double> beta) {
  if (name == "constant" || name == "none") return WeightFunction::constant();
  if (name == "log") return WeightFunction::log();
  if (name == "rbp") return WeightFunction::rbp(beta.value_or(0.9));
  if (name == "linear") return WeightFunction::linear(beta.value_or(0.05));
  throw config_error("unknown weight function '" + std::string(name) +
                     "' (expected constant, log, rbp or linear)");
}

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::kConstant: return "constant";
    case WeightKind::kLog: return "log";
    case WeightKind::kRbp: return "rbp";
    case WeightKind::kLinear: return "linear";
  }
  return "unknown";
}

double weight(const WeightFunction& fn, std::size_t position) {
  if (position < 1) throw config_error("weight positions are 1-based");
  const auto k = static_cast<double>(position);
  double w = 0.0;
  switch (fn.kind) {
    case WeightKind::kConstant:
      w = 1.0;
      break;
    case WeightKind::kLog:
      w = std::log1p(k);
      if (fn.log_base > 0.0) w /= std::log(fn.log_base);
      break;
    case WeightKind::kRbp:
      w = std::pow(fn.beta, k - 1.0);
      break;
    case WeightKind::kLinear:
      w = fn.beta * k;
      break;
  }
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw config_error("weight function " + to_string(fn.kind) +
                       " is not positive at position " +
                       std::to_string(position));
  }
  return w;
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "linucb") return Algorithm::kLinUcb;
  if (name == "ealinucb") return Algorithm::kEaLinUcb;
  if (name == "ears" || name == "earslinucb") return Algorithm::kEars;
  throw config_error("unknown algorithm '" + std::string(name) +
                     "' (expected linucb, ealinucb or ears)");
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kLinUcb: return "linucb";
    case Algorithm::kEaLinUcb: return "ealinucb";
    case Algorithm::kEars: return "ears";
  }
  return "unknown";
}

void PolicyConfig::validate() const {
  if (list_size < 1) throw config_error("k must be >= 1");
  if (!(alpha >= 0.0)) throw config_error("alpha must be >= 0");
  if (!(gamma >= 0.0)) throw config_error("gamma must be >= 0");
  if (!(sigma > 0.0)) throw config_error("sigma must be > 0");
  if (!(lambda > 0.0)) throw config_error("lambda must be > 0");
  weight_fn.validate(list_size);
}

BanditState::BanditState(std::size_t dim, double lambda,
                         std::size_t refresh_interval)
    : gram_(dim, lambda, refresh_interval),
      b_(Vec::Zero(static_cast<Eigen::Index>(dim))) {}

void BanditState::observe(const Vec& x, double sigma) {
  gram_.add(x, 1.0 / (sigma * sigma));
}

void BanditState::add_to_b(const Vec& x, double scale) { b_ += scale * x; }

Vec estimate_theta(const BanditState& state, double sigma) {
  return mat_vec(state.m_inv(), state.b()) / (sigma * sigma);
}

double ucb_score(const BanditState& state, const Vec& x, double alpha,
                 double sigma) {
  const Vec theta = estimate_theta(state, sigma);
  return theta.dot(x) + alpha * std::sqrt(quad_form(state.m_inv(), x));
}

CatalogScores score_catalog(const BanditState& state,
                            const ItemCatalog& catalog, double sigma) {
  const FeatureMatrix& x = catalog.features();
  const Vec theta = estimate_theta(state, sigma);
  CatalogScores out;
  out.estimate = x * theta;
  const FeatureMatrix xm = x * state.m_inv().dense();
  out.width = (xm.array() * x.array()).rowwise().sum().max(0.0).sqrt();
  return out;
}

RecommendationList top_k(const Eigen::VectorXd& scores, std::size_t k) {
  const auto m = static_cast<std::size_t>(scores.size());
  if (k > m) {
    throw config_error("catalog has " + std::to_string(m) +
                       " items, fewer than list size " + std::to_string(k));
  }
  std::vector<ItemIndex> order(m);
  std::iota(order.begin(), order.end(), ItemIndex{0});
  const auto better = [&](ItemIndex a, ItemIndex b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(k),
                    order.end(), better);
  RecommendationList list;
  list.items.assign(order.begin(), order.begin() + static_cast<long>(k));
  list.scores.reserve(k);
  for (ItemIndex i : list.items) list.scores.push_back(scores[i]);
  return list;
}

RecommendationList recommend(const BanditState& state,
                             const ItemCatalog& catalog,
                             const PolicyConfig& config) {
  const CatalogScores s = score_catalog(state, catalog, config.sigma);
  const Eigen::VectorXd ucb = s.estimate + config.alpha * s.width;
  return top_k(ucb, config.list_size);
}

namespace {

void check_feedback(const RecommendationList& list, Feedback feedback) {
  if (feedback.click_position < 1 ||
      static_cast<std::size_t>(feedback.click_position) > list.size() + 1) {
    throw std::invalid_argument("click position out of range 1..K+1");
  }
}

}  // namespace

void update_cascade(BanditState& state, const RecommendationList& list,
                    Feedback feedback, const PolicyConfig& config,
                    const ItemCatalog& catalog) {
  check_feedback(list, feedback);
  const std::size_t examined = feedback.examined(list.size());
  for (std::size_t k = 0; k < examined; ++k) {
    const Vec x = catalog.feature(list.items[k]);
    state.observe(x, config.sigma);
    if (static_cast<int>(k + 1) == feedback.click_position) {
      state.add_to_b(x, 1.0);
    }
  }
}

void update_exposure_aware(BanditState& state, const RecommendationList& list,
                           Feedback feedback, const PolicyConfig& config,
                           const ItemCatalog& catalog) {
  check_feedback(list, feedback);
  const std::size_t examined = feedback.examined(list.size());
  for (std::size_t k = 0; k < examined; ++k) {
    const std::size_t position = k + 1;
    const Vec x = catalog.feature(list.items[k]);
    const double f = weight(config.weight_fn, position);
    state.observe(x, config.sigma);
    if (static_cast<int>(position) == feedback.click_position) {
      state.add_to_b(x, f);
    } else {
      state.add_to_b(x, -config.gamma * f);
    }
  }
}

void update(BanditState& state, const RecommendationList& list,
            Feedback feedback, const PolicyConfig& config,
            const ItemCatalog& catalog) {
  switch (config.algorithm) {
    case Algorithm::kLinUcb:
    case Algorithm::kEars:
      update_cascade(state, list, feedback, config, catalog);
      return;
    case Algorithm::kEaLinUcb:
      update_exposure_aware(state, list, feedback, config, catalog);
      return;
  }
}

double gamma_admissible_bound(const WeightFunction& fn, std::size_t k_max) {
  if (k_max < 1) throw config_error("k_max must be >= 1");
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= k_max; ++k) {
    bound = std::min(bound, 1.0 / weight(fn, k) - 1.0);
  }
  return bound;
}

RecommendationList ears_rerank(const RecommendationList& list,
                               const Vec& theta_hat,
                               const ItemCatalog& catalog,
                               std::optional<double> relevance_cutoff,
                               Rng& rng) {
  const std::size_t k = list.size();
  if (k == 0) return list;
  std::vector<double> relevance(k);
  for (std::size_t i = 0; i < k; ++i) {
    relevance[i] = catalog.features().row(list.items[i]).dot(theta_hat);
  }
  double cutoff = 0.0;
  if (relevance_cutoff) {
    cutoff = *relevance_cutoff;
  } else {
    std::vector<double> sorted = relevance;
    std::sort(sorted.begin(), sorted.end());
    cutoff = (k % 2 == 1) ? sorted[k / 2]
                          : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  }

  std::vector<std::size_t> head;
  std::vector<std::size_t> tail;
  for (std::size_t i = 0; i < k; ++i) {
    (relevance[i] >= cutoff ? head : tail).push_back(i);
  }
  std::shuffle(tail.begin(), tail.end(), rng);

  RecommendationList out;
  out.items.reserve(k);
  out.scores.reserve(k);
  for (const auto* part : {&head, &tail}) {
    for (std::size_t i : *part) {
      out.items.push_back(list.items[i]);
      out.scores.push_back(list.scores[i]);
    }
  }
  return out;
}

}  // namespace eabandit
