#pragma once

// Linear cascading bandits: LinUCB, the exposure-aware variant EALinUCB and
// the EARS re-ranking baseline.

#include "eabandit/catalog.hpp"
#include "eabandit/linalg.hpp"
#include "eabandit/random.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace eabandit {

enum class WeightKind { kConstant, kLog, kRbp, kLinear };

// Position weight F(k) applied to rewards and penalties.
//   Constant: 1            Log:    ln(1 + k) (log base configurable)
//   RBP:      beta^(k-1)   Linear: beta * k
struct WeightFunction {
  WeightKind kind = WeightKind::kConstant;
  double beta = 1.0;
  double log_base = 0.0;  // <= 0 means natural log

  static WeightFunction constant() { return {WeightKind::kConstant, 1.0}; }
  static WeightFunction log() { return {WeightKind::kLog, 1.0}; }
  static WeightFunction rbp(double beta = 0.9) { return {WeightKind::kRbp, beta}; }
  static WeightFunction linear(double beta = 0.05) {
    return {WeightKind::kLinear, beta};
  }

  // Throws Error(kConfig) if F(k) is not positive for some k in [1, k_max].
  void validate(std::size_t k_max) const;
};

// "constant" | "log" | "rbp" | "linear"; beta defaults to 0.9 for RBP and
// 0.05 for Linear.
WeightFunction parse_weight_function(std::string_view name,
                                     std::optional<double> beta = std::nullopt);
std::string to_string(WeightKind kind);

// F(k) for 1-based position k. Throws Error(kConfig) on a nonpositive result.
double weight(const WeightFunction& fn, std::size_t position);

enum class Algorithm { kLinUcb, kEaLinUcb, kEars };

Algorithm parse_algorithm(std::string_view name);
std::string to_string(Algorithm algorithm);

struct PolicyConfig {
  Algorithm algorithm = Algorithm::kEaLinUcb;
  double alpha = 0.25;   // exploration degree
  double sigma = 1.0;    // M grows by sigma^-2 x^T x per examined item
  double lambda = 1.0;   // ridge regularizer, M_0 = lambda I
  double gamma = 0.0;    // penalty for examined-unclicked items
  WeightFunction weight_fn = WeightFunction::constant();
  std::size_t list_size = 5;

  void validate() const;
};

// Per-user model statistics M, M^{-1} and B.
class BanditState {
 public:
  BanditState() = default;
  BanditState(std::size_t dim, double lambda,
              std::size_t refresh_interval =
                  IncrementalInverse::kDefaultRefreshInterval);

  std::size_t dim() const { return gram_.dim(); }
  const SymMatrix& m() const { return gram_.matrix(); }
  const SymMatrix& m_inv() const { return gram_.inverse(); }
  const Vec& b() const { return b_; }
  std::size_t update_count() const { return gram_.update_count(); }

  void observe(const Vec& x, double sigma);   // M += sigma^-2 x^T x
  void add_to_b(const Vec& x, double scale);  // B += scale * x

 private:
  IncrementalInverse gram_;
  Vec b_;
};

// theta_hat = sigma^-2 M^{-1} B.
Vec estimate_theta(const BanditState& state, double sigma);

// theta_hat x^T + alpha sqrt(x M^{-1} x^T), unclipped.
double ucb_score(const BanditState& state, const Vec& x, double alpha,
                 double sigma);

// Scores and confidence widths for every catalog item in one pass.
struct CatalogScores {
  Eigen::VectorXd estimate;  // theta_hat x_i^T
  Eigen::VectorXd width;     // sqrt(x_i M^{-1} x_i^T)

  double ucb(ItemIndex i, double alpha) const {
    return estimate[i] + alpha * width[i];
  }
};
CatalogScores score_catalog(const BanditState& state,
                            const ItemCatalog& catalog, double sigma);

// Top-K selection by score, ties by ascending index. Throws Error(kConfig)
// when fewer than k scores are supplied.
RecommendationList top_k(const Eigen::VectorXd& scores, std::size_t k);

RecommendationList recommend(const BanditState& state,
                             const ItemCatalog& catalog,
                             const PolicyConfig& config);

// Original cascading update: examined items grow M, the clicked item adds
// x to B. Ignores weight_fn and gamma.
void update_cascade(BanditState& state, const RecommendationList& list,
                    Feedback feedback, const PolicyConfig& config,
                    const ItemCatalog& catalog);

// Exposure-aware update: for k = 1..min{K, C_t}, M += sigma^-2 x^T x and
// B += F(k) x when clicked at k, B -= gamma F(k) x otherwise.
void update_exposure_aware(BanditState& state, const RecommendationList& list,
                           Feedback feedback, const PolicyConfig& config,
                           const ItemCatalog& catalog);

// Dispatches on config.algorithm (EARS learns with the cascade update).
void update(BanditState& state, const RecommendationList& list,
            Feedback feedback, const PolicyConfig& config,
            const ItemCatalog& catalog);

// min over k in [1, k_max] of 1/F(k) - 1. Negative means no gamma >= 0 meets
// the admissibility condition of the regret bound.
double gamma_admissible_bound(const WeightFunction& fn, std::size_t k_max);

// Items whose estimated relevance theta_hat x^T reaches `relevance_cutoff`
// keep their order at the head; the rest are shuffled uniformly at the tail.
// Without a cutoff the median estimated relevance of the list is used.
RecommendationList ears_rerank(const RecommendationList& list,
                               const Vec& theta_hat,
                               const ItemCatalog& catalog,
                               std::optional<double> relevance_cutoff,
                               Rng& rng);

}  // namespace eabandit
