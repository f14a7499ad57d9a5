#pragma once

#include "eabandit/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace eabandit {

// Dense index of an item inside a catalog (0 .. m-1).
using ItemIndex = std::uint32_t;

inline constexpr double kMeritFloor = 1e-6;

using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Item features x_i (one unit-norm row per item), merit scores, and the
// external ids items had in the source data.
class ItemCatalog {
 public:
  ItemCatalog() = default;

  // Rows of `features` are scaled to unit L2 norm; a zero row is rejected.
  // Merit values are floored at kMeritFloor. `external_ids` defaults to
  // 0..m-1 when empty.
  ItemCatalog(FeatureMatrix features, std::vector<double> merit,
              std::vector<std::int64_t> external_ids = {});

  std::size_t size() const { return static_cast<std::size_t>(features_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features_.cols()); }

  const FeatureMatrix& features() const { return features_; }
  Vec feature(ItemIndex i) const { return features_.row(i).transpose(); }

  std::span<const double> merit() const { return merit_; }
  double merit(ItemIndex i) const { return merit_[i]; }

  std::span<const std::int64_t> external_ids() const { return external_ids_; }
  std::int64_t external_id(ItemIndex i) const { return external_ids_[i]; }

 private:
  FeatureMatrix features_;
  std::vector<double> merit_;
  std::vector<std::int64_t> external_ids_;
};

// An ordered list L_t of K distinct items with the scores that ranked them.
struct RecommendationList {
  std::vector<ItemIndex> items;
  std::vector<double> scores;

  std::size_t size() const { return items.size(); }
};

// Click position C_t in 1..K, or K+1 when nothing was clicked.
struct Feedback {
  int click_position = 1;

  bool clicked(std::size_t list_size) const {
    return click_position >= 1 &&
           static_cast<std::size_t>(click_position) <= list_size;
  }
  // Number of positions the user examined: min{K, C_t}.
  std::size_t examined(std::size_t list_size) const {
    return std::min(list_size, static_cast<std::size_t>(click_position));
  }
};

}  // namespace eabandit
