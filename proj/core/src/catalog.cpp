#include "eabandit/catalog.hpp"

#include "eabandit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace eabandit {

ItemCatalog::ItemCatalog(FeatureMatrix features, std::vector<double> merit,
                         std::vector<std::int64_t> external_ids)
    : features_(std::move(features)),
      merit_(std::move(merit)),
      external_ids_(std::move(external_ids)) {
  const auto m = static_cast<std::size_t>(features_.rows());
  if (m == 0 || features_.cols() == 0) {
    throw config_error("item catalog must have at least one item and feature");
  }
  if (merit_.size() != m) {
    throw config_error("merit vector size does not match catalog size");
  }
  if (external_ids_.empty()) {
    external_ids_.resize(m);
    std::iota(external_ids_.begin(), external_ids_.end(), std::int64_t{0});
  } else if (external_ids_.size() != m) {
    throw config_error("external id count does not match catalog size");
  }
  for (Eigen::Index i = 0; i < features_.rows(); ++i) {
    if (!features_.row(i).allFinite()) {
      throw numeric_error("non-finite feature for item " +
                          std::to_string(external_ids_[i]));
    }
    const double norm = features_.row(i).norm();
    if (!(norm > 0.0)) {
      throw numeric_error("zero feature vector for item " +
                          std::to_string(external_ids_[i]));
    }
    features_.row(i) /= norm;
  }
  for (double& v : merit_) {
    if (!std::isfinite(v)) throw numeric_error("non-finite merit value");
    v = std::max(v, kMeritFloor);
  }
}

}  // namespace eabandit
