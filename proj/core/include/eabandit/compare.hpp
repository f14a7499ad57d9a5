#pragma once

// Per-item exposure comparison of two runs over the same catalog.

#include "eabandit/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace eabandit {

struct ExposureRow {
  std::int64_t item = 0;
  double e_b = 0.0;
  double e_p = 0.0;
  double e_bm = 0.0;
  double e_pm = 0.0;
  double clicks = 0.0;

  double exposure(ExposureNotion notion) const;
};

// Reads exposure.csv as written by a run.
std::vector<ExposureRow> read_exposure_csv(const std::filesystem::path& path);

struct ComparisonRow {
  std::int64_t item = 0;
  double exposure_b = 0.0;  // baseline run
  double exposure_a = 0.0;  // run under study
  double delta_exposure = 0.0;
  double delta_clicks = 0.0;
};

// Rows sorted by the baseline's exposure, descending (ties by item id).
// Throws Error(kComparison) when the two runs list different items.
std::vector<ComparisonRow> compare_exposure(std::span<const ExposureRow> run_a,
                                            std::span<const ExposureRow> run_b,
                                            ExposureNotion notion);

std::vector<ComparisonRow> compare_runs(const std::filesystem::path& run_a,
                                        const std::filesystem::path& run_b,
                                        ExposureNotion notion);

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows);

}  // namespace eabandit
