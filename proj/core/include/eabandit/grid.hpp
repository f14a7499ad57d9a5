#pragma once

#include "eabandit/experiment.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eabandit {

struct SweepAxis {
  std::string field;
  std::vector<std::string> values;
};

// Cartesian sweep; the last axis varies fastest.
using SweepSpec = std::vector<SweepAxis>;

// "alpha=0.25,0.75,1". Throws Error(kConfig) on malformed input.
SweepAxis parse_sweep_axis(std::string_view text);

std::size_t grid_size(const SweepSpec& sweep);

// Field assignments of grid point `index`.
std::vector<std::pair<std::string, std::string>> grid_point(
    const SweepSpec& sweep, std::size_t index);

// Seed of grid point `index`, derived from the base seed.
std::uint64_t grid_seed(std::uint64_t master_seed, std::size_t index);

// Standalone configuration of grid point `index`. When base.out is set the
// point writes its run files to <out>/point_<index>.
ExperimentConfig grid_point_config(const ExperimentConfig& base,
                                   const SweepSpec& sweep, std::size_t index);

struct GridRow {
  std::size_t index = 0;
  ExperimentConfig config;
  std::vector<std::pair<std::string, std::string>> point;
  bool ok = false;
  std::string error;
  RunSummary summary;
};

// One row per grid point; a failing point becomes an error row. Throws
// Error(kConfig) for an empty sweep.
std::vector<GridRow> run_grid(const ExperimentConfig& base,
                              const SweepSpec& sweep);

void write_grid_csv(const std::filesystem::path& path, const SweepSpec& sweep,
                    const std::vector<GridRow>& rows);

}  // namespace eabandit
