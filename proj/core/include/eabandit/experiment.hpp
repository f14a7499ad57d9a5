#pragma once

// End-to-end simulation runs: data preparation, per-user bandit sessions
// advanced synchronously round by round, metric snapshots and CSV output.

#include "eabandit/bandit.hpp"
#include "eabandit/catalog.hpp"
#include "eabandit/environment.hpp"
#include "eabandit/metrics.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eabandit {

struct ExperimentConfig {
  // Data source: exactly one of ratings / prepared / synthetic_items.
  std::string ratings;                  // raw ratings file
  std::string prepared;                 // directory written by ingest/factorize
  std::size_t synthetic_items = 0;      // > 0 selects synthetic users

  std::size_t num_users = 1000;         // most active users (or synthetic users)
  std::optional<std::size_t> top_items;
  std::size_t dim = 10;
  double mf_regularization = 0.1;
  std::size_t mf_iterations = 20;

  PolicyConfig policy{.algorithm = Algorithm::kLinUcb};
  std::optional<double> beta;           // explicit weight-function patience
  std::optional<double> ears_cutoff;    // default: median estimated relevance

  std::size_t rounds = 50000;
  std::uint64_t seed = 42;
  std::size_t snapshot_interval = 50;
  std::size_t threads = 1;
  std::string out;
  bool log_recommendations = false;

  // Throws Error(kConfig) naming the offending field.
  void validate() const;
};

// Sets one field from its textual value. Keys match the JSON config keys:
// ratings, prepared, synthetic_items, num_users, top_items, dim,
// mf_regularization, mf_iterations, algorithm, alpha, sigma, lambda, gamma,
// weight_fn, beta, k, ears_cutoff, rounds, seed, snapshot_interval, threads,
// out, log_recommendations.
void set_config_field(ExperimentConfig& config, std::string_view key,
                      std::string_view value);

// Applies every key of a JSON object on top of `config`.
void apply_json_config(ExperimentConfig& config, std::string_view json_text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

// (key, value) pairs echoed into summary files.
std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& config);

struct Simulation {
  ItemCatalog catalog;
  std::vector<UserGroundTruth> users;
  std::vector<std::int64_t> user_ids;
  RegretMode regret_mode = RegretMode::kRealized;
};

// Builds catalog and users from the configured source.
Simulation build_simulation(const ExperimentConfig& config);

// Synthetic users with theta* on the 0.9-sphere over a random unit-norm
// catalog; merit is each item's mean attraction across users.
Simulation make_synthetic_simulation(std::size_t items, std::size_t users,
                                     std::size_t dim, std::uint64_t seed);

struct RunSummary {
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  std::size_t rounds = 0;
  std::uint64_t total_clicks = 0;
  double avg_clicks = 0.0;
  double cum_regret = 0.0;
  FairnessValues fairness;
};

struct RunResult {
  MetricsSeries series;
  ExposureLedger ledger;
  std::vector<std::uint64_t> item_clicks;
  RunSummary summary;
  // Round-major log of every list (rounds x users x K) and click positions
  // (rounds x users); filled only when log_recommendations is set.
  std::vector<ItemIndex> log_items;
  std::vector<int> log_clicks;
};

// Runs all sessions for config.rounds rounds. Results do not depend on
// config.threads.
RunResult simulate(const Simulation& sim, const ExperimentConfig& config);

// Admissibility and regret-bound messages emitted at run start.
std::vector<std::string> run_diagnostics(const ExperimentConfig& config,
                                         const Simulation& sim);

// build_simulation + simulate + outputs (when config.out is set).
RunResult run_experiment(const ExperimentConfig& config,
                         std::ostream* diagnostics = nullptr);

// rounds.csv, summary.csv, exposure.csv and optionally recommendations.csv.
void write_run_outputs(const std::filesystem::path& dir,
                       const ExperimentConfig& config, const Simulation& sim,
                       const RunResult& result);

std::vector<std::string> summary_header();
std::vector<std::string> summary_values(const ExperimentConfig& config,
                                        const RunSummary& summary);

}  // namespace eabandit
