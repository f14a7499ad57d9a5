// eabandit: command-line harness for exposure-aware cascading bandit runs.

#include "eabandit/bandit.hpp"
#include "eabandit/compare.hpp"
#include "eabandit/csv.hpp"
#include "eabandit/data.hpp"
#include "eabandit/errors.hpp"
#include "eabandit/experiment.hpp"
#include "eabandit/grid.hpp"
#include "eabandit/metrics.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace eabandit;

namespace {

// Flags shared by `run` and `grid`; each maps onto a config field.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  bool log_recommendations = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file");
    const std::vector<std::pair<std::string, std::string>> flags = {
        {"--ratings", "ratings file (user::item::rating[::ts], tab or comma)"},
        {"--prepared", "directory written by `ingest` (and `factorize`)"},
        {"--synthetic-items", "number of items for synthetic users"},
        {"--users", "most active users to keep / synthetic user count"},
        {"--top-items", "most rated items to keep"},
        {"--dim", "feature dimension d"},
        {"--mf-regularization", "ALS regularization"},
        {"--mf-iterations", "ALS sweeps"},
        {"--algorithm", "linucb | ealinucb | ears"},
        {"--alpha", "exploration degree"},
        {"--sigma", "learning-rate scale"},
        {"--lambda", "ridge regularizer"},
        {"--gamma", "penalty for examined-unclicked items"},
        {"--weight-fn", "constant | log | rbp | linear"},
        {"--beta", "patience for rbp / linear"},
        {"--k", "list size"},
        {"--ears-cutoff", "EARS relevance cutoff (default: list median)"},
        {"--rounds", "number of rounds n"},
        {"--seed", "master seed"},
        {"--snapshot-interval", "rounds between metric snapshots"},
        {"--threads", "worker threads"},
        {"--out", "output directory"},
    };
    for (const auto& [flag, help] : flags) {
      app->add_option(flag, values[flag], help);
    }
    app->add_flag("--log-recommendations", log_recommendations,
                  "write recommendations.csv with every list");
  }

  ExperimentConfig resolve(CLI::App* app) const {
    ExperimentConfig config;
    if (!config_path.empty()) config = load_config_file(config_path);
    // beta first, so --weight-fn picks it up.
    if (app->count("--beta") > 0) set_config_field(config, "beta", values.at("--beta"));
    for (const auto& [flag, value] : values) {
      if (flag == "--beta" || app->count(flag) == 0) continue;
      std::string key = flag.substr(2);
      for (char& c : key) {
        if (c == '-') c = '_';
      }
      if (key == "users") key = "num_users";
      set_config_field(config, key, value);
    }
    if (log_recommendations) config.log_recommendations = true;
    config.validate();
    return config;
  }
};

void print_summary(const RunSummary& s) {
  std::cout << "users=" << s.num_users << " items=" << s.num_items
            << " rounds=" << s.rounds << '\n'
            << "avg_clicks=" << format_double(s.avg_clicks)
            << " cum_regret=" << format_double(s.cum_regret) << '\n'
            << "equality_b=" << format_double(s.fairness.equality_b)
            << " equality_p=" << format_double(s.fairness.equality_p)
            << " equity_b=" << format_double(s.fairness.equity_b)
            << " equity_p=" << format_double(s.fairness.equity_p) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exposure-aware linear cascading bandits: simulation harness"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "binarize, filter and split ratings");
  std::string ingest_ratings, ingest_out;
  std::size_t ingest_users = 1000;
  std::size_t ingest_top_items = 0;
  std::uint64_t ingest_seed = 42;
  ingest->add_option("--ratings", ingest_ratings, "ratings file")->required();
  ingest->add_option("--users", ingest_users, "most active users to keep");
  ingest->add_option("--top-items", ingest_top_items, "most rated items to keep (0 = all)");
  ingest->add_option("--seed", ingest_seed, "split seed");
  ingest->add_option("--out", ingest_out, "output directory")->required();

  // factorize
  auto* fact = app.add_subcommand("factorize", "ALS item embeddings and merit");
  std::string fact_train, fact_out;
  FactorizationConfig fc;
  fact->add_option("--train", fact_train, "train.csv from ingest")->required();
  fact->add_option("--dim", fc.dim, "embedding dimension");
  fact->add_option("--mf-regularization", fc.regularization, "L2 regularization");
  fact->add_option("--mf-iterations", fc.iterations, "ALS sweeps");
  fact->add_option("--seed", fc.seed, "initialization seed");
  fact->add_option("--out", fact_out, "output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "simulate one configuration");
  ConfigFlags run_flags;
  run_flags.attach(run);

  // grid
  auto* grid = app.add_subcommand("grid", "sweep configurations");
  ConfigFlags grid_flags;
  grid_flags.attach(grid);
  std::vector<std::string> sweeps;
  grid->add_option("--sweep", sweeps, "field=v1,v2,... (repeatable)")->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "per-item exposure change between runs");
  std::string run_a, run_b, cmp_notion = "P", cmp_out;
  cmp->add_option("--run-a", run_a, "run under study (e.g. ealinucb)")->required();
  cmp->add_option("--run-b", run_b, "baseline run (e.g. linucb)")->required();
  cmp->add_option("--notion", cmp_notion, "B | P | BM | PM");
  cmp->add_option("--out", cmp_out, "CSV output (default: stdout)");

  // bound
  auto* bound = app.add_subcommand("bound", "alpha condition and regret bound");
  double b_sigma = 1.0, b_theta = 1.0, b_alpha = -1.0, b_beta = -1.0;
  std::size_t b_dim = 10, b_rounds = 50000, b_k = 10;
  std::string b_weight = "constant";
  bound->add_option("--sigma", b_sigma);
  bound->add_option("--dim", b_dim);
  bound->add_option("--rounds", b_rounds);
  bound->add_option("--k", b_k);
  bound->add_option("--theta-norm", b_theta);
  bound->add_option("--alpha", b_alpha, "alpha for the bound (default: the alpha condition)");
  bound->add_option("--weight-fn", b_weight, "weight function for the gamma bound");
  bound->add_option("--beta", b_beta);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*ingest) {
      const RatingsTable table = parse_ratings(ingest_ratings);
      if (table.rows.empty()) std::cerr << "warning: ratings file is empty\n";
      if (table.malformed_lines > 0) {
        std::cerr << "warning: skipped " << table.malformed_lines
                  << " malformed lines\n";
      }
      std::optional<std::size_t> top_items;
      if (ingest_top_items > 0) top_items = ingest_top_items;
      const auto filtered = filter_active(binarize(table), ingest_users, top_items);
      const auto [train, test] = split_train_test(filtered, ingest_seed);
      fs::create_directories(ingest_out);
      write_interactions_csv(fs::path(ingest_out) / "train.csv", train);
      write_interactions_csv(fs::path(ingest_out) / "test.csv", test);
      std::cout << "ratings=" << table.rows.size() << " kept=" << filtered.size()
                << " train=" << train.size() << " test=" << test.size() << '\n';
    } else if (*fact) {
      const auto train = read_interactions_csv(fact_train);
      const FactorizationResult fr = factorize(train, fc);
      fs::create_directories(fact_out);
      write_embeddings_csv(fs::path(fact_out) / "item_embeddings.csv", fr.item_ids,
                           fr.item_embeddings, "item_id");
      write_embeddings_csv(fs::path(fact_out) / "user_embeddings.csv", fr.user_ids,
                           fr.user_embeddings, "user_id");
      write_merit_csv(fs::path(fact_out) / "merit.csv", fr.item_ids,
                      compute_merit(fr));
      std::cout << "users=" << fr.user_ids.size() << " items=" << fr.item_ids.size()
                << " objective=" << format_double(fr.objective.empty() ? 0.0 : fr.objective.back())
                << '\n';
    } else if (*run) {
      const ExperimentConfig config = run_flags.resolve(run);
      const RunResult result = run_experiment(config, &std::cerr);
      print_summary(result.summary);
    } else if (*grid) {
      const ExperimentConfig base = grid_flags.resolve(grid);
      SweepSpec sweep;
      for (const auto& s : sweeps) sweep.push_back(parse_sweep_axis(s));
      const auto rows = run_grid(base, sweep);
      std::size_t failed = 0;
      for (const auto& row : rows) {
        if (!row.ok) {
          ++failed;
          std::cerr << "grid point " << row.index << " failed: " << row.error << '\n';
        }
      }
      const fs::path out = base.out.empty() ? fs::path(".") : fs::path(base.out);
      fs::create_directories(out);
      write_grid_csv(out / "grid.csv", sweep, rows);
      std::cout << "grid points=" << rows.size() << " failed=" << failed
                << " -> " << (out / "grid.csv").string() << '\n';
    } else if (*cmp) {
      const auto rows = compare_runs(run_a, run_b, parse_exposure_notion(cmp_notion));
      if (cmp_out.empty()) {
        std::cout << "item_id,exposure_b,exposure_a,delta_exposure,delta_clicks\n";
        for (const auto& r : rows) {
          std::cout << r.item << ',' << format_double(r.exposure_b) << ','
                    << format_double(r.exposure_a) << ','
                    << format_double(r.delta_exposure) << ','
                    << format_double(r.delta_clicks) << '\n';
        }
      } else {
        write_comparison_csv(cmp_out, rows);
      }
    } else if (*bound) {
      std::optional<double> beta;
      if (b_beta > 0.0) beta = b_beta;
      const WeightFunction wf = parse_weight_function(b_weight, beta);
      const double alpha_min = alpha_condition(b_sigma, b_dim, b_rounds, b_k, b_theta);
      const double alpha = b_alpha >= 0.0 ? b_alpha : alpha_min;
      const double gamma_max = gamma_admissible_bound(wf, b_k);
      std::cout << "alpha_condition=" << format_double(alpha_min) << '\n'
                << "regret_bound=" << format_double(regret_bound(alpha, b_k, b_dim, b_rounds, b_sigma))
                << " (alpha=" << format_double(alpha) << ")\n"
                << "gamma_admissible_bound=" << format_double(gamma_max) << '\n'
                << "note: natural logarithms throughout\n";
      if (gamma_max < 0.0) {
        std::cerr << "warning: no gamma >= 0 is admissible for weight function "
                  << b_weight << " with k=" << b_k << '\n';
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
