#include "eabandit/experiment.hpp"

#include "eabandit/csv.hpp"
#include "eabandit/data.hpp"
#include "eabandit/errors.hpp"
#include "eabandit/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <barrier>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace eabandit {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  const int sources = (!ratings.empty() ? 1 : 0) + (!prepared.empty() ? 1 : 0) +
                      (synthetic_items > 0 ? 1 : 0);
  if (sources != 1) {
    throw config_error(
        "exactly one data source is required: ratings, prepared or "
        "synthetic_items");
  }
  if (num_users == 0) throw config_error("num_users must be > 0");
  if (dim == 0) throw config_error("dim must be > 0");
  if (rounds == 0) throw config_error("rounds must be > 0");
  if (snapshot_interval == 0) throw config_error("snapshot_interval must be > 0");
  if (threads == 0) throw config_error("threads must be > 0");
  if (!(mf_regularization > 0.0)) {
    throw config_error("mf_regularization must be > 0");
  }
  if (top_items && *top_items == 0) throw config_error("top_items must be > 0");
  if (synthetic_items > 0 && synthetic_items < policy.list_size) {
    throw config_error("synthetic_items must be >= k");
  }
  policy.validate();
}

namespace {

std::size_t to_size(std::string_view key, std::string_view value) {
  std::int64_t v = 0;
  if (!parse_int(value, v) || v < 0) {
    throw config_error("field '" + std::string(key) +
                       "' expects a nonnegative integer, got '" +
                       std::string(value) + "'");
  }
  return static_cast<std::size_t>(v);
}

double to_real(std::string_view key, std::string_view value) {
  double v = 0.0;
  if (!parse_double(value, v)) {
    throw config_error("field '" + std::string(key) + "' expects a number, got '" +
                       std::string(value) + "'");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw config_error("field '" + std::string(key) + "' expects true/false");
}

}  // namespace

void set_config_field(ExperimentConfig& c, std::string_view key,
                      std::string_view value) {
  if (key == "ratings") {
    c.ratings = value;
  } else if (key == "prepared") {
    c.prepared = value;
  } else if (key == "synthetic_items") {
    c.synthetic_items = to_size(key, value);
  } else if (key == "num_users" || key == "users") {
    c.num_users = to_size(key, value);
  } else if (key == "top_items") {
    c.top_items = to_size(key, value);
  } else if (key == "dim" || key == "d") {
    c.dim = to_size(key, value);
  } else if (key == "mf_regularization") {
    c.mf_regularization = to_real(key, value);
  } else if (key == "mf_iterations") {
    c.mf_iterations = to_size(key, value);
  } else if (key == "algorithm") {
    c.policy.algorithm = parse_algorithm(value);
  } else if (key == "alpha") {
    c.policy.alpha = to_real(key, value);
  } else if (key == "sigma") {
    c.policy.sigma = to_real(key, value);
  } else if (key == "lambda") {
    c.policy.lambda = to_real(key, value);
  } else if (key == "gamma") {
    c.policy.gamma = to_real(key, value);
  } else if (key == "weight_fn" || key == "weight-fn") {
    c.policy.weight_fn = parse_weight_function(value, c.beta);
  } else if (key == "beta") {
    c.beta = to_real(key, value);
    c.policy.weight_fn.beta = *c.beta;
  } else if (key == "k") {
    c.policy.list_size = to_size(key, value);
  } else if (key == "ears_cutoff") {
    c.ears_cutoff = to_real(key, value);
  } else if (key == "rounds" || key == "n") {
    c.rounds = to_size(key, value);
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(to_size(key, value));
  } else if (key == "snapshot_interval") {
    c.snapshot_interval = to_size(key, value);
  } else if (key == "threads") {
    c.threads = to_size(key, value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "log_recommendations") {
    c.log_recommendations = to_bool(key, value);
  } else {
    throw config_error("unknown config field '" + std::string(key) + "'");
  }
}

void apply_json_config(ExperimentConfig& config, std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw config_error("config must be a JSON object");
  // Apply beta first so that weight_fn picks it up regardless of key order.
  if (doc.contains("beta")) set_config_field(config, "beta", doc["beta"].dump());
  for (const auto& [key, value] : doc.items()) {
    if (key == "beta") continue;
    if (value.is_string()) {
      set_config_field(config, key, value.get<std::string>());
    } else if (value.is_number() || value.is_boolean()) {
      set_config_field(config, key, value.dump());
    } else if (value.is_null()) {
      continue;
    } else {
      throw config_error("field '" + key + "' must be a scalar");
    }
  }
}

ExperimentConfig load_config_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig config;
  apply_json_config(config, buf.str());
  return config;
}

std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& c) {
  std::string source = "synthetic";
  if (!c.ratings.empty()) source = c.ratings;
  if (!c.prepared.empty()) source = c.prepared;
  return {
      {"source", source},
      {"algorithm", to_string(c.policy.algorithm)},
      {"weight_fn", to_string(c.policy.weight_fn.kind)},
      {"beta", format_double(c.policy.weight_fn.beta)},
      {"alpha", format_double(c.policy.alpha)},
      {"gamma", format_double(c.policy.gamma)},
      {"lambda", format_double(c.policy.lambda)},
      {"sigma", format_double(c.policy.sigma)},
      {"dim", std::to_string(c.dim)},
      {"k", std::to_string(c.policy.list_size)},
      {"rounds", std::to_string(c.rounds)},
      {"seed", std::to_string(c.seed)},
  };
}

// ---------------------------------------------------------------------------
// Simulation construction

Simulation make_synthetic_simulation(std::size_t items, std::size_t users,
                                     std::size_t dim, std::uint64_t seed) {
  Rng catalog_rng = make_rng(seed, streams::kSyntheticCatalog);
  FeatureMatrix features = sample_features(items, dim, catalog_rng);
  // Features are already unit norm; build a provisional catalog to evaluate
  // attractions, then attach merit.
  ItemCatalog provisional(features, std::vector<double>(items, 1.0));

  Simulation sim;
  std::vector<double> merit(items, 0.0);
  for (std::size_t u = 0; u < users; ++u) {
    Rng rng = make_rng(seed, streams::kThetaStar, u);
    sim.users.push_back(
        UserGroundTruth::synthetic(sample_theta_star(dim, rng), provisional));
    sim.user_ids.push_back(static_cast<std::int64_t>(u));
    for (std::size_t i = 0; i < items; ++i) {
      merit[i] += sim.users.back().attraction(static_cast<ItemIndex>(i));
    }
  }
  for (double& v : merit) v /= static_cast<double>(users);
  sim.catalog = ItemCatalog(std::move(features), std::move(merit));
  sim.regret_mode = RegretMode::kExpected;
  return sim;
}

namespace {

struct PreparedData {
  BinaryInteractions train;
  BinaryInteractions test;
  std::vector<std::int64_t> item_ids;
  Eigen::MatrixXd item_embeddings;
  std::vector<double> merit;
};

Simulation assemble_dataset_simulation(const PreparedData& data) {
  std::vector<std::int64_t> kept_ids;
  std::vector<Eigen::Index> kept_rows;
  std::vector<double> kept_merit;
  for (std::size_t i = 0; i < data.item_ids.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    // Items whose training labels are all zero factor to the zero vector and
    // have no direction to normalize; they are left out of the catalog.
    if (data.item_embeddings.row(row).norm() > 1e-12) {
      kept_ids.push_back(data.item_ids[i]);
      kept_rows.push_back(row);
      kept_merit.push_back(data.merit[i]);
    }
  }
  if (kept_ids.empty()) throw numeric_error("no item has a usable embedding");

  FeatureMatrix features(static_cast<Eigen::Index>(kept_rows.size()),
                         data.item_embeddings.cols());
  for (std::size_t r = 0; r < kept_rows.size(); ++r) {
    features.row(static_cast<Eigen::Index>(r)) =
        data.item_embeddings.row(kept_rows[r]);
  }
  std::unordered_map<std::int64_t, ItemIndex> index;
  for (std::size_t i = 0; i < kept_ids.size(); ++i) {
    index.emplace(kept_ids[i], static_cast<ItemIndex>(i));
  }

  Simulation sim;
  sim.catalog = ItemCatalog(std::move(features), std::move(kept_merit),
                            std::move(kept_ids));
  sim.regret_mode = RegretMode::kRealized;

  std::vector<std::int64_t> users;
  for (const auto& x : data.train) users.push_back(x.user);
  for (const auto& x : data.test) users.push_back(x.user);
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());

  std::unordered_map<std::int64_t, std::vector<ItemIndex>> positives;
  for (const auto& x : data.test) {
    if (x.label != 1) continue;
    const auto it = index.find(x.item);
    if (it != index.end()) positives[x.user].push_back(it->second);
  }
  for (std::int64_t u : users) {
    const auto it = positives.find(u);
    const std::span<const ItemIndex> pos =
        it == positives.end() ? std::span<const ItemIndex>()
                              : std::span<const ItemIndex>(it->second);
    sim.users.push_back(UserGroundTruth::dataset(pos, sim.catalog.size()));
    sim.user_ids.push_back(u);
  }
  return sim;
}

void factorize_into(PreparedData& data, const ExperimentConfig& config) {
  FactorizationConfig fc;
  fc.dim = config.dim;
  fc.regularization = config.mf_regularization;
  fc.iterations = config.mf_iterations;
  fc.seed = config.seed;
  const FactorizationResult fr = factorize(data.train, fc);
  data.item_ids = fr.item_ids;
  data.item_embeddings = fr.item_embeddings;
  data.merit = compute_merit(fr);
}

}  // namespace

Simulation build_simulation(const ExperimentConfig& config) {
  config.validate();
  if (config.synthetic_items > 0) {
    return make_synthetic_simulation(config.synthetic_items, config.num_users,
                                     config.dim, config.seed);
  }

  PreparedData data;
  if (!config.ratings.empty()) {
    const RatingsTable table = parse_ratings(config.ratings);
    const BinaryInteractions filtered =
        filter_active(binarize(table), config.num_users, config.top_items);
    std::tie(data.train, data.test) = split_train_test(filtered, config.seed);
    factorize_into(data, config);
  } else {
    const fs::path dir(config.prepared);
    data.train = read_interactions_csv(dir / "train.csv");
    data.test = read_interactions_csv(dir / "test.csv");
    if (fs::exists(dir / "item_embeddings.csv") && fs::exists(dir / "merit.csv")) {
      auto [ids, emb] = read_embeddings_csv(dir / "item_embeddings.csv");
      auto [merit_ids, merit] = read_merit_csv(dir / "merit.csv");
      if (merit_ids != ids) {
        throw format_error("merit.csv and item_embeddings.csv list different items");
      }
      data.item_ids = std::move(ids);
      data.item_embeddings = std::move(emb);
      data.merit = std::move(merit);
    } else {
      factorize_into(data, config);
    }
  }
  Simulation sim = assemble_dataset_simulation(data);
  if (sim.catalog.size() < config.policy.list_size) {
    throw config_error("catalog has " + std::to_string(sim.catalog.size()) +
                       " items, fewer than k");
  }
  if (sim.catalog.dim() != config.dim) {
    throw config_error("embedding dimension " +
                       std::to_string(sim.catalog.dim()) +
                       " does not match dim " + std::to_string(config.dim));
  }
  return sim;
}

// ---------------------------------------------------------------------------
// Simulation loop

namespace {

struct Session {
  BanditState state;
  Rng rng;
  double optimal = 0.0;
};

struct Slot {
  RecommendationList list;
  Feedback feedback;
  double regret = 0.0;
  double exploration = 0.0;
};

class Runner {
 public:
  Runner(const Simulation& sim, const ExperimentConfig& config)
      : sim_(sim),
        config_(config),
        k_(config.policy.list_size),
        slots_(sim.users.size()) {
    result_.ledger = ExposureLedger(sim.catalog.size(), k_);
    result_.item_clicks.assign(sim.catalog.size(), 0);
    sessions_.reserve(sim.users.size());
    for (std::size_t u = 0; u < sim.users.size(); ++u) {
      Session s{BanditState(sim.catalog.dim(), config.policy.lambda),
                make_rng(config.seed, streams::kUserSession,
                         static_cast<std::uint64_t>(sim.user_ids[u])),
                optimal_reward(sim.users[u], k_)};
      sessions_.push_back(std::move(s));
    }
    if (config.log_recommendations) {
      result_.log_items.reserve(config.rounds * sim.users.size() * k_);
      result_.log_clicks.reserve(config.rounds * sim.users.size());
    }
  }

  RunResult run() {
    const std::size_t users = sim_.users.size();
    const std::size_t threads = std::min(config_.threads, std::max<std::size_t>(users, 1));
    if (threads <= 1) {
      for (std::size_t r = 1; r <= config_.rounds; ++r) {
        for (std::size_t u = 0; u < users; ++u) step(u);
        finish_round();
      }
    } else {
      run_parallel(threads);
    }
    if (failure_) std::rethrow_exception(failure_);

    RunSummary& s = result_.summary;
    s.num_users = users;
    s.num_items = sim_.catalog.size();
    s.rounds = config_.rounds;
    s.total_clicks = cum_clicks_;
    s.avg_clicks = avg_clicks(cum_clicks_, users, config_.rounds);
    s.cum_regret = cum_regret_;
    s.fairness = result_.series.back().fairness;
    return std::move(result_);
  }

 private:
  void run_parallel(std::size_t threads) {
    auto completion = [this]() noexcept {
      if (!failed_.load()) finish_round();
    };
    std::barrier sync(static_cast<std::ptrdiff_t>(threads), completion);
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([this, w, threads, &sync] {
        for (std::size_t r = 1; r <= config_.rounds; ++r) {
          if (!failed_.load()) {
            try {
              for (std::size_t u = w; u < sim_.users.size(); u += threads) step(u);
            } catch (...) {
              fail(std::current_exception());
            }
          }
          sync.arrive_and_wait();
        }
      });
    }
  }

  void fail(std::exception_ptr e) {
    std::lock_guard lock(failure_mutex_);
    if (!failure_) failure_ = e;
    failed_.store(true);
  }

  void step(std::size_t u) {
    Session& s = sessions_[u];
    const UserGroundTruth& user = sim_.users[u];
    const PolicyConfig& policy = config_.policy;
    Slot& slot = slots_[u];

    const CatalogScores scores = score_catalog(s.state, sim_.catalog, policy.sigma);
    slot.list = top_k(scores.estimate + policy.alpha * scores.width, k_);
    double width = 0.0;
    for (ItemIndex i : slot.list.items) width += policy.alpha * scores.width[i];
    slot.exploration = width / static_cast<double>(k_);

    if (policy.algorithm == Algorithm::kEars) {
      slot.list = ears_rerank(slot.list, estimate_theta(s.state, policy.sigma),
                              sim_.catalog, config_.ears_cutoff, s.rng);
    }
    slot.feedback = simulate_click(user, slot.list, s.rng);
    if (sim_.regret_mode == RegretMode::kExpected) {
      slot.regret = regret_step(s.optimal, expected_reward(user, slot.list.items),
                                RegretMode::kExpected);
    } else {
      slot.regret = regret_step(s.optimal, realized_reward(slot.feedback, k_),
                                RegretMode::kRealized);
    }
    update(s.state, slot.list, slot.feedback, policy, sim_.catalog);
  }

  // Aggregates the finished round in user order on a single thread.
  void finish_round() noexcept {
    try {
      ++round_;
      double exploration = 0.0;
      for (const Slot& slot : slots_) {
        result_.ledger.record_list(slot.list);
        if (slot.feedback.clicked(k_)) {
          ++cum_clicks_;
          ++result_.item_clicks[slot.list.items[slot.feedback.click_position - 1]];
        }
        cum_regret_ += slot.regret;
        exploration += slot.exploration;
        if (config_.log_recommendations) {
          result_.log_items.insert(result_.log_items.end(),
                                   slot.list.items.begin(),
                                   slot.list.items.end());
          result_.log_clicks.push_back(slot.feedback.click_position);
        }
      }
      exploration /= static_cast<double>(slots_.size());
      if (round_ == 1 || round_ % config_.snapshot_interval == 0 ||
          round_ == config_.rounds) {
        RoundRecord rec;
        rec.round = round_;
        rec.cum_clicks = cum_clicks_;
        rec.cum_regret = cum_regret_;
        rec.mean_exploration = exploration;
        rec.fairness = all_fairness(result_.ledger, sim_.catalog.merit());
        result_.series.push(rec);
      }
    } catch (...) {
      fail(std::current_exception());
    }
  }

  const Simulation& sim_;
  const ExperimentConfig& config_;
  std::size_t k_;
  std::vector<Session> sessions_;
  std::vector<Slot> slots_;
  RunResult result_;
  std::size_t round_ = 0;
  std::uint64_t cum_clicks_ = 0;
  double cum_regret_ = 0.0;
  std::atomic<bool> failed_{false};
  std::mutex failure_mutex_;
  std::exception_ptr failure_;
};

}  // namespace

RunResult simulate(const Simulation& sim, const ExperimentConfig& config) {
  config.validate();
  if (sim.users.empty()) throw config_error("simulation has no users");
  if (sim.catalog.size() < config.policy.list_size) {
    throw config_error("catalog smaller than k");
  }
  Runner runner(sim, config);
  return runner.run();
}

std::vector<std::string> run_diagnostics(const ExperimentConfig& config,
                                         const Simulation& sim) {
  std::vector<std::string> out;
  const PolicyConfig& p = config.policy;
  if (p.algorithm == Algorithm::kEaLinUcb) {
    const double bound = gamma_admissible_bound(p.weight_fn, p.list_size);
    if (bound < 0.0) {
      out.push_back("warning: weight function " + to_string(p.weight_fn.kind) +
                    " exceeds 1 within the list (gamma bound " +
                    format_double(bound) +
                    "); no gamma >= 0 satisfies the regret-bound condition");
    } else if (p.gamma > bound) {
      out.push_back("warning: gamma " + format_double(p.gamma) +
                    " exceeds the admissible bound " + format_double(bound));
    }
  }
  double theta_norm = 1.0;
  if (sim.regret_mode == RegretMode::kExpected && !sim.users.empty()) {
    theta_norm = 0.0;
    for (const auto& u : sim.users) theta_norm = std::max(theta_norm, u.theta_star().norm());
  }
  const double alpha_min = alpha_condition(p.sigma, config.dim, config.rounds,
                                           p.list_size, theta_norm);
  out.push_back("info: alpha condition (natural log) = " + format_double(alpha_min) +
                (p.alpha >= alpha_min ? " (satisfied)" : " (not satisfied)"));
  out.push_back("info: regret bound at alpha " + format_double(p.alpha) +
                " (natural log) = " +
                format_double(regret_bound(p.alpha, p.list_size, config.dim,
                                           config.rounds, p.sigma)));
  return out;
}

RunResult run_experiment(const ExperimentConfig& config,
                         std::ostream* diagnostics) {
  const Simulation sim = build_simulation(config);
  if (diagnostics) {
    for (const auto& line : run_diagnostics(config, sim)) *diagnostics << line << '\n';
  }
  RunResult result = simulate(sim, config);
  if (!config.out.empty()) write_run_outputs(config.out, config, sim, result);
  return result;
}

// ---------------------------------------------------------------------------
// Output

std::vector<std::string> summary_header() {
  return {"source",     "algorithm",  "weight_fn",    "beta",
          "alpha",      "gamma",      "lambda",       "sigma",
          "dim",        "k",          "rounds",       "seed",
          "num_users",  "num_items",  "avg_clicks",   "equality_b",
          "equality_p", "equity_b",   "equity_p",     "cum_regret",
          "total_clicks"};
}

std::vector<std::string> summary_values(const ExperimentConfig& config,
                                        const RunSummary& s) {
  std::vector<std::string> row;
  for (auto& [key, value] : config_echo(config)) row.push_back(value);
  row.push_back(std::to_string(s.num_users));
  row.push_back(std::to_string(s.num_items));
  row.push_back(format_double(s.avg_clicks));
  row.push_back(format_double(s.fairness.equality_b));
  row.push_back(format_double(s.fairness.equality_p));
  row.push_back(format_double(s.fairness.equity_b));
  row.push_back(format_double(s.fairness.equity_p));
  row.push_back(format_double(s.cum_regret));
  row.push_back(std::to_string(s.total_clicks));
  return row;
}

void write_run_outputs(const fs::path& dir, const ExperimentConfig& config,
                       const Simulation& sim, const RunResult& result) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory " + dir.string());

  {
    CsvWriter rounds(dir / "rounds.csv");
    rounds.row({"round", "cum_clicks", "cum_regret", "mean_exploration",
                "equality_b", "equality_p", "equity_b", "equity_p"});
    for (const RoundRecord& r : result.series.records()) {
      rounds.row({std::to_string(r.round), std::to_string(r.cum_clicks),
                  format_double(r.cum_regret), format_double(r.mean_exploration),
                  format_double(r.fairness.equality_b),
                  format_double(r.fairness.equality_p),
                  format_double(r.fairness.equity_b),
                  format_double(r.fairness.equity_p)});
    }
  }
  {
    CsvWriter summary(dir / "summary.csv");
    summary.row(summary_header());
    summary.row(summary_values(config, result.summary));
  }
  {
    CsvWriter exposure(dir / "exposure.csv");
    exposure.row({"item_id", "e_b", "e_p", "e_bm", "e_pm", "clicks"});
    for (std::size_t i = 0; i < sim.catalog.size(); ++i) {
      const auto item = static_cast<ItemIndex>(i);
      const double eb = result.ledger.binary(item);
      const double ep = result.ledger.position(item);
      const double merit = sim.catalog.merit(item);
      exposure.row({std::to_string(sim.catalog.external_id(item)),
                    format_double(eb), format_double(ep),
                    format_double(eb / merit), format_double(ep / merit),
                    std::to_string(result.item_clicks[i])});
    }
  }
  if (config.log_recommendations) {
    CsvWriter log(dir / "recommendations.csv");
    const std::size_t k = config.policy.list_size;
    std::vector<std::string> header{"round", "user_id"};
    for (std::size_t p = 1; p <= k; ++p) header.push_back("item_" + std::to_string(p));
    header.push_back("click_position");
    log.row(header);
    const std::size_t users = sim.users.size();
    for (std::size_t idx = 0; idx < result.log_clicks.size(); ++idx) {
      std::vector<std::string> row{std::to_string(idx / users + 1),
                                   std::to_string(sim.user_ids[idx % users])};
      for (std::size_t p = 0; p < k; ++p) {
        row.push_back(std::to_string(
            sim.catalog.external_id(result.log_items[idx * k + p])));
      }
      row.push_back(std::to_string(result.log_clicks[idx]));
      log.row(row);
    }
  }
}

}  // namespace eabandit
