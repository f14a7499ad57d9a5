#include "eabandit/grid.hpp"

#include "eabandit/csv.hpp"
#include "eabandit/errors.hpp"
#include "eabandit/random.hpp"

namespace eabandit {

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw config_error("sweep must look like field=v1,v2,... (got '" +
                       std::string(text) + "')");
  }
  SweepAxis axis;
  axis.field = std::string(text.substr(0, eq));
  for (auto v : split_fields(text.substr(eq + 1), ",")) {
    if (v.empty()) throw config_error("empty value in sweep '" + std::string(text) + "'");
    axis.values.emplace_back(v);
  }
  return axis;
}

std::size_t grid_size(const SweepSpec& sweep) {
  if (sweep.empty()) return 0;
  std::size_t n = 1;
  for (const auto& axis : sweep) n *= axis.values.size();
  return n;
}

std::vector<std::pair<std::string, std::string>> grid_point(
    const SweepSpec& sweep, std::size_t index) {
  std::vector<std::pair<std::string, std::string>> point(sweep.size());
  for (std::size_t a = sweep.size(); a-- > 0;) {
    const auto& values = sweep[a].values;
    point[a] = {sweep[a].field, values[index % values.size()]};
    index /= values.size();
  }
  return point;
}

std::uint64_t grid_seed(std::uint64_t master_seed, std::size_t index) {
  // Keep seeds within the range the config parser accepts.
  return derive_seed(master_seed, streams::kGridPoint, index) >> 1;
}

ExperimentConfig grid_point_config(const ExperimentConfig& base,
                                   const SweepSpec& sweep, std::size_t index) {
  ExperimentConfig config = base;
  for (const auto& [field, value] : grid_point(sweep, index)) {
    set_config_field(config, field, value);
  }
  config.seed = grid_seed(base.seed, index);
  if (!base.out.empty()) {
    config.out = (std::filesystem::path(base.out) /
                  ("point_" + std::to_string(index)))
                     .string();
  }
  return config;
}

std::vector<GridRow> run_grid(const ExperimentConfig& base,
                              const SweepSpec& sweep) {
  const std::size_t n = grid_size(sweep);
  if (n == 0) throw config_error("grid sweep is empty");
  std::vector<GridRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    GridRow row;
    row.index = i;
    row.point = grid_point(sweep, i);
    row.config = base;
    row.config.seed = grid_seed(base.seed, i);
    try {
      row.config = grid_point_config(base, sweep, i);
      row.summary = run_experiment(row.config).summary;
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_grid_csv(const std::filesystem::path& path, const SweepSpec& sweep,
                    const std::vector<GridRow>& rows) {
  CsvWriter out(path);
  std::vector<std::string> header{"grid_index", "grid_seed"};
  for (const auto& axis : sweep) header.push_back("sweep_" + axis.field);
  header.push_back("status");
  for (const auto& h : summary_header()) header.push_back(h);
  out.row(header);
  const std::size_t metric_cols = summary_header().size();
  for (const GridRow& row : rows) {
    std::vector<std::string> fields{std::to_string(row.index),
                                    std::to_string(row.config.seed)};
    for (const auto& [field, value] : row.point) fields.push_back(value);
    if (row.ok) {
      fields.push_back("ok");
      for (auto& v : summary_values(row.config, row.summary)) fields.push_back(v);
    } else {
      std::string msg = row.error;
      for (char& c : msg) {
        if (c == ',' || c == '\n' || c == '"') c = ' ';
      }
      fields.push_back("error: " + msg);
      fields.resize(fields.size() + metric_cols);
    }
    out.row(fields);
  }
}

}  // namespace eabandit
