#include "eabandit/compare.hpp"

#include "eabandit/csv.hpp"
#include "eabandit/errors.hpp"

#include <algorithm>
#include <unordered_map>

namespace eabandit {

double ExposureRow::exposure(ExposureNotion notion) const {
  switch (notion) {
    case ExposureNotion::kBinary: return e_b;
    case ExposureNotion::kPosition: return e_p;
    case ExposureNotion::kBinaryMerit: return e_bm;
    case ExposureNotion::kPositionMerit: return e_pm;
  }
  return 0.0;
}

std::vector<ExposureRow> read_exposure_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t c_item = table.column("item_id");
  const std::size_t c_b = table.column("e_b");
  const std::size_t c_p = table.column("e_p");
  const std::size_t c_bm = table.column("e_bm");
  const std::size_t c_pm = table.column("e_pm");
  const std::size_t c_clicks = table.column("clicks");
  std::vector<ExposureRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& f : table.rows) {
    ExposureRow r;
    if (!parse_int(f[c_item], r.item) || !parse_double(f[c_b], r.e_b) ||
        !parse_double(f[c_p], r.e_p) || !parse_double(f[c_bm], r.e_bm) ||
        !parse_double(f[c_pm], r.e_pm) || !parse_double(f[c_clicks], r.clicks)) {
      throw format_error(path.string() + ": malformed exposure row");
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<ComparisonRow> compare_exposure(std::span<const ExposureRow> run_a,
                                            std::span<const ExposureRow> run_b,
                                            ExposureNotion notion) {
  if (run_a.size() != run_b.size()) {
    throw Error(ErrorKind::kComparison, "runs have different catalog sizes");
  }
  std::unordered_map<std::int64_t, const ExposureRow*> a_by_item;
  for (const auto& r : run_a) a_by_item.emplace(r.item, &r);

  std::vector<ComparisonRow> out;
  out.reserve(run_b.size());
  for (const auto& b : run_b) {
    const auto it = a_by_item.find(b.item);
    if (it == a_by_item.end()) {
      throw Error(ErrorKind::kComparison,
                  "item " + std::to_string(b.item) + " missing from run a");
    }
    const ExposureRow& a = *it->second;
    ComparisonRow row;
    row.item = b.item;
    row.exposure_b = b.exposure(notion);
    row.exposure_a = a.exposure(notion);
    row.delta_exposure = delta_exposure(row.exposure_a, row.exposure_b);
    row.delta_clicks = delta_exposure(a.clicks, b.clicks);
    out.push_back(row);
  }
  std::sort(out.begin(), out.end(),
            [](const ComparisonRow& x, const ComparisonRow& y) {
              if (x.exposure_b != y.exposure_b) return x.exposure_b > y.exposure_b;
              return x.item < y.item;
            });
  return out;
}

std::vector<ComparisonRow> compare_runs(const std::filesystem::path& run_a,
                                        const std::filesystem::path& run_b,
                                        ExposureNotion notion) {
  const auto a = read_exposure_csv(run_a / "exposure.csv");
  const auto b = read_exposure_csv(run_b / "exposure.csv");
  return compare_exposure(a, b, notion);
}

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows) {
  CsvWriter out(path);
  out.row({"item_id", "exposure_b", "exposure_a", "delta_exposure",
           "delta_clicks"});
  for (const auto& r : rows) {
    out.row({std::to_string(r.item), format_double(r.exposure_b),
             format_double(r.exposure_a), format_double(r.delta_exposure),
             format_double(r.delta_clicks)});
  }
}

}  // namespace eabandit
