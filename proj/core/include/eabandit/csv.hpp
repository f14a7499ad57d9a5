#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace eabandit {

// Six significant digits, the precision every emitted float uses.
std::string format_double(double value);

std::vector<std::string_view> split_fields(std::string_view line,
                                           std::string_view delimiter);

// Strict numeric parsing; false on any trailing garbage.
bool parse_int(std::string_view text, std::int64_t& out);
bool parse_double(std::string_view text, double& out);

class CsvWriter {
 public:
  // Throws Error(kIo) if the file cannot be opened.
  explicit CsvWriter(const std::filesystem::path& path);

  void row(const std::vector<std::string>& fields);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws Error(kFormat) if missing.
  std::size_t column(std::string_view name) const;
};

// Comma-separated with a header row. Throws Error(kIo) / Error(kFormat).
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace eabandit
