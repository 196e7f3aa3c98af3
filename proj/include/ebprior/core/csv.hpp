#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ebprior::core {

/// Header plus rows of raw fields. Plain comma separation, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in, const std::string& source_name);
CsvTable read_csv(const std::filesystem::path& path);

/// 17 significant digits; round-trips every finite double.
std::string format_real(double v);
double parse_real(std::string_view field, std::string_view what);
long long parse_integer(std::string_view field, std::string_view what);

/// Fails on any stream error; parent directories are created.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ebprior::core
