#include "ebprior/core/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "ebprior/error.hpp"

namespace ebprior::core {

namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw ValidationError(fmt::format("missing CSV column '{}'", name));
}

CsvTable read_csv(std::istream& in, const std::string& source_name) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    if (body.find('"') != std::string_view::npos) {
      throw ValidationError(fmt::format("{}:{}: quoted CSV fields are not supported", source_name, line_no));
    }
    auto fields = split_line(body);
    for (auto& f : fields) f = std::string(trim(f));
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ValidationError(fmt::format("{}:{}: expected {} fields, found {}", source_name, line_no,
                                        table.header.size(), fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw ValidationError(fmt::format("{}: empty CSV file", source_name));
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));
  return read_csv(in, path.string());
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

double parse_real(std::string_view field, std::string_view what) {
  field = trim(field);
  if (field == "nan" || field == "NaN" || field == "NA") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError(fmt::format("{}: '{}' is not a number", what, field));
  }
  return v;
}

long long parse_integer(std::string_view field, std::string_view what) {
  field = trim(field);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw ValidationError(fmt::format("{}: '{}' is not an integer", what, field));
  }
  return v;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(fmt::format("cannot write '{}'", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ValidationError(fmt::format("error while writing '{}'", path.string()));
}

}  // namespace ebprior::core
