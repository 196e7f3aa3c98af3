#include "ebprior/config.hpp"

#include <fstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "ebprior/core/csv.hpp"
#include "ebprior/error.hpp"

namespace ebprior {

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open config '{}'", path.string()));
  return parse(in, path.string());
}

ConfigFile ConfigFile::parse(std::istream& in, const std::string& source_name) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError(fmt::format("{}: {}", source_name, e.message()));
  }
  ConfigFile cfg;
  cfg.source_ = source_name;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ValidationError(fmt::format("{}: key '{}' must live inside a [section]", source_name, section));
    }
    auto& dst = cfg.values_[section];
    for (const auto& [key, value] : body) dst[key] = value.get_value<std::string>();
  }
  return cfg;
}

bool ConfigFile::has_section(const std::string& section) const { return values_.count(section) != 0; }

std::optional<std::string> ConfigFile::take(const std::string& section, const std::string& key) {
  const auto s = values_.find(section);
  if (s == values_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  consumed_.emplace(section, key);
  return k->second;
}

std::optional<double> ConfigFile::take_real(const std::string& section, const std::string& key) {
  auto v = take(section, key);
  if (!v) return std::nullopt;
  return core::parse_real(*v, fmt::format("{} [{}] {}", source_, section, key));
}

std::optional<std::uint64_t> ConfigFile::take_count(const std::string& section, const std::string& key) {
  auto v = take(section, key);
  if (!v) return std::nullopt;
  const auto n = core::parse_integer(*v, fmt::format("{} [{}] {}", source_, section, key));
  if (n < 0) throw ValidationError(fmt::format("{} [{}] {}: must be nonnegative", source_, section, key));
  return static_cast<std::uint64_t>(n);
}

std::optional<bool> ConfigFile::take_flag(const std::string& section, const std::string& key) {
  auto v = take(section, key);
  if (!v) return std::nullopt;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ValidationError(fmt::format("{} [{}] {}: '{}' is not a boolean", source_, section, key, *v));
}

void ConfigFile::finish() const {
  for (const auto& entry : values_) finish_section(entry.first);
}

void ConfigFile::finish_section(const std::string& section) const {
  const auto s = values_.find(section);
  if (s == values_.end()) return;
  for (const auto& [key, value] : s->second) {
    if (!consumed_.count({section, key})) {
      throw ValidationError(fmt::format("{}: unknown key '{}' in section [{}]", source_, key, section));
    }
  }
}

}  // namespace ebprior
