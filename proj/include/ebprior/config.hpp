#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace ebprior {

/// Sectioned key-value text (INI style). Every key must be consumed by some
/// reader; finish() reports whatever is left as an unknown key.
class ConfigFile {
 public:
  ConfigFile() = default;
  static ConfigFile load(const std::filesystem::path& path);
  static ConfigFile parse(std::istream& in, const std::string& source_name);

  bool has_section(const std::string& section) const;
  std::optional<std::string> take(const std::string& section, const std::string& key);
  std::optional<double> take_real(const std::string& section, const std::string& key);
  std::optional<std::uint64_t> take_count(const std::string& section, const std::string& key);
  std::optional<bool> take_flag(const std::string& section, const std::string& key);

  /// Throws ValidationError naming the first unconsumed key.
  void finish() const;
  void finish_section(const std::string& section) const;

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, std::string>> values_;
  std::set<std::pair<std::string, std::string>> consumed_;
};

}  // namespace ebprior
