#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ebprior::cli {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Record of one command run. Outputs go into the run directory; the
/// manifest itself is written last, so a directory without manifest.json is
/// an interrupted run.
class RunManifest {
 public:
  RunManifest(std::string command, std::filesystem::path out_dir, std::uint64_t seed);

  void set_config(const std::optional<std::filesystem::path>& path);
  void add_input(const std::string& role, const std::filesystem::path& path);
  void set_parameter(const std::string& key, nlohmann::json value);
  void set_metric(const std::string& key, nlohmann::json value);
  void write_output(const std::string& name, std::string_view content);
  const std::filesystem::path& out_dir() const { return out_dir_; }

  void finish();

 private:
  std::string command_;
  std::filesystem::path out_dir_;
  std::uint64_t seed_;
  nlohmann::json config_;
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json parameters_ = nlohmann::json::object();
  nlohmann::json metrics_ = nlohmann::json::object();
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace ebprior::cli
