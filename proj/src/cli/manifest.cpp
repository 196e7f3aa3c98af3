#include "manifest.hpp"

#include <array>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "ebprior/core/csv.hpp"
#include "ebprior/error.hpp"

#ifndef EBPRIOR_VERSION
#define EBPRIOR_VERSION "unknown"
#endif

namespace ebprior::cli {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("sha256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot read input '{}'", path.string()));
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

RunManifest::RunManifest(std::string command, std::filesystem::path out_dir, std::uint64_t seed)
    : command_(std::move(command)), out_dir_(std::move(out_dir)), seed_(seed), start_(std::chrono::steady_clock::now()) {
  if (out_dir_.empty()) throw ValidationError("--out: an output directory is required");
  std::filesystem::create_directories(out_dir_);
  std::filesystem::remove(out_dir_ / "manifest.json");
}

void RunManifest::set_config(const std::optional<std::filesystem::path>& path) {
  if (path) {
    config_ = {{"path", path->string()}, {"sha256", sha256_file(*path)}};
  } else {
    config_ = nullptr;
  }
}

void RunManifest::add_input(const std::string& role, const std::filesystem::path& path) {
  inputs_.push_back({{"role", role}, {"path", path.string()}, {"sha256", sha256_file(path)}});
}

void RunManifest::set_parameter(const std::string& key, nlohmann::json value) { parameters_[key] = std::move(value); }

void RunManifest::set_metric(const std::string& key, nlohmann::json value) { metrics_[key] = std::move(value); }

void RunManifest::write_output(const std::string& name, std::string_view content) {
  core::write_text_file(out_dir_ / name, content);
  outputs_.push_back(name);
}

void RunManifest::finish() {
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  const nlohmann::json doc = {{"command", command_},   {"version", EBPRIOR_VERSION}, {"seed", seed_},
                              {"config", config_},     {"inputs", inputs_},          {"parameters", parameters_},
                              {"outputs", outputs_},   {"metrics", metrics_},        {"wall_clock_seconds", wall}};
  core::write_text_file(out_dir_ / "manifest.json", doc.dump(2) + "\n");
}

}  // namespace ebprior::cli
