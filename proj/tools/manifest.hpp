#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace qccilc::cli {

std::string sha256_hex(const std::string& data);

/// Run record written next to every output file as `<file>.manifest.json`.
/// Kept out of the outputs themselves so those stay byte-identical across
/// re-runs; only the manifest carries wall times.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  nlohmann::ordered_json& config() { return config_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_input(const std::filesystem::path& path, const std::string& contents);
  void add_output(const std::filesystem::path& path) { outputs_.push_back(path); }
  void add_note(const std::string& key, nlohmann::ordered_json value) { notes_[key] = std::move(value); }
  void phase(const std::string& name);

  nlohmann::ordered_json to_json() const;
  /// Writes the sidecar for every recorded output, plus `extra` if nonempty.
  void write(const std::filesystem::path& extra = {}) const;

 private:
  using Clock = std::chrono::steady_clock;
  std::string command_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json notes_ = nlohmann::ordered_json::object();
  std::vector<std::filesystem::path> outputs_;
  std::uint64_t seed_ = 0;
  Clock::time_point start_ = Clock::now();
  Clock::time_point last_ = start_;
  nlohmann::ordered_json phases_ = nlohmann::ordered_json::object();
};

}  // namespace qccilc::cli
