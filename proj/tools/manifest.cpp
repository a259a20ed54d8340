#include "manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#ifndef QCCILC_VERSION
#define QCCILC_VERSION "unknown"
#endif

namespace qccilc::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

RunManifest::RunManifest(std::string command) : command_(std::move(command)) {}

void RunManifest::add_input(const std::filesystem::path& path, const std::string& contents) {
  inputs_.push_back({{"path", path.string()}, {"sha256", sha256_hex(contents)}, {"bytes", contents.size()}});
}

void RunManifest::phase(const std::string& name) {
  const auto now = Clock::now();
  phases_[name] = std::chrono::duration<double>(now - last_).count();
  last_ = now;
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["tool_version"] = QCCILC_VERSION;
  j["seed"] = seed_;
  j["config"] = config_;
  j["inputs"] = inputs_;
  auto outs = nlohmann::ordered_json::array();
  for (const auto& p : outputs_) outs.push_back(p.string());
  j["outputs"] = outs;
  if (!notes_.empty()) j["notes"] = notes_;
  j["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start_).count();
  j["phases_s"] = phases_;
  return j;
}

void RunManifest::write(const std::filesystem::path& extra) const {
  const auto text = to_json().dump(2) + "\n";
  auto put = [&](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
  };
  for (const auto& p : outputs_) put(p.string() + ".manifest.json");
  if (!extra.empty()) put(extra);
}

}  // namespace qccilc::cli
