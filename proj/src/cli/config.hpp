#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace axrel::cli {

// Raised for malformed or missing configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Typed view over a JSON config object that rejects unknown keys.
class Config {
 public:
  Config(nlohmann::json doc, std::filesystem::path base, std::set<std::string> allowed);

  static Config load(const std::filesystem::path& path, std::set<std::string> allowed);

  bool has(const std::string& key) const { return doc_.contains(key); }
  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  std::filesystem::path path(const std::string& key) const;  // resolved against the config dir
  std::uint64_t u64(const std::string& key) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  double real(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::uint64_t> u64s(const std::string& key) const;
  std::vector<std::string> strs(const std::string& key) const;
  std::vector<std::string> strs(const std::string& key, std::vector<std::string> fallback) const;

  const nlohmann::json& doc() const { return doc_; }
  // FNV-1a over the canonical (sorted-key) serialization.
  std::string hash() const;

 private:
  const nlohmann::json& at(const std::string& key) const;

  nlohmann::json doc_;
  std::filesystem::path base_;
};

}  // namespace axrel::cli
