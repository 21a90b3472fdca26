#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace axrel::cli {

using nlohmann::json;

Config::Config(json doc, std::filesystem::path base, std::set<std::string> allowed)
    : doc_(std::move(doc)), base_(std::move(base)) {
  if (!doc_.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc_.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
}

Config Config::load(const std::filesystem::path& path, std::set<std::string> allowed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return Config(std::move(doc), path.parent_path(), std::move(allowed));
}

const json& Config::at(const std::string& key) const {
  if (!doc_.contains(key)) throw ConfigError("missing config key '" + key + "'");
  return doc_.at(key);
}

std::string Config::str(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

std::filesystem::path Config::path(const std::string& key) const {
  std::filesystem::path p = str(key);
  return p.is_absolute() ? p : base_ / p;
}

std::uint64_t Config::u64(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_number_unsigned()) throw ConfigError("config key '" + key + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::uint64_t Config::u64(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? u64(key) : fallback;
}

double Config::real(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

double Config::real(const std::string& key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
  return v.get<bool>();
}

std::vector<double> Config::reals(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError("config key '" + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::uint64_t> Config::u64s(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array of integers");
  std::vector<std::uint64_t> out;
  for (const auto& x : v) {
    if (!x.is_number_unsigned()) throw ConfigError("config key '" + key + "' must be an array of integers");
    out.push_back(x.get<std::uint64_t>());
  }
  return out;
}

std::vector<std::string> Config::strs(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw ConfigError("config key '" + key + "' must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::vector<std::string> Config::strs(const std::string& key, std::vector<std::string> fallback) const {
  return has(key) ? strs(key) : std::move(fallback);
}

std::string Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : doc_.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace axrel::cli
