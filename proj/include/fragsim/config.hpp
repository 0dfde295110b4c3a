#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fragsim/measures.hpp"
#include "fragsim/simulator.hpp"

namespace fragsim {

/// Line-oriented `key = value` configuration. '#' starts a comment.
/// Unknown keys are rejected so typos surface as ConfigError.
class Config {
 public:
  Config() = default;

  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.contains(key); }
  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, std::string value);

  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;

  bool has_measure() const { return has("measure"); }
  /// The configured law, or `fallback` when no measure is given.
  DislocationLaw law(const DislocationLaw& fallback) const;

  /// `defaults` overlaid with every simulation key present here.
  SimConfig sim(SimConfig defaults) const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  static bool is_known_key(std::string_view key);

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace fragsim
