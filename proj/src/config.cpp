#include "fragsim/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "fragsim/error.hpp"
#include "fragsim/text.hpp"

namespace fragsim {

namespace {

constexpr std::array<std::string_view, 21> kKnownKeys = {
    // measure grammar
    "measure", "atoms", "a", "p", "q",
    // simulation
    "alpha", "c", "eps", "t_end", "obs_times", "replicas", "seed", "max_fragments", "mass_floor",
    "initial_mass",
    // suite parameters
    "partition_n", "semigroup_split", "eps_rel", "t_ratio", "kmax"};

}  // namespace

bool Config::is_known_key(std::string_view key) {
  return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end();
}

Config Config::parse(std::string_view text) {
  Config cfg;
  std::size_t line_no = 0;
  for (auto line : text::split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(text::trim(line.substr(0, eq)));
    if (!is_known_key(key)) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    cfg.entries_[key] = std::string(text::trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> Config::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Config::set(const std::string& key, std::string value) {
  if (!is_known_key(key)) throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
  entries_[key] = std::move(value);
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? text::parse_double(*v, key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto v = get(key);
  return v ? text::parse_u64(*v, key) : fallback;
}

std::vector<double> Config::get_list(const std::string& key, std::vector<double> fallback) const {
  const auto v = get(key);
  return v ? text::parse_double_list(*v, key) : fallback;
}

DislocationLaw Config::law(const DislocationLaw& fallback) const {
  return has_measure() ? law_from_keys(entries_) : fallback;
}

SimConfig Config::sim(SimConfig defaults) const {
  defaults.law = law(defaults.law);
  defaults.alpha = get_double("alpha", defaults.alpha);
  defaults.c = get_double("c", defaults.c);
  defaults.eps = get_double("eps", defaults.eps);
  defaults.t_end = get_double("t_end", defaults.t_end);
  if (has("obs_times")) {
    defaults.obs_times = get_list("obs_times", {});
  } else if (has("t_end")) {
    defaults.obs_times = {defaults.t_end};
  }
  defaults.max_fragments = get_u64("max_fragments", defaults.max_fragments);
  defaults.mass_floor = get_double("mass_floor", defaults.mass_floor);
  defaults.initial_mass = get_double("initial_mass", defaults.initial_mass);
  defaults.seed = get_u64("seed", defaults.seed);
  return defaults;
}

}  // namespace fragsim
