#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fragsim/config.hpp"

namespace fragsim {

struct CheckRecord {
  std::string name;
  double statistic = 0.0;
  std::string relation;  // statistic <relation> threshold must hold
  double threshold = 0.0;
  bool pass = false;
  std::size_t sample_size = 0;
  double wall_seconds = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::string claim;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;  // effective parameters
  std::vector<CheckRecord> checks;
  std::vector<std::string> notes;
  bool pass = false;

  /// Deterministic JSON. Wall times are only written when `timings` is set,
  /// which keeps the default output byte-stable across runs.
  std::string to_json(bool timings = false) const;
  /// One line per check, for terminals.
  std::string summary() const;
};

struct RunOptions {
  unsigned threads = 0;  // 0: FRAGSIM_THREADS or hardware concurrency
};

/// Suite identifiers accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs a named verification suite. Defaults reproduce the acceptance
/// configuration; any key in `config` overrides them.
/// Throws UnknownSuite or ConfigError.
SuiteReport run_suite(std::string_view name, const Config& config, const RunOptions& options = {});

}  // namespace fragsim
