#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cliquesim/report.hpp"
#include "cliquesim/scenario.hpp"

namespace cliquesim {

/// Builds the nodes for `config`, runs for config.duration_ms and returns the
/// report. Propagates NonConvergence and ConfigError.
RunReport run_scenario(const ScenarioConfig& config);

struct SweepRow {
  std::uint64_t seed = 0;
  std::uint64_t height = 0;
  double malicious_share = 0.0;
  std::size_t malicious_txs = 0;
  std::string error;
};

struct SweepSummary {
  std::vector<SweepRow> rows;
  double mean_share = 0.0;
  double min_share = 0.0;
  double max_share = 0.0;
  std::size_t failures = 0;
};

/// Runs `config` once per seed in [first_seed, last_seed]. Runs are fully
/// isolated and may execute on `threads` workers; rows come back in seed order.
SweepSummary sweep(const ScenarioConfig& config, std::uint64_t first_seed, std::uint64_t last_seed,
                   unsigned threads = 0);

}  // namespace cliquesim
