#include "cliquesim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "cliquesim/simnet.hpp"

namespace cliquesim {

RunReport run_scenario(const ScenarioConfig& config) {
  Simulation sim(config);
  return sim.run();
}

SweepSummary sweep(const ScenarioConfig& config, std::uint64_t first_seed, std::uint64_t last_seed, unsigned threads) {
  if (last_seed < first_seed) throw std::invalid_argument("sweep: empty seed range");
  const std::size_t count = static_cast<std::size_t>(last_seed - first_seed) + 1;

  SweepSummary out;
  out.rows.resize(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      ScenarioConfig c = config;
      c.seed = first_seed + i;
      SweepRow& row = out.rows[i];
      row.seed = c.seed;
      try {
        const RunReport r = run_scenario(c);
        row.height = r.height;
        row.malicious_share = r.malicious_share();
        for (const auto& s : r.per_sealer)
          if (s.kind == PolicyKind::malicious) row.malicious_txs += s.canonical_txs;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  bool any = false;
  double sum = 0.0;
  for (const auto& row : out.rows) {
    if (!row.error.empty()) {
      ++out.failures;
      continue;
    }
    out.min_share = any ? std::min(out.min_share, row.malicious_share) : row.malicious_share;
    out.max_share = any ? std::max(out.max_share, row.malicious_share) : row.malicious_share;
    sum += row.malicious_share;
    any = true;
  }
  const std::size_t ok = count - out.failures;
  out.mean_share = ok ? sum / static_cast<double>(ok) : 0.0;
  return out;
}

}  // namespace cliquesim
