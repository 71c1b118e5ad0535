// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../test_util.hpp"
#include "cliquesim/harness.hpp"
#include "cliquesim/simnet.hpp"

using namespace cliquesim;

namespace {

// Tolerances and thresholds.
constexpr std::uint64_t kHonestHeight = 360;
constexpr std::uint64_t kHeightTolerance = 2;
constexpr std::size_t kPerSealerMin = 62;
constexpr std::size_t kPerSealerMax = 82;
constexpr std::size_t kTxPerBlock = 50;
constexpr std::size_t kTxPerBlockTolerance = 5;
constexpr double kHonestWallSeconds = 5.0;
constexpr std::size_t kAttackMinBlocks = 300;
constexpr std::size_t kAttackMinTxs = 15'000;
constexpr std::uint64_t kSweepSeeds = 10;
constexpr double kFixedShareMin = 0.10;
constexpr double kFixedShareMax = 0.30;
constexpr std::size_t kAttackerIndex = 2;
constexpr std::size_t kRotationWindow = 5;
constexpr std::size_t kAttackRunLength = 9;
constexpr int kForkTrees = 200;
constexpr std::size_t kForkTreeMaxBlocks = 50;
constexpr int kRecentsCases = 10'000;
constexpr int kInvalidHeaders = 1'000;
constexpr std::uint64_t kAgreementRuns = 100;

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  if (!ok) ++failures;
}

template <typename F>
void guarded(const std::string& id, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

ScenarioConfig with_seed(const char* name, std::uint64_t seed) {
  ScenarioConfig c = preset(name);
  c.seed = seed;
  c.delay_min_ms = 5;
  c.delay_max_ms = 50;
  return c;
}

bool per_sealer_in_band(const RunReport& r, std::size_t skip, std::string& detail) {
  bool ok = true;
  std::ostringstream out;
  out << "per-sealer blocks [";
  for (std::size_t i = 0; i < r.per_sealer.size(); ++i) {
    const auto b = r.per_sealer[i].canonical_blocks;
    out << (i ? " " : "") << b;
    if (i != skip && (b < kPerSealerMin || b > kPerSealerMax)) ok = false;
  }
  out << "]";
  detail = out.str();
  return ok;
}

void criterion_honest() {
  guarded("C1 honest baseline", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const RunReport r = run_scenario(preset("honest"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const bool height_ok = r.height + kHeightTolerance >= kHonestHeight && r.height <= kHonestHeight + kHeightTolerance;
    report("C1.height", height_ok, "canonical blocks " + std::to_string(r.height) + " (want 360 +/- 2)");

    std::string detail;
    const bool band_ok = per_sealer_in_band(r, SIZE_MAX, detail);
    report("C1.per_sealer", band_ok, detail + " (want each in [62, 82])");

    // Steady state excludes the first and last block.
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::size_t i = 1; i + 1 < r.block_log.size(); ++i) {
      lo = std::min(lo, r.block_log[i].tx_count);
      hi = std::max(hi, r.block_log[i].tx_count);
    }
    const bool tx_ok = r.block_log.size() > 2 && lo >= kTxPerBlock - kTxPerBlockTolerance &&
                       hi <= kTxPerBlock + kTxPerBlockTolerance;
    report("C1.tx_per_block", tx_ok,
           "steady-state tx/block in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] (want 50 +/- 5)");

    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f s", secs);
    report("C1.runtime", secs < kHonestWallSeconds, std::string("wall clock ") + buf + " (want < 5 s)");
  });
}

void criterion_attack() {
  guarded("C2 frontrunning attack", [] {
    std::size_t min_blocks = SIZE_MAX, min_txs = SIZE_MAX;
    for (std::uint64_t seed = 1; seed <= kSweepSeeds; ++seed) {
      const RunReport r = run_scenario(with_seed("attack", seed));
      const auto& s = r.per_sealer.at(kAttackerIndex);
      min_blocks = std::min(min_blocks, s.canonical_blocks);
      min_txs = std::min(min_txs, s.canonical_txs);
    }
    report("C2.attacker_blocks", min_blocks >= kAttackMinBlocks,
           "min over 10 seeds: " + std::to_string(min_blocks) + " blocks (want >= 300)");
    report("C2.attacker_txs", min_txs >= kAttackMinTxs,
           "min over 10 seeds: " + std::to_string(min_txs) + " txs (want >= 15000)");
  });
}

void criterion_fixed() {
  guarded("C3 countermeasure", [] {
    double lo = 1.0, hi = 0.0;
    bool band_ok = true, rejections_ok = true;
    std::string band_detail;
    std::size_t attempts_total = 0, rejected_total = 0;
    for (std::uint64_t seed = 1; seed <= kSweepSeeds; ++seed) {
      const RunReport r = run_scenario(with_seed("fixed", seed));
      const double share = r.malicious_share();
      lo = std::min(lo, share);
      hi = std::max(hi, share);
      std::string d;
      if (!per_sealer_in_band(r, kAttackerIndex, d)) band_ok = false;
      if (seed == 1) band_detail = d;
      const auto& s = r.per_sealer.at(kAttackerIndex);
      attempts_total += s.wrong_turn_attempts;
      rejected_total += s.wrong_turn_attempts_rejected;
      if (s.wrong_turn_attempts == 0 || s.wrong_turn_attempts_rejected != s.wrong_turn_attempts ||
          s.rejected(RejectReason::wrong_turn_difficulty) < s.wrong_turn_attempts)
        rejections_ok = false;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "attacker share in [%.3f, %.3f] over 10 seeds (want within [0.10, 0.30])", lo, hi);
    report("C3.attacker_share", lo >= kFixedShareMin && hi <= kFixedShareMax, buf);
    report("C3.wrong_turn_rejections", rejections_ok,
           std::to_string(rejected_total) + " of " + std::to_string(attempts_total) +
               " out-of-turn attempts drew a WrongTurnDifficulty rejection (want all, >= 1)");
    report("C3.honest_band", band_ok, band_detail + " seed 1, attacker at index 2 exempt; all 10 seeds checked (want each honest in [62, 82])");
  });
}

void criterion_log_signatures() {
  guarded("C4 block-log signatures", [] {
    const RunReport honest = run_scenario(preset("honest"));
    bool rotation = honest.block_log.size() >= kRotationWindow;
    for (std::size_t i = 0; rotation && i + kRotationWindow <= honest.block_log.size(); ++i) {
      std::set<std::string> w;
      for (std::size_t k = i; k < i + kRotationWindow; ++k) w.insert(honest.block_log[k].sealer_addr);
      rotation = w.size() == kRotationWindow;
    }
    report("C4.honest_rotation", rotation, "every 5 consecutive rows carry 5 distinct addresses");

    const RunReport attack = run_scenario(preset("attack"));
    std::size_t best = 0, cur = 0;
    for (std::size_t i = 0; i < attack.block_log.size(); ++i) {
      const auto& row = attack.block_log[i];
      const bool cont = i > 0 && row.difficulty == 2 && attack.block_log[i - 1].difficulty == 2 &&
                        attack.block_log[i - 1].sealer_addr == row.sealer_addr;
      cur = cont ? cur + 1 : (row.difficulty == 2 ? 1 : 0);
      best = std::max(best, cur);
    }
    report("C4.attack_repeats", best >= kAttackRunLength,
           "longest run of one address at difficulty 2: " + std::to_string(best) + " rows (want >= 9)");
  });
}

void criterion_properties() {
  guarded("C5.fork_choice_oracle", [] {
    Rng rng(0xF0F0);
    int mismatches = 0;
    for (int t = 0; t < kForkTrees; ++t) {
      ChainStore store;
      const auto size = static_cast<std::size_t>(rng.uniform(1, kForkTreeMaxBlocks));
      const auto order = cliquesim::testing::grow_random_tree(store, rng, size);
      if (store.select_head() != cliquesim::testing::brute_force_head(store, order)) ++mismatches;
    }
    report("C5.fork_choice_oracle", mismatches == 0,
           std::to_string(mismatches) + " mismatches over 200 random trees of <= 50 blocks");
  });

  guarded("C5.recents_window", [] {
    Rng rng(0xBEEF);
    int mismatches = 0;
    for (int c = 0; c < kRecentsCases; ++c) {
      const auto n = static_cast<std::size_t>(rng.uniform(1, 21));
      std::vector<std::string> a;
      for (std::size_t i = 0; i < n; ++i) a.push_back("0x" + std::to_string(i));
      auto snap = make_snapshot(a);
      std::vector<std::pair<std::uint64_t, std::size_t>> seals;
      const auto len = static_cast<std::uint64_t>(rng.uniform(0, 40));
      for (std::uint64_t b = 1; b <= len; ++b) {
        const auto s = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
        snap = record_seal(std::move(snap), b, s);
        seals.push_back({b, s});
      }
      const std::uint64_t next = len + 1;
      const std::int64_t w = static_cast<std::int64_t>(n / 2 + 1);
      const auto who = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
      bool scan = false;
      for (const auto& [num, s] : seals) {
        const auto d = static_cast<std::int64_t>(next) - static_cast<std::int64_t>(num);
        if (s == who && d >= 1 && d < w) scan = true;
      }
      if (scan != signed_recently(snap, who, next)) ++mismatches;
    }
    report("C5.recents_window", mismatches == 0, std::to_string(mismatches) + " mismatches over 10000 cases");
  });

  guarded("C5.difficulty_domain", [] {
    Rng rng(0xD1FF);
    int accepted = 0;
    std::vector<std::string> a;
    for (int i = 0; i < 5; ++i) a.push_back("0x" + std::to_string(i));
    const auto snap = make_snapshot(a);
    for (int c = 0; c < kInvalidHeaders; ++c) {
      BlockHeader h;
      h.number = static_cast<std::uint64_t>(rng.uniform(1, 10'000));
      h.sealer_index = static_cast<std::size_t>(rng.uniform(0, 4));
      h.difficulty = c == 0 ? 9 : static_cast<std::uint64_t>(rng.uniform(0, 1000));
      if (h.difficulty == 1 || h.difficulty == 2) h.difficulty += 7;
      for (auto flags : {VerifyFlags::fixed(), VerifyFlags::vulnerable()})
        if (verify_header(h, snap, flags).reject != RejectReason::invalid_difficulty) ++accepted;
    }
    report("C5.difficulty_domain", accepted == 0,
           std::to_string(kInvalidHeaders * 2 - accepted) + " of 2000 verdicts rejected as InvalidDifficulty (1000 headers x 2 presets, diff=9 included)");
  });

  guarded("C5.determinism", [] {
    bool same = true;
    for (const char* name : {"honest", "attack", "fixed"}) {
      const auto a = run_scenario(with_seed(name, 42));
      const auto b = run_scenario(with_seed(name, 42));
      same = same && format_block_log(a, LogFormat::plain) == format_block_log(b, LogFormat::plain) &&
             format_block_log(a, LogFormat::csv) == format_block_log(b, LogFormat::csv);
    }
    report("C5.determinism", same, "equal seeds give byte-identical block logs for all three presets");
  });

  guarded("C5.agreement", [] {
    std::size_t agreed = 0, total = 0;
    std::string first_failure;
    for (const char* name : {"attack", "honest"}) {
      for (std::uint64_t seed = 1; seed <= kAgreementRuns; ++seed) {
        ++total;
        try {
          Simulation sim(with_seed(name, seed));
          sim.run();
          std::map<std::string, BlockHash> head_by_flags;
          bool ok = true;
          for (std::size_t i = 0; i < sim.node_count(); ++i) {
            const auto& n = sim.node(i);
            auto [it, fresh] = head_by_flags.emplace(to_string(n.flags), n.head);
            if (!fresh && it->second != n.head) ok = false;
          }
          if (ok) ++agreed;
          else if (first_failure.empty()) first_failure = std::string(name) + " seed " + std::to_string(seed);
        } catch (const NonConvergence& e) {
          if (first_failure.empty()) first_failure = e.what();
        }
      }
    }
    report("C5.agreement", agreed == total,
           std::to_string(agreed) + "/" + std::to_string(total) + " attack+honest runs end with one head per flag set" +
               (first_failure.empty() ? "" : " (first failure: " + first_failure + ")"));
  });
}

}  // namespace

int main() {
  criterion_honest();
  criterion_attack();
  criterion_fixed();
  criterion_log_signatures();
  criterion_properties();
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
