#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliquesim/chain.hpp"
#include "cliquesim/clique.hpp"
#include "cliquesim/scenario.hpp"

namespace cliquesim {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BlockRow {
  std::uint64_t number = 0;
  std::size_t sealer_index = 0;
  std::string sealer_addr;
  std::uint64_t difficulty = 0;
  std::int64_t sim_time_ms = 0;
  std::size_t tx_count = 0;

  friend bool operator==(const BlockRow&, const BlockRow&) = default;
};

struct SealerStats {
  std::string addr;
  PolicyKind kind = PolicyKind::honest;
  std::size_t canonical_blocks = 0;
  std::size_t canonical_txs = 0;
  /// Every block this sealer sealed, canonical or not.
  std::size_t sealed_blocks = 0;
  /// Sealed with difficulty 2 while not the leader for that height.
  std::size_t wrong_turn_attempts = 0;
  /// Of those, how many drew at least one WrongTurnDifficulty rejection.
  std::size_t wrong_turn_attempts_rejected = 0;
  /// Rejections of this sealer's blocks, summed over receiving nodes.
  std::array<std::size_t, kRejectReasonCount> rejected_by_reason{};

  std::size_t rejected(RejectReason r) const { return rejected_by_reason[static_cast<std::size_t>(r)]; }
};

struct NodeStats {
  std::size_t index = 0;
  bool honest = true;
  VerifyFlags flags;
  BlockHash head;
  std::uint64_t head_number = 0;
  std::size_t arrivals = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t duplicates = 0;
  /// Orphans still waiting for a parent at the end of the run.
  std::size_t buffered = 0;
  std::size_t pending_txs = 0;
  std::size_t canonical_txs = 0;
};

struct RunReport {
  ScenarioConfig config;
  std::size_t reporting_node = 0;
  /// Canonical blocks 1..height of the reporting node (genesis omitted).
  std::vector<BlockRow> block_log;
  std::vector<SealerStats> per_sealer;
  std::vector<NodeStats> nodes;
  std::uint64_t height = 0;
  std::size_t canonical_txs = 0;
  std::size_t generated_txs = 0;

  /// Fraction of canonical blocks sealed by malicious sealers.
  double malicious_share() const;
};

enum class LogFormat { plain, csv };

/// Plain rows are "<number> <addr> <difficulty>\n"; csv adds time and tx count.
std::string format_block_log(const RunReport& report, LogFormat format);
void export_block_log(const RunReport& report, const std::filesystem::path& path, LogFormat format = LogFormat::plain);

std::string render_chart_svg(const RunReport& report);
void emit_chart(const RunReport& report, const std::filesystem::path& path);

std::string format_summary(const RunReport& report);

}  // namespace cliquesim
