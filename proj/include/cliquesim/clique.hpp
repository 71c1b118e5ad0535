#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cliquesim/chain.hpp"
#include "cliquesim/rng.hpp"

namespace cliquesim {

/// Ordered sealer set plus the recently-signed window.
///
/// `recents` maps block number to the index of the sealer that signed it and
/// never holds more than window() entries.
struct SealerSnapshot {
  std::vector<std::string> sealers;
  std::map<std::uint64_t, std::size_t> recents;

  std::size_t size() const { return sealers.size(); }
  std::uint64_t window() const { return sealers.size() / 2 + 1; }

  friend bool operator==(const SealerSnapshot&, const SealerSnapshot&) = default;
};

/// Throws std::invalid_argument on an empty set or duplicate addresses.
SealerSnapshot make_snapshot(std::vector<std::string> sealers);

struct VerifyFlags {
  bool check_recently_signed = true;
  bool check_difficulty_domain = true;
  bool check_inturn_identity = true;

  static constexpr VerifyFlags fixed() { return {true, true, true}; }
  static constexpr VerifyFlags vulnerable() { return {false, true, false}; }

  friend bool operator==(const VerifyFlags&, const VerifyFlags&) = default;
};

std::string to_string(const VerifyFlags& flags);

struct ProposalContext {
  std::uint64_t parent_number = 0;
  BlockHash parent_hash;
  std::int64_t parent_time_ms = 0;
  SealerSnapshot snapshot;
  std::int64_t now_ms = 0;
  std::int64_t block_interval_ms = 5000;
};

constexpr std::uint64_t kDiffInTurn = 2;
constexpr std::uint64_t kDiffNoTurn = 1;

std::size_t leader_index(std::uint64_t next_number, std::size_t n_sealers);

std::uint64_t difficulty_for(std::size_t sealer_index, std::uint64_t next_number, std::size_t n_sealers);

/// Extra delay for out-of-turn sealing, uniform over [0, (N/2 + 1) * 500] ms.
std::int64_t wiggle_delay(std::size_t n_sealers, Rng& rng);

constexpr std::int64_t kWiggleStepMs = 500;

bool signed_recently(const SealerSnapshot& snapshot, std::size_t sealer_index, std::uint64_t next_number);

SealerSnapshot record_seal(SealerSnapshot snapshot, std::uint64_t number, std::size_t sealer_index);

/// Snapshot as seen by a block extending `tip`: the last window() blocks of
/// the chain ending at `tip` (genesis excluded).
SealerSnapshot snapshot_at(const ChainStore& store, const BlockHash& tip, const std::vector<std::string>& sealers);

enum class RejectReason { recently_signed, invalid_difficulty, wrong_turn_difficulty };

constexpr std::size_t kRejectReasonCount = 3;

std::string_view to_string(RejectReason reason);

struct Verdict {
  std::optional<RejectReason> reject;

  bool accepted() const { return !reject.has_value(); }
  static Verdict accept() { return {}; }
  static Verdict rejected(RejectReason r) { return {r}; }
};

/// Runs the enabled checks in order: difficulty domain, in-turn identity,
/// recently signed. The first failing check names the rejection.
Verdict verify_header(const BlockHeader& header, const SealerSnapshot& snapshot, const VerifyFlags& flags);

}  // namespace cliquesim
