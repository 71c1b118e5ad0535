#pragma once

#include <cstdint>
#include <optional>

#include "cliquesim/clique.hpp"
#include "cliquesim/rng.hpp"

namespace cliquesim {

enum class PolicyKind { honest, malicious };

/// Sealer behaviour. Honest policies carry no overrides; the malicious
/// defaults falsify difficulty to 2, skip the delay and ignore recents.
struct SealerPolicy {
  PolicyKind kind = PolicyKind::honest;
  std::optional<std::uint64_t> forced_difficulty;
  bool zero_delay = false;
  bool bypass_recents = false;

  static SealerPolicy honest() { return {}; }
  static SealerPolicy malicious(std::uint64_t difficulty = kDiffInTurn) {
    return {PolicyKind::malicious, difficulty, true, true};
  }

  bool is_honest() const { return kind == PolicyKind::honest; }
  /// Honest => no overrides set.
  bool well_formed() const {
    return kind == PolicyKind::malicious || (!forced_difficulty && !zero_delay && !bypass_recents);
  }

  friend bool operator==(const SealerPolicy&, const SealerPolicy&) = default;
};

struct ProposalPlan {
  std::uint64_t number = 0;
  std::uint64_t difficulty = 0;
  std::int64_t fire_at_ms = 0;
  /// Header timestamp: parent time + interval, or now if that is already past.
  std::int64_t block_time_ms = 0;
  bool eligible = false;
  BlockHash parent;

  friend bool operator==(const ProposalPlan&, const ProposalPlan&) = default;
};

ProposalPlan plan_proposal(const SealerPolicy& policy, const ProposalContext& ctx, std::size_t self_index, Rng& rng);

/// What a node remembers between heads: the head it planned against and the
/// plan it is waiting to fire.
struct ProposerState {
  std::optional<BlockHash> planned_on;
  std::optional<ProposalPlan> pending;
};

/// Replans when the head changes. Returns the new plan, or nullopt when the
/// head is the one already planned against (duplicate delivery, or a local
/// block that failed verification); the pending plan, if any, stands.
std::optional<ProposalPlan> on_new_head(const SealerPolicy& policy, ProposerState& state, const ProposalContext& ctx,
                                        std::size_t self_index, Rng& rng);

}  // namespace cliquesim
