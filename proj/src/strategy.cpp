#include "cliquesim/strategy.hpp"

#include <algorithm>

namespace cliquesim {

ProposalPlan plan_proposal(const SealerPolicy& policy, const ProposalContext& ctx, std::size_t self_index, Rng& rng) {
  const std::size_t n = ctx.snapshot.size();
  const std::uint64_t next = ctx.parent_number + 1;
  const bool inturn = self_index == leader_index(next, n);

  ProposalPlan plan;
  plan.number = next;
  plan.parent = ctx.parent_hash;
  plan.block_time_ms = std::max(ctx.parent_time_ms + ctx.block_interval_ms, ctx.now_ms);

  const bool honest_eligible = !signed_recently(ctx.snapshot, self_index, next);

  if (policy.is_honest()) {
    plan.eligible = honest_eligible;
    plan.difficulty = difficulty_for(self_index, next, n);
    plan.fire_at_ms = plan.block_time_ms;
    if (!inturn) plan.fire_at_ms += wiggle_delay(n, rng);
    return plan;
  }

  plan.eligible = policy.bypass_recents || honest_eligible;
  plan.difficulty = policy.forced_difficulty.value_or(difficulty_for(self_index, next, n));
  if (policy.zero_delay) {
    plan.fire_at_ms = ctx.now_ms;
  } else {
    plan.fire_at_ms = plan.block_time_ms;
    if (!inturn) plan.fire_at_ms += wiggle_delay(n, rng);
  }
  return plan;
}

std::optional<ProposalPlan> on_new_head(const SealerPolicy& policy, ProposerState& state, const ProposalContext& ctx,
                                        std::size_t self_index, Rng& rng) {
  if (state.planned_on == ctx.parent_hash) return std::nullopt;
  state.planned_on = ctx.parent_hash;
  state.pending = plan_proposal(policy, ctx, self_index, rng);
  return state.pending;
}

}  // namespace cliquesim
