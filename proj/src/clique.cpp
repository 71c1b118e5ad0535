#include "cliquesim/clique.hpp"

#include <set>
#include <stdexcept>

namespace cliquesim {

SealerSnapshot make_snapshot(std::vector<std::string> sealers) {
  if (sealers.empty()) throw std::invalid_argument("sealer set must not be empty");
  std::set<std::string> seen(sealers.begin(), sealers.end());
  if (seen.size() != sealers.size()) throw std::invalid_argument("sealer addresses must be unique");
  return SealerSnapshot{std::move(sealers), {}};
}

std::string to_string(const VerifyFlags& flags) {
  if (flags == VerifyFlags::fixed()) return "fixed";
  if (flags == VerifyFlags::vulnerable()) return "vulnerable";
  std::string out = "custom(";
  out += flags.check_recently_signed ? '1' : '0';
  out += flags.check_difficulty_domain ? '1' : '0';
  out += flags.check_inturn_identity ? '1' : '0';
  return out + ")";
}

std::size_t leader_index(std::uint64_t next_number, std::size_t n_sealers) {
  if (n_sealers == 0) throw std::invalid_argument("leader_index: no sealers");
  return static_cast<std::size_t>(next_number % n_sealers);
}

std::uint64_t difficulty_for(std::size_t sealer_index, std::uint64_t next_number, std::size_t n_sealers) {
  if (sealer_index >= n_sealers) throw std::out_of_range("difficulty_for: sealer index out of range");
  return sealer_index == leader_index(next_number, n_sealers) ? kDiffInTurn : kDiffNoTurn;
}

std::int64_t wiggle_delay(std::size_t n_sealers, Rng& rng) {
  if (n_sealers == 0) throw std::invalid_argument("wiggle_delay: no sealers");
  const auto bound = static_cast<std::int64_t>(n_sealers / 2 + 1) * kWiggleStepMs;
  return rng.uniform(0, bound);
}

bool signed_recently(const SealerSnapshot& snapshot, std::size_t sealer_index, std::uint64_t next_number) {
  const std::uint64_t w = snapshot.window();
  // Open interval (next_number - W, next_number).
  const std::uint64_t lo = next_number >= w ? next_number - w + 1 : 0;
  for (auto it = snapshot.recents.lower_bound(lo); it != snapshot.recents.end() && it->first < next_number; ++it)
    if (it->second == sealer_index) return true;
  return false;
}

SealerSnapshot record_seal(SealerSnapshot snapshot, std::uint64_t number, std::size_t sealer_index) {
  snapshot.recents[number] = sealer_index;
  const std::uint64_t w = snapshot.window();
  if (number + 1 >= w) {
    const std::uint64_t keep_from = number + 1 - w;
    snapshot.recents.erase(snapshot.recents.begin(), snapshot.recents.lower_bound(keep_from));
  }
  // Entries above `number` (a replayed shorter branch) are stale as well.
  snapshot.recents.erase(snapshot.recents.upper_bound(number), snapshot.recents.end());
  return snapshot;
}

SealerSnapshot snapshot_at(const ChainStore& store, const BlockHash& tip, const std::vector<std::string>& sealers) {
  SealerSnapshot snap{sealers, {}};
  const std::uint64_t w = snap.window();
  std::vector<const BlockHeader*> trail;
  BlockHash cur = tip;
  while (trail.size() < w && cur != store.genesis()) {
    const auto& h = store.header(cur);
    trail.push_back(&h);
    cur = h.parent;
  }
  for (auto it = trail.rbegin(); it != trail.rend(); ++it)
    snap = record_seal(std::move(snap), (*it)->number, (*it)->sealer_index);
  return snap;
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::recently_signed: return "RecentlySigned";
    case RejectReason::invalid_difficulty: return "InvalidDifficulty";
    case RejectReason::wrong_turn_difficulty: return "WrongTurnDifficulty";
  }
  return "?";
}

Verdict verify_header(const BlockHeader& header, const SealerSnapshot& snapshot, const VerifyFlags& flags) {
  const std::size_t n = snapshot.size();
  if (header.sealer_index >= n) throw std::out_of_range("verify_header: sealer index out of range");

  if (flags.check_difficulty_domain && header.difficulty != kDiffInTurn && header.difficulty != kDiffNoTurn)
    return Verdict::rejected(RejectReason::invalid_difficulty);

  if (flags.check_inturn_identity) {
    const bool inturn = header.sealer_index == leader_index(header.number, n);
    if ((header.difficulty == kDiffInTurn && !inturn) || (header.difficulty == kDiffNoTurn && inturn))
      return Verdict::rejected(RejectReason::wrong_turn_difficulty);
  }

  if (flags.check_recently_signed && signed_recently(snapshot, header.sealer_index, header.number))
    return Verdict::rejected(RejectReason::recently_signed);

  return Verdict::accept();
}

}  // namespace cliquesim
