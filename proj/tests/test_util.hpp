#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cliquesim/chain.hpp"
#include "cliquesim/rng.hpp"

namespace cliquesim::testing {

inline BlockHeader child_of(const ChainStore& store, const BlockHash& parent, std::uint64_t difficulty,
                            std::size_t sealer = 0, std::int64_t time_ms = 0, std::vector<TxId> txs = {}) {
  BlockHeader h;
  h.number = store.header(parent).number + 1;
  h.parent = parent;
  h.sealer_index = sealer;
  h.sealer_addr = "0xsealer" + std::to_string(sealer);
  h.difficulty = difficulty;
  h.sim_time_ms = time_ms;
  h.tx_ids = std::move(txs);
  return h;
}

/// Random tree grown by attaching each new block to a uniformly chosen
/// existing block. Returns hashes in insertion order (genesis first).
inline std::vector<BlockHash> grow_random_tree(ChainStore& store, Rng& rng, std::size_t blocks) {
  std::vector<BlockHash> order{store.genesis()};
  for (std::size_t i = 1; i < blocks; ++i) {
    const BlockHash parent = order[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(order.size()) - 1))];
    // Distinct timestamps keep otherwise-identical siblings distinct.
    auto out = store.extend(child_of(store, parent, static_cast<std::uint64_t>(rng.uniform(1, 2)),
                                     static_cast<std::size_t>(rng.uniform(0, 4)), static_cast<std::int64_t>(i)));
    order.push_back(out.hash);
  }
  return order;
}

/// Exhaustive path enumeration: walk every root-to-leaf path summing the
/// header difficulties, keep the heaviest leaf, ties to the earliest inserted.
inline BlockHash brute_force_head(const ChainStore& store, const std::vector<BlockHash>& insertion_order) {
  struct Best {
    std::uint64_t weight = 0;
    std::size_t position = SIZE_MAX;
    BlockHash hash;
  } best;
  auto position_of = [&](const BlockHash& h) {
    for (std::size_t i = 0; i < insertion_order.size(); ++i)
      if (insertion_order[i] == h) return i;
    return SIZE_MAX;
  };
  std::vector<std::pair<BlockHash, std::uint64_t>> stack{{store.genesis(), 0}};
  while (!stack.empty()) {
    auto [h, weight_above] = stack.back();
    stack.pop_back();
    const std::uint64_t w = weight_above + store.header(h).difficulty;
    const auto& kids = store.children(h);
    if (kids.empty()) {
      const std::size_t pos = position_of(h);
      if (best.position == SIZE_MAX || w > best.weight || (w == best.weight && pos < best.position))
        best = {w, pos, h};
    }
    for (const auto& k : kids) stack.push_back({k, w});
  }
  return best.hash;
}

}  // namespace cliquesim::testing
