#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <unordered_set>
#include <vector>

#include "cliquesim/chain.hpp"

namespace cliquesim {

struct Tx {
  TxId id = 0;
  std::int64_t created_ms = 0;
};

struct TxBatch {
  std::int64_t at_ms = 0;
  std::vector<Tx> txs;
};

constexpr std::int64_t kTxBatchPeriodMs = 1000;

/// One batch of `rate_per_s` transactions per second, at 1 s, 2 s, ... up to
/// and including t_end. Ids are 1-based and monotone.
std::vector<TxBatch> tx_stream(std::uint32_t rate_per_s, std::int64_t t_end_ms);

/// Per-node pool of transactions not yet in the node's canonical chain.
class Mempool {
 public:
  void add(const Tx& tx);
  void add(std::span<const Tx> txs);

  std::size_t pending_size() const { return pending_.size(); }
  bool is_pending(TxId id) const { return created_.contains(id) && pending_.contains({created_.at(id), id}); }
  bool is_canonical(TxId id) const { return canonical_.contains(id); }
  std::size_t canonical_size() const { return canonical_.size(); }
  std::vector<TxId> pending_ids() const;

  /// FIFO selection (created time, then id), truncated to `cap`; the
  /// selected transactions leave the pending set.
  std::vector<TxId> pack(std::optional<std::size_t> cap);

  /// Return transactions from a block that will not land (e.g. rejected).
  void restore(std::span<const TxId> ids);

  /// Apply a canonical-chain switch given the blocks dropped from and added
  /// to the chain past the fork point.
  void on_canonical_update(std::span<const BlockHeader> abandoned, std::span<const BlockHeader> adopted);

 private:
  std::set<std::pair<std::int64_t, TxId>> pending_;
  std::map<TxId, std::int64_t> created_;
  std::unordered_set<TxId> canonical_;
};

std::vector<TxId> pack_block(Mempool& mempool, std::optional<std::size_t> cap = std::nullopt);

/// Full-chain form: both chains start at the same genesis; the shared prefix
/// is skipped.
void on_canonical_update(Mempool& mempool, std::span<const BlockHeader> old_chain,
                         std::span<const BlockHeader> new_chain);

}  // namespace cliquesim
