#include "cliquesim/workload.hpp"

#include <stdexcept>

namespace cliquesim {

std::vector<TxBatch> tx_stream(std::uint32_t rate_per_s, std::int64_t t_end_ms) {
  if (rate_per_s == 0) throw std::invalid_argument("tx_stream: rate must be positive");
  std::vector<TxBatch> out;
  TxId next_id = 1;
  for (std::int64_t t = kTxBatchPeriodMs; t <= t_end_ms; t += kTxBatchPeriodMs) {
    TxBatch batch{t, {}};
    batch.txs.reserve(rate_per_s);
    for (std::uint32_t i = 0; i < rate_per_s; ++i) batch.txs.push_back({next_id++, t});
    out.push_back(std::move(batch));
  }
  return out;
}

void Mempool::add(const Tx& tx) {
  created_.emplace(tx.id, tx.created_ms);
  if (!canonical_.contains(tx.id)) pending_.insert({tx.created_ms, tx.id});
}

void Mempool::add(std::span<const Tx> txs) {
  for (const auto& tx : txs) add(tx);
}

std::vector<TxId> Mempool::pending_ids() const {
  std::vector<TxId> out;
  out.reserve(pending_.size());
  for (const auto& [t, id] : pending_) out.push_back(id);
  return out;
}

std::vector<TxId> Mempool::pack(std::optional<std::size_t> cap) {
  const std::size_t take = cap ? std::min(*cap, pending_.size()) : pending_.size();
  std::vector<TxId> out;
  out.reserve(take);
  auto it = pending_.begin();
  for (std::size_t i = 0; i < take; ++i) out.push_back((it++)->second);
  pending_.erase(pending_.begin(), it);
  return out;
}

void Mempool::restore(std::span<const TxId> ids) {
  for (auto id : ids) {
    auto c = created_.find(id);
    if (c != created_.end() && !canonical_.contains(id)) pending_.insert({c->second, id});
  }
}

void Mempool::on_canonical_update(std::span<const BlockHeader> abandoned, std::span<const BlockHeader> adopted) {
  for (const auto& b : abandoned)
    for (auto id : b.tx_ids) canonical_.erase(id);
  for (const auto& b : adopted)
    for (auto id : b.tx_ids) {
      canonical_.insert(id);
      if (auto c = created_.find(id); c != created_.end()) pending_.erase({c->second, id});
    }
  for (const auto& b : abandoned) restore(b.tx_ids);
}

std::vector<TxId> pack_block(Mempool& mempool, std::optional<std::size_t> cap) { return mempool.pack(cap); }

void on_canonical_update(Mempool& mempool, std::span<const BlockHeader> old_chain,
                         std::span<const BlockHeader> new_chain) {
  std::size_t common = 0;
  while (common < old_chain.size() && common < new_chain.size() && old_chain[common] == new_chain[common]) ++common;
  mempool.on_canonical_update(old_chain.subspan(common), new_chain.subspan(common));
}

}  // namespace cliquesim
