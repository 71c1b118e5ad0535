#include "cliquesim/chain.hpp"

#include <algorithm>
#include <cstdio>

namespace cliquesim {

namespace {

constexpr std::uint64_t kLaneSeeds[4] = {
    0x9e3779b97f4a7c15ULL, 0xc2b2ae3d27d4eb4fULL, 0x165667b19e3779f9ULL, 0xd6e8feb86659fd93ULL};

std::uint64_t avalanche(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

class Encoder {
 public:
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void str(const std::string& s) {
    u64(s.size());
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

}  // namespace

std::string BlockHash::hex() const {
  std::string out;
  out.reserve(64);
  char buf[17];
  for (auto w : words) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(w));
    out += buf;
  }
  return out;
}

BlockHeader make_genesis() {
  BlockHeader g;
  g.sealer_addr = "0x0000000000000000000000000000000000000000";
  return g;
}

BlockHash hash_header(const BlockHeader& header) {
  // Length-prefixed fields in fixed order; every variable-size field carries
  // its length so distinct headers never share an encoding.
  Encoder enc;
  enc.u64(header.number);
  for (auto w : header.parent.words) enc.u64(w);
  enc.u64(header.sealer_index);
  enc.str(header.sealer_addr);
  enc.u64(header.difficulty);
  enc.u64(static_cast<std::uint64_t>(header.sim_time_ms));
  enc.u64(header.tx_ids.size());
  for (auto id : header.tx_ids) enc.u64(id);

  const auto& bytes = enc.bytes();
  BlockHash out;
  for (int lane = 0; lane < 4; ++lane) {
    std::uint64_t h = kLaneSeeds[lane] ^ (bytes.size() * 0xff51afd7ed558ccdULL);
    for (std::size_t i = 0; i < bytes.size(); i += 8) {
      std::uint64_t word = 0;
      for (std::size_t j = 0; j < 8 && i + j < bytes.size(); ++j)
        word |= static_cast<std::uint64_t>(bytes[i + j]) << (8 * j);
      h = avalanche(h ^ (word + kLaneSeeds[(lane + 1) & 3]));
      h = (h << 27 | h >> 37) * 0x9fb21c651e98df25ULL;
    }
    out.words[lane] = avalanche(h);
  }
  // Reserve the all-zero value for the nil parent.
  if (out.is_nil()) out.words[0] = 1;
  return out;
}

ChainStore::ChainStore() : ChainStore(make_genesis()) {}

ChainStore::ChainStore(const BlockHeader& genesis) {
  genesis_ = hash_header(genesis);
  blocks_.emplace(genesis_, Entry{genesis, next_seq_++, genesis.difficulty});
  children_[genesis_];
  tips_.insert(genesis_);
}

ExtendOutcome ChainStore::extend(const BlockHeader& header) {
  const BlockHash h = hash_header(header);
  if (blocks_.contains(h)) return {ExtendStatus::duplicate_block, h};
  auto parent = blocks_.find(header.parent);
  if (parent == blocks_.end()) return {ExtendStatus::unknown_parent, h};
  if (header.number != parent->second.header.number + 1)
    throw std::invalid_argument("block number does not follow its parent");

  const std::uint64_t td = parent->second.total_difficulty + header.difficulty;
  blocks_.emplace(h, Entry{header, next_seq_++, td});
  children_[header.parent].push_back(h);
  children_[h];
  tips_.erase(header.parent);
  tips_.insert(h);
  return {ExtendStatus::inserted, h};
}

const ChainStore::Entry& ChainStore::entry(const BlockHash& h) const {
  auto it = blocks_.find(h);
  if (it == blocks_.end()) throw UnknownBlock(h);
  return it->second;
}

const std::vector<BlockHash>& ChainStore::children(const BlockHash& h) const {
  auto it = children_.find(h);
  if (it == children_.end()) throw UnknownBlock(h);
  return it->second;
}

BlockHash ChainStore::select_head() const {
  const Entry* best = nullptr;
  BlockHash best_hash;
  for (const auto& tip : tips_) {
    const Entry& e = blocks_.at(tip);
    if (best == nullptr || e.total_difficulty > best->total_difficulty ||
        (e.total_difficulty == best->total_difficulty && e.arrival_seq < best->arrival_seq)) {
      best = &e;
      best_hash = tip;
    }
  }
  return best_hash;
}

std::vector<BlockHash> ChainStore::canonical_hashes(const BlockHash& head) const {
  std::vector<BlockHash> out;
  out.reserve(entry(head).header.number + 1);
  BlockHash cur = head;
  while (true) {
    out.push_back(cur);
    if (cur == genesis_) break;
    cur = entry(cur).header.parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<BlockHeader> ChainStore::canonical_chain(const BlockHash& head) const {
  std::vector<BlockHeader> out;
  for (const auto& h : canonical_hashes(head)) out.push_back(entry(h).header);
  return out;
}

BlockHash ChainStore::ancestor(BlockHash h, std::uint64_t steps) const {
  while (steps-- > 0 && h != genesis_) h = entry(h).header.parent;
  return h;
}

}  // namespace cliquesim
