#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cliquesim {

/// 256-bit block identity over the canonical header encoding.
struct BlockHash {
  std::array<std::uint64_t, 4> words{};

  static BlockHash nil() { return {}; }
  bool is_nil() const { return words == std::array<std::uint64_t, 4>{}; }
  std::string hex() const;

  friend bool operator==(const BlockHash&, const BlockHash&) = default;
  friend auto operator<=>(const BlockHash&, const BlockHash&) = default;
};

struct BlockHashHasher {
  std::size_t operator()(const BlockHash& h) const noexcept {
    return static_cast<std::size_t>(h.words[0] ^ (h.words[2] << 1));
  }
};

using TxId = std::uint64_t;

struct BlockHeader {
  std::uint64_t number = 0;
  BlockHash parent;
  std::size_t sealer_index = 0;
  std::string sealer_addr;
  std::uint64_t difficulty = 0;
  std::int64_t sim_time_ms = 0;
  std::vector<TxId> tx_ids;

  friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

/// Genesis: number 0, difficulty 0, no transactions, nil parent.
BlockHeader make_genesis();

BlockHash hash_header(const BlockHeader& header);

class UnknownBlock : public std::out_of_range {
 public:
  explicit UnknownBlock(const BlockHash& h)
      : std::out_of_range("unknown block " + h.hex()) {}
};

enum class ExtendStatus { inserted, unknown_parent, duplicate_block };

struct ExtendOutcome {
  ExtendStatus status;
  BlockHash hash;

  bool ok() const { return status == ExtendStatus::inserted; }
};

/// Content-addressed block store with parent linkage and cumulative weight.
///
/// Parentless blocks are never stored: extend() refuses them with
/// unknown_parent and the caller is expected to buffer and retry.
class ChainStore {
 public:
  struct Entry {
    BlockHeader header;
    std::uint64_t arrival_seq;
    std::uint64_t total_difficulty;
  };

  ChainStore();
  explicit ChainStore(const BlockHeader& genesis);

  ExtendOutcome extend(const BlockHeader& header);

  bool contains(const BlockHash& h) const { return blocks_.contains(h); }
  const Entry& entry(const BlockHash& h) const;
  const BlockHeader& header(const BlockHash& h) const { return entry(h).header; }
  const BlockHash& genesis() const { return genesis_; }
  std::size_t size() const { return blocks_.size(); }

  const std::vector<BlockHash>& children(const BlockHash& h) const;
  const std::unordered_set<BlockHash, BlockHashHasher>& tips() const { return tips_; }

  std::uint64_t total_difficulty(const BlockHash& tip) const { return entry(tip).total_difficulty; }

  /// Tip with maximal total difficulty; ties go to the earliest arrival.
  BlockHash select_head() const;

  /// Genesis-to-head headers, ascending by number.
  std::vector<BlockHeader> canonical_chain(const BlockHash& head) const;

  /// Hashes genesis-to-head, index == block number.
  std::vector<BlockHash> canonical_hashes(const BlockHash& head) const;

  /// Walk `steps` parents up from `h` (stops at genesis).
  BlockHash ancestor(BlockHash h, std::uint64_t steps) const;

 private:
  std::unordered_map<BlockHash, Entry, BlockHashHasher> blocks_;
  std::unordered_map<BlockHash, std::vector<BlockHash>, BlockHashHasher> children_;
  std::unordered_set<BlockHash, BlockHashHasher> tips_;
  BlockHash genesis_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace cliquesim
