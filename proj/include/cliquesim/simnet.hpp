#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "cliquesim/chain.hpp"
#include "cliquesim/clique.hpp"
#include "cliquesim/report.hpp"
#include "cliquesim/rng.hpp"
#include "cliquesim/scenario.hpp"
#include "cliquesim/strategy.hpp"
#include "cliquesim/workload.hpp"

namespace cliquesim {

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using HeaderPtr = std::shared_ptr<const BlockHeader>;

struct BlockArrival {
  std::size_t node;
  HeaderPtr header;
};
struct SealFire {
  std::size_t node;
  std::uint64_t height;
  std::uint64_t plan_id;
};
/// A transaction batch, delivered to every node at once.
struct TxDelivery {
  std::size_t batch;
};
struct RunEnd {};

/// Same-instant ordering class. Blocks due at t are imported before
/// transactions land, and both before any seal firing at t.
enum class Lane : std::uint8_t { delivery = 0, tx = 1, seal = 2, end = 3 };

struct SimEvent {
  std::int64_t at_ms = 0;
  Lane lane = Lane::end;
  std::uint64_t seq = 0;
  std::variant<BlockArrival, SealFire, TxDelivery, RunEnd> payload = RunEnd{};
};

/// Min-queue on (at_ms, lane, seq). seq is assigned on schedule().
class EventQueue {
 public:
  /// Throws std::logic_error for an event earlier than now().
  void schedule(SimEvent event);
  /// Pops the next event and advances now(); RunEnd at now() when empty.
  SimEvent pop();
  const SimEvent* peek() const { return heap_.empty() ? nullptr : &heap_.top(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::int64_t now() const { return now_; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.at_ms != b.at_ms) return a.at_ms > b.at_ms;
      if (a.lane != b.lane) return a.lane > b.lane;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  std::int64_t now_ = 0;
};

struct DelayModel {
  std::int64_t min_ms = 5;
  std::int64_t max_ms = 50;
  double drop_rate = 0.0;

  /// 0 <= min <= max, and nothing is ever dropped.
  bool valid() const { return min_ms >= 0 && min_ms <= max_ms && drop_rate == 0.0; }
};

/// Schedules one arrival per peer at now + U[min, max]; the sender is not
/// included. Returns copies of the scheduled events.
std::vector<SimEvent> broadcast(EventQueue& queue, std::size_t from_node, std::size_t n_nodes, const HeaderPtr& header,
                                const DelayModel& delay, Rng& rng);

struct NodeState {
  std::size_t index = 0;
  SealerPolicy policy;
  VerifyFlags flags;
  ChainStore store;
  BlockHash head;
  /// canonical[n] is the hash of canonical block n.
  std::vector<BlockHash> canonical;
  SealerSnapshot snapshot;
  ProposerState proposer;
  std::uint64_t plan_id = 0;
  std::unordered_map<BlockHash, std::vector<HeaderPtr>, BlockHashHasher> orphans;
  Mempool mempool;

  std::size_t arrivals = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t duplicates = 0;
  std::size_t buffered = 0;
};

/// One isolated run of a scenario: nodes, queue and generator.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config);

  /// Processes events up to t_end, then block deliveries for a drain window
  /// of 2 * delay_max_ms. Throws NonConvergence if honest nodes sharing a
  /// flag set end on different heads.
  RunReport run_until(std::int64_t t_end_ms);
  RunReport run() { return run_until(config_.duration_ms); }

  const NodeState& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t node_count() const { return nodes_.size(); }
  const ScenarioConfig& config() const { return config_; }
  std::int64_t now() const { return queue_.now(); }

  /// Delivers a header to one node at the current time, as the network would.
  void on_block_arrival(std::size_t node, const HeaderPtr& header);

 private:
  void dispatch(const SimEvent& ev);
  void on_seal_fire(const SealFire& fire);
  void on_tx_delivery(const TxDelivery& d);
  void import(NodeState& node, const HeaderPtr& header);
  void update_head(NodeState& node);
  void replan(NodeState& node);
  void record_rejection(const BlockHeader& header, const BlockHash& hash, RejectReason reason);
  RunReport build_report() const;
  void check_agreement() const;

  ScenarioConfig config_;
  DelayModel delay_;
  std::vector<std::string> addresses_;
  std::vector<NodeState> nodes_;
  EventQueue queue_;
  Rng rng_;
  std::vector<TxBatch> tx_batches_;
  std::int64_t seal_horizon_ms_ = 0;
  bool started_ = false;

  std::vector<SealerStats> sealer_stats_;
  std::unordered_map<BlockHash, std::size_t, BlockHashHasher> wrong_turn_attempts_;
  std::unordered_set<BlockHash, BlockHashHasher> wrong_turn_rejected_;
};

}  // namespace cliquesim
