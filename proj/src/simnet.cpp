#include "cliquesim/simnet.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace cliquesim {

void EventQueue::schedule(SimEvent event) {
  if (event.at_ms < now_)
    throw std::logic_error("event scheduled in the past: " + std::to_string(event.at_ms) + " < " +
                           std::to_string(now_));
  event.seq = next_seq_++;
  heap_.push(std::move(event));
}

SimEvent EventQueue::pop() {
  if (heap_.empty()) return SimEvent{now_, Lane::end, next_seq_, RunEnd{}};
  SimEvent ev = heap_.top();
  heap_.pop();
  now_ = ev.at_ms;
  return ev;
}

std::vector<SimEvent> broadcast(EventQueue& queue, std::size_t from_node, std::size_t n_nodes, const HeaderPtr& header,
                                const DelayModel& delay, Rng& rng) {
  std::vector<SimEvent> out;
  for (std::size_t peer = 0; peer < n_nodes; ++peer) {
    if (peer == from_node) continue;
    SimEvent ev{queue.now() + rng.uniform(delay.min_ms, delay.max_ms), Lane::delivery, 0, BlockArrival{peer, header}};
    queue.schedule(ev);
    out.push_back(std::move(ev));
  }
  return out;
}

Simulation::Simulation(ScenarioConfig config) : config_(std::move(config)), rng_(config_.seed) {
  config_.validate();
  delay_ = DelayModel{config_.delay_min_ms, config_.delay_max_ms, 0.0};

  for (std::size_t i = 0; i < config_.n_sealers; ++i) addresses_.push_back(sealer_address(config_.seed, i));
  const SealerSnapshot base = make_snapshot(addresses_);

  nodes_.resize(config_.n_sealers);
  sealer_stats_.resize(config_.n_sealers);
  for (std::size_t i = 0; i < config_.n_sealers; ++i) {
    NodeState& n = nodes_[i];
    n.index = i;
    n.policy = config_.policy_for(i);
    n.flags = config_.flags_for(i);
    n.head = n.store.genesis();
    n.canonical = {n.head};
    n.snapshot = base;
    sealer_stats_[i].addr = addresses_[i];
    sealer_stats_[i].kind = n.policy.kind;
  }
}

RunReport Simulation::run_until(std::int64_t t_end_ms) {
  if (started_) throw std::logic_error("Simulation::run_until may only be called once");
  if (t_end_ms < 0) throw std::invalid_argument("run_until: negative end time");
  started_ = true;
  seal_horizon_ms_ = t_end_ms;

  tx_batches_ = tx_stream(config_.tx_rate_per_s, t_end_ms);
  for (std::size_t b = 0; b < tx_batches_.size(); ++b)
    queue_.schedule({tx_batches_[b].at_ms, Lane::tx, 0, TxDelivery{b}});
  for (auto& n : nodes_) replan(n);

  while (const SimEvent* next = queue_.peek()) {
    if (next->at_ms > t_end_ms) break;
    dispatch(queue_.pop());
  }

  // Drain: let in-flight blocks land, but nothing new is sealed or sent.
  const std::int64_t drain_end = t_end_ms + 2 * delay_.max_ms;
  seal_horizon_ms_ = std::min(seal_horizon_ms_, t_end_ms);
  while (const SimEvent* next = queue_.peek()) {
    if (next->at_ms > drain_end) break;
    SimEvent ev = queue_.pop();
    if (ev.lane == Lane::delivery) dispatch(ev);
  }

  check_agreement();
  return build_report();
}

void Simulation::dispatch(const SimEvent& ev) {
  std::visit(
      [this](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BlockArrival>) on_block_arrival(p.node, p.header);
        else if constexpr (std::is_same_v<T, SealFire>) on_seal_fire(p);
        else if constexpr (std::is_same_v<T, TxDelivery>) on_tx_delivery(p);
      },
      ev.payload);
}

void Simulation::on_tx_delivery(const TxDelivery& d) {
  for (auto& n : nodes_) n.mempool.add(tx_batches_.at(d.batch).txs);
}

void Simulation::on_block_arrival(std::size_t node_index, const HeaderPtr& header) {
  // Blocks stamped in the future wait until their timestamp comes due.
  if (header->sim_time_ms > queue_.now()) {
    queue_.schedule({header->sim_time_ms, Lane::delivery, 0, BlockArrival{node_index, header}});
    return;
  }
  NodeState& node = nodes_.at(node_index);
  ++node.arrivals;
  import(node, header);
  update_head(node);
}

void Simulation::import(NodeState& node, const HeaderPtr& header) {
  std::vector<HeaderPtr> work{header};
  while (!work.empty()) {
    HeaderPtr h = std::move(work.back());
    work.pop_back();
    const BlockHash hash = hash_header(*h);
    if (node.store.contains(hash)) {
      ++node.duplicates;
      continue;
    }
    if (!node.store.contains(h->parent)) {
      node.orphans[h->parent].push_back(h);
      ++node.buffered;
      continue;
    }
    const Verdict verdict = verify_header(*h, snapshot_at(node.store, h->parent, addresses_), node.flags);
    if (!verdict.accepted()) {
      ++node.rejected;
      record_rejection(*h, hash, *verdict.reject);
      if (h->sealer_index == node.index) node.mempool.restore(h->tx_ids);
      continue;
    }
    node.store.extend(*h);
    ++node.accepted;
    if (auto it = node.orphans.find(hash); it != node.orphans.end()) {
      node.buffered -= it->second.size();
      for (auto& child : it->second) work.push_back(std::move(child));
      node.orphans.erase(it);
    }
  }
}

void Simulation::update_head(NodeState& node) {
  const BlockHash new_head = node.store.select_head();
  if (new_head == node.head) return;

  std::vector<BlockHeader> adopted;
  BlockHash cur = new_head;
  while (true) {
    const BlockHeader& h = node.store.header(cur);
    if (h.number < node.canonical.size() && node.canonical[h.number] == cur) break;
    adopted.push_back(h);
    cur = h.parent;
  }
  std::reverse(adopted.begin(), adopted.end());
  const std::uint64_t fork_number = node.store.header(cur).number;

  std::vector<BlockHeader> abandoned;
  for (std::size_t n = fork_number + 1; n < node.canonical.size(); ++n)
    abandoned.push_back(node.store.header(node.canonical[n]));
  node.mempool.on_canonical_update(abandoned, adopted);

  node.canonical.resize(fork_number + 1);
  for (const auto& h : adopted) node.canonical.push_back(hash_header(h));

  node.head = new_head;
  node.snapshot = snapshot_at(node.store, node.head, addresses_);
  replan(node);
}

void Simulation::replan(NodeState& node) {
  const BlockHeader& head = node.store.header(node.head);
  ProposalContext ctx{head.number, node.head, head.sim_time_ms, node.snapshot, queue_.now(), config_.block_interval_ms};
  auto plan = on_new_head(node.policy, node.proposer, ctx, node.index, rng_);
  if (!plan) return;
  ++node.plan_id;
  if (plan->eligible && plan->fire_at_ms <= seal_horizon_ms_)
    queue_.schedule({plan->fire_at_ms, Lane::seal, 0, SealFire{node.index, plan->number, node.plan_id}});
}

void Simulation::on_seal_fire(const SealFire& fire) {
  NodeState& node = nodes_.at(fire.node);
  if (fire.plan_id != node.plan_id || !node.proposer.pending) return;
  const ProposalPlan plan = *node.proposer.pending;
  node.proposer.pending.reset();

  BlockHeader header;
  header.number = plan.number;
  header.parent = plan.parent;
  header.sealer_index = node.index;
  header.sealer_addr = addresses_[node.index];
  header.difficulty = plan.difficulty;
  header.sim_time_ms = plan.block_time_ms;
  header.tx_ids = pack_block(node.mempool, config_.tx_cap);
  auto ptr = std::make_shared<const BlockHeader>(std::move(header));

  ++sealer_stats_[node.index].sealed_blocks;
  if (ptr->difficulty == kDiffInTurn && node.index != leader_index(ptr->number, nodes_.size()))
    wrong_turn_attempts_.emplace(hash_header(*ptr), node.index);

  broadcast(queue_, node.index, nodes_.size(), ptr, delay_, rng_);
  on_block_arrival(node.index, ptr);
}

void Simulation::record_rejection(const BlockHeader& header, const BlockHash& hash, RejectReason reason) {
  ++sealer_stats_.at(header.sealer_index).rejected_by_reason[static_cast<std::size_t>(reason)];
  if (reason == RejectReason::wrong_turn_difficulty) wrong_turn_rejected_.insert(hash);
}

void Simulation::check_agreement() const {
  std::map<std::string, const NodeState*> first_by_flags;
  for (const auto& n : nodes_) {
    if (!n.policy.is_honest()) continue;
    auto [it, inserted] = first_by_flags.emplace(to_string(n.flags), &n);
    if (!inserted && it->second->head != n.head)
      throw NonConvergence("honest nodes " + std::to_string(it->second->index) + " and " + std::to_string(n.index) +
                           " disagree on head (heights " +
                           std::to_string(it->second->store.header(it->second->head).number) + " vs " +
                           std::to_string(n.store.header(n.head).number) + ")");
  }
}

RunReport Simulation::build_report() const {
  RunReport report;
  report.config = config_;
  auto honest = std::find_if(nodes_.begin(), nodes_.end(), [](const NodeState& n) { return n.policy.is_honest(); });
  const NodeState& rep = honest != nodes_.end() ? *honest : nodes_.front();
  report.reporting_node = rep.index;

  report.per_sealer = sealer_stats_;
  for (std::size_t n = 1; n < rep.canonical.size(); ++n) {
    const BlockHeader& h = rep.store.header(rep.canonical[n]);
    report.block_log.push_back({h.number, h.sealer_index, h.sealer_addr, h.difficulty, h.sim_time_ms, h.tx_ids.size()});
    auto& s = report.per_sealer.at(h.sealer_index);
    ++s.canonical_blocks;
    s.canonical_txs += h.tx_ids.size();
    report.canonical_txs += h.tx_ids.size();
  }
  report.height = rep.canonical.size() - 1;

  for (const auto& [hash, sealer] : wrong_turn_attempts_) {
    auto& s = report.per_sealer.at(sealer);
    ++s.wrong_turn_attempts;
    if (wrong_turn_rejected_.contains(hash)) ++s.wrong_turn_attempts_rejected;
  }

  for (const auto& b : tx_batches_) report.generated_txs += b.txs.size();

  for (const auto& n : nodes_) {
    NodeStats s;
    s.index = n.index;
    s.honest = n.policy.is_honest();
    s.flags = n.flags;
    s.head = n.head;
    s.head_number = n.canonical.size() - 1;
    s.arrivals = n.arrivals;
    s.accepted = n.accepted;
    s.rejected = n.rejected;
    s.duplicates = n.duplicates;
    s.buffered = n.buffered;
    s.pending_txs = n.mempool.pending_size();
    s.canonical_txs = n.mempool.canonical_size();
    report.nodes.push_back(s);
  }
  return report;
}

}  // namespace cliquesim
