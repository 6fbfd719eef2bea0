#include "mads/engine.hpp"

#include <algorithm>
#include <sstream>

namespace mads {

std::vector<std::int64_t> scratch_fields(const Scratch& s) {
  std::vector<std::int64_t> out;
  if (const auto* d = std::get_if<DfsScratch>(&s)) {
    out = {static_cast<int>(d->mode), static_cast<int>(d->pool_state),
           d->next_rank, static_cast<int>(d->last_node_colour), d->pending_exit,
           static_cast<int>(d->pending_state), d->scan_idx, d->last_seen_count};
  } else if (const auto* m = std::get_if<MynScratch>(&s)) {
    out = {m->payload, m->visit_port};
  } else if (const auto* ms = std::get_if<MsScratch>(&s)) {
    out = {static_cast<int>(ms->dfs.mode), ms->dfs.next_rank,
           ms->dfs.pending_exit, ms->dfs.scan_idx, ms->dfs.last_seen_count,
           ms->disp_label, ms->visit_port, ms->scan3_idx, ms->home_exits};
  } else if (const auto* g = std::get_if<GreedyScratch>(&s)) {
    out = {g->best1.count, g->best1.owner_id, g->best2.count, g->best2.owner_id,
           g->visit_port, g->iter_seen};
  }
  return out;
}

nlohmann::ordered_json to_json(const TraceEvent& ev) {
  nlohmann::ordered_json j;
  j["round"] = ev.round;
  j["robot"] = ev.robot;
  j["action"] = ev.action;
  j["node"] = ev.node;
  if (ev.port) j["port"] = *ev.port;
  if (ev.detail) j["detail"] = *ev.detail;
  return j;
}

SimWorld::SimWorld(PortGraph g, const std::vector<std::pair<int, int>>& robots)
    : graph_(std::move(g)) {
  std::vector<std::pair<int, int>> sorted = robots;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i) {
    auto [id, node] = sorted[i];
    if (id <= 0) throw ParameterError("robot ids must be positive");
    if (i > 0 && sorted[i - 1].first == id) throw ParameterError("duplicate robot id");
    if (node < 0 || node >= graph_.node_count()) throw ParameterError("placement out of range");
    RobotState st;
    st.id = id;
    st.treelabel = id;
    robots_.push_back(st);
    at_node_.push_back(node);
  }
  entry_port_.assign(robots_.size(), std::nullopt);
  last_move_round_.assign(robots_.size(), -1);
}

int SimWorld::index_of_id(int id) const {
  auto it = std::lower_bound(robots_.begin(), robots_.end(), id,
                             [](const RobotState& r, int v) { return r.id < v; });
  if (it == robots_.end() || it->id != id) throw ParameterError("unknown robot id");
  return static_cast<int>(it - robots_.begin());
}

std::vector<int> SimWorld::robots_on(int node) const {
  std::vector<int> out;
  for (int i = 0; i < robot_count(); ++i)
    if (at_node_[i] == node) out.push_back(i);
  return out;
}

std::vector<const RobotState*> SimWorld::colocated_view(int robot_id) const {
  int idx = index_of_id(robot_id);
  std::vector<const RobotState*> out;
  for (int j : robots_on(at_node_[idx])) out.push_back(&robots_[j]);
  return out;
}

bool SimWorld::all_done() const {
  for (const auto& r : robots_)
    if (!r.done) return false;
  return true;
}

void SimWorld::step(Protocol& p) {
  const int n_robots = robot_count();
  const int this_round = round_ + 1;

  // Round-start snapshot; all decisions read it, all commits land after.
  const std::vector<RobotState> snapshot = robots_;

  // Occupancy by node, ascending robot id.
  std::vector<std::vector<int>> occupants(graph_.node_count());
  for (int i = 0; i < n_robots; ++i) occupants[at_node_[i]].push_back(i);

  std::vector<RobotState> next = robots_;
  std::vector<std::optional<int>> moves(n_robots);

  for (int i = 0; i < n_robots; ++i) {
    StepContext ctx;
    ctx.round = this_round;
    ctx.degree = graph_.degree(at_node_[i]);
    ctx.entry_port = entry_port_[i];
    ctx.last_move_round = last_move_round_[i];
    ctx.self = &snapshot[i];
    for (int j : occupants[at_node_[i]]) {
      if (j == i) continue;
      ctx.others.push_back({&snapshot[j], entry_port_[j], last_move_round_[j]});
      ++metrics_.colocated_reads;
    }
    Decision d = p.step_robot(ctx, next[i]);
    moves[i] = d.move_port;
  }

  if (record_meetings_) {
    for (int v = 0; v < graph_.node_count(); ++v)
      for (size_t a = 0; a < occupants[v].size(); ++a)
        for (size_t b = a + 1; b < occupants[v].size(); ++b)
          metrics_.meetings.emplace_back(this_round, robots_[occupants[v][a]].id,
                                         robots_[occupants[v][b]].id);
  }

  // Commit: state first, then simultaneous moves.
  for (int i = 0; i < n_robots; ++i) {
    const RobotState& before = robots_[i];
    const RobotState& after = next[i];
    int node = at_node_[i];
    if (!before.settled && after.settled) {
      metrics_.last_settle_round = this_round;
      trace_.push_back({this_round, after.id, "settled", node, std::nullopt, std::nullopt});
    }
    if (before.colour != after.colour)
      trace_.push_back({this_round, after.id, "coloured", node, std::nullopt,
                        std::string(to_string(after.colour))});
    if (!before.done && after.done)
      trace_.push_back({this_round, after.id, "terminated", node, std::nullopt, std::nullopt});
  }
  robots_ = std::move(next);
  for (int i = 0; i < n_robots; ++i) {
    if (!moves[i]) continue;
    int from = at_node_[i];
    int port = *moves[i];
    if (port < 1 || port > graph_.degree(from)) {
      std::ostringstream os;
      os << "robot " << robots_[i].id << " requested nonexistent port " << port
         << " (degree " << graph_.degree(from) << ") in round " << this_round;
      throw SimulationFault(os.str());
    }
    const PortEdge& e = graph_.out(from, port);
    at_node_[i] = e.to;
    entry_port_[i] = e.reverse_port;
    last_move_round_[i] = this_round;
    metrics_.last_move_round = this_round;
    auto key = std::minmax(from, e.to);
    ++metrics_.edge_traversals[{key.first, key.second}];
    if (record_moves_)
      trace_.push_back({this_round, robots_[i].id, "moved", e.to, port, std::nullopt});
  }
  round_ = this_round;
}

RunOutcome SimWorld::run_until(Protocol& p, const StopPolicy& stop) {
  if (stop.max_rounds < 1) throw ParameterError("max_rounds must be >= 1");
  RunOutcome out;
  while (true) {
    if (all_done()) {
      out.protocol_declared = true;
      break;
    }
    if (round_ >= stop.max_rounds) break;
    step(p);
  }
  out.rounds = round_;
  return out;
}

std::string SimWorld::trace_jsonl() const {
  std::ostringstream os;
  for (const auto& ev : trace_) os << to_json(ev).dump() << "\n";
  return os.str();
}

}  // namespace mads
