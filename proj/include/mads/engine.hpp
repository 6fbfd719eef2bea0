#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mads/graph.hpp"
#include "mads/scratch.hpp"
#include "mads/types.hpp"

namespace mads {

/// The full public variable set of one robot. Co-located robots can read all
/// of it during the Communicate part of a round; nothing else is visible.
struct RobotState {
  int id = 0;
  std::optional<int> parent;  // port of the settle node leading to the parent
  std::optional<int> child;   // last exit port recorded at this node
  MoveState state = MoveState::Forward;
  bool settled = false;
  Colour colour = Colour::White;
  int treelabel = 0;
  std::optional<int> rank;
  std::optional<SpanRecord> span;
  bool done = false;  // robot locally believes the protocol finished for it
  Scratch scratch;
};

struct TraceEvent {
  int round = 0;
  int robot = 0;
  std::string action;          // moved | settled | coloured | message | terminated
  int node = 0;                // simulator-level, for rendering only
  std::optional<int> port;     // for moved
  std::optional<std::string> detail;  // colour name / message summary
};

nlohmann::ordered_json to_json(const TraceEvent& ev);

/// What one robot sees during its step: strictly local information. There is
/// deliberately no accessor for remote robots or node indices.
struct Sighting {
  const RobotState* st = nullptr;
  std::optional<int> entry_port;  // port it arrived through (engine metadata)
  int last_move_round = -1;
};

struct StepContext {
  int round = 0;
  int degree = 0;
  std::optional<int> entry_port;  // own arrival port at the current node
  int last_move_round = -1;
  const RobotState* self = nullptr;       // own snapshot (pre-round)
  std::vector<Sighting> others;           // co-located, sorted by id, no self
};

struct Decision {
  std::optional<int> move_port;
};

class SimWorld;

/// A protocol is a pure per-robot rule: given the local view, mutate the
/// robot's next state and optionally move through one port. Protocol objects
/// hold configuration only; all mutable state lives in RobotState.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual std::string name() const = 0;
  /// Called once before round 1; initialises robot fields and validates the
  /// placement precondition.
  virtual void on_attach(SimWorld& world) = 0;
  virtual Decision step_robot(const StepContext& ctx, RobotState& next) = 0;
};

struct StopPolicy {
  long max_rounds = 1'000'000;  // budget; quiescence always stops earlier
};

struct EngineMetrics {
  long colocated_reads = 0;
  long remote_reads = 0;  // no API path can increment this; asserted == 0
  int last_settle_round = 0;
  int last_move_round = 0;
  std::map<std::pair<int, int>, int> edge_traversals;  // canonical (u,v)
  std::vector<std::tuple<int, int, int>> meetings;     // (round, id_a, id_b)
};

struct RunOutcome {
  long rounds = 0;
  bool protocol_declared = false;  // else budget-forced
};

/// Global simulation state: graph, robots, placements, round counter, trace.
/// A single run is strictly single-threaded and deterministic.
class SimWorld {
 public:
  /// robots: list of (id, node). Ids must be distinct positive integers.
  SimWorld(PortGraph g, const std::vector<std::pair<int, int>>& robots);

  void attach(Protocol& p) { p.on_attach(*this); }

  /// One Communicate-Compute-Move cycle: every robot computes on the
  /// round-start snapshot of co-located states, then all moves commit.
  void step(Protocol& p);

  RunOutcome run_until(Protocol& p, const StopPolicy& stop);

  bool all_done() const;

  int round() const { return round_; }
  int robot_count() const { return static_cast<int>(robots_.size()); }
  const PortGraph& graph() const { return graph_; }

  const RobotState& robot(int idx) const { return robots_[idx]; }
  RobotState& robot_mutable(int idx) { return robots_[idx]; }
  int node_of(int idx) const { return at_node_[idx]; }
  void place(int idx, int node) { at_node_[idx] = node; }
  int index_of_id(int id) const;

  /// States of all robots sharing a node with the given robot, sorted by id,
  /// including the robot itself.
  std::vector<const RobotState*> colocated_view(int robot_id) const;

  /// Robots currently on a node (indices, ascending id order).
  std::vector<int> robots_on(int node) const;

  const std::vector<TraceEvent>& trace() const { return trace_; }
  const EngineMetrics& metrics() const { return metrics_; }

  void set_record_moves(bool b) { record_moves_ = b; }
  void set_record_meetings(bool b) { record_meetings_ = b; }

  /// Serialises the whole trace as JSON Lines, one event per line.
  std::string trace_jsonl() const;

 private:
  PortGraph graph_;
  std::vector<RobotState> robots_;   // sorted by id
  std::vector<int> at_node_;
  std::vector<std::optional<int>> entry_port_;
  std::vector<int> last_move_round_;
  int round_ = 0;
  std::vector<TraceEvent> trace_;
  EngineMetrics metrics_;
  bool record_moves_ = true;
  bool record_meetings_ = false;
};

/// Protocol that does nothing; robots idle forever (never done).
class IdleProtocol : public Protocol {
 public:
  std::string name() const override { return "idle"; }
  void on_attach(SimWorld&) override {}
  Decision step_robot(const StepContext&, RobotState&) override { return {}; }
};

}  // namespace mads
