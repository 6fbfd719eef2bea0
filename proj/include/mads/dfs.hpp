#pragma once

#include <optional>
#include <vector>

#include "mads/engine.hpp"

namespace mads {

enum class DfsColouring { None, Rooted, SameLabel };

namespace dfs_core {

// The DFS update rule as a reusable per-robot step, so the multi-source
// protocol can host it for its dispersion phase. Scratch access goes through
// the accessors because the hosting protocol may embed DfsScratch in a larger
// scratch struct.
struct Config {
  DfsColouring colouring = DfsColouring::None;
  bool multi_cluster = false;
  const DfsScratch* (*scratch_of)(const RobotState&) = nullptr;
  DfsScratch* (*scratch_mut)(RobotState&) = nullptr;
};

std::optional<int> step(const Config& cfg, const StepContext& ctx,
                        RobotState& next);

// 1-based cyclic port successor; port 0 is the pre-start sentinel.
inline int cyc_next(int port, int degree) { return port % degree + 1; }

}  // namespace dfs_core

/// DFS Traversal Protocol: settles robots one per node in increasing-ID
/// order. With colouring enabled it doubles as the rooted / arbitrary
/// dominating-set construction.
class DfsProtocol : public Protocol {
 public:
  DfsProtocol(DfsColouring colouring, bool multi_cluster);

  std::string name() const override;
  void on_attach(SimWorld& world) override;
  Decision step_robot(const StepContext& ctx, RobotState& next) override;

 private:
  dfs_core::Config cfg_;
};

struct DfsStatus {
  int settled_count = 0;
  int head_node = -1;  // node of the highest-rank settled robot
  bool complete = false;
};

struct DispersionResult {
  std::vector<int> placements;  // robot index (by ascending id) -> node
  DfsStatus status;
  RunOutcome outcome;
};

/// Runs the DFS Traversal Protocol with k robots (ids 1..k) docked at
/// start_node. Requires k <= n.
DispersionResult run_dfs_dispersion(const PortGraph& g, int k, int start_node);

}  // namespace mads
