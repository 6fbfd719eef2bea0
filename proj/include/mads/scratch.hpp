#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "mads/types.hpp"

namespace mads {

enum class MoveState { Forward, Backtrack };

inline const char* to_string(MoveState s) {
  return s == MoveState::Forward ? "forward" : "backtrack";
}

// ---------------------------------------------------------------------------
// Per-protocol working state. One robot carries exactly one of these; all of
// it is public (readable by co-located robots), and every field is a small
// integer so the O(log n) memory claim can be checked numerically.
// ---------------------------------------------------------------------------

enum class DfsMode : int {
  Pool,        // member of a travelling unsettled group
  WaitColour,  // group parked while the settler decides its colour
  Scanning,    // settled robot mid neighbour-scan excursion
  Resident,    // settled, passive (mirrors pointer updates)
  Reloc,       // walking a foreign tree's child-pointer trail
};

struct DfsScratch {
  DfsMode mode = DfsMode::Pool;
  MoveState pool_state = MoveState::Forward;
  int next_rank = 1;         // pool: rank the next settler will take
  Colour last_node_colour = Colour::White;  // colour of the node last departed
  int pending_exit = 0;      // port the parked group leaves through
  MoveState pending_state = MoveState::Forward;
  int scan_idx = 0;          // settler: ports visited so far
  bool scan_found = false;
  bool away = false;         // mid-excursion off the home node
  int last_seen_count = 0;   // resident: tree settled-count when pool last here
};

struct MynScratch {
  std::int64_t payload = 0;
  bool away = false;
  int visit_port = 0;  // port currently being visited
};

// Multi-source protocol: phase-1 dispersion state plus election and
// recolouring bookkeeping.
struct MsScratch {
  DfsScratch dfs;
  int disp_label = 0;     // treelabel frozen at the sync barrier
  bool away = false;      // excursion flag for MYN / casts / scans
  int visit_port = 0;
  // phase 3
  bool recoloured = false;
  bool scan3 = false;     // resident currently scanning for the walker
  int scan3_idx = 0;
  bool scan3_found = false;
  bool walker = false;
  bool walk_wait = false;  // walker parked while the resident scans
  int home_exits = 0;      // walker: forward probes made from its own node
  bool finished = false;
};

struct GreedyScratch {
  SpanRecord best1;   // max span record within 1 hop
  SpanRecord best2;   // max span record within 2 hops
  bool away = false;
  int visit_port = 0;
  int iter_seen = -1;  // last iteration whose accumulators were reset
  bool sweeping = false;  // newly black robot notifying neighbours
};

using Scratch = std::variant<std::monostate, DfsScratch, MynScratch, MsScratch,
                             GreedyScratch>;

// Every integer the robot stores, for the memory-bound check.
std::vector<std::int64_t> scratch_fields(const Scratch& s);

}  // namespace mads
