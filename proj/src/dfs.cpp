#include "mads/dfs.hpp"

#include <algorithm>
#include <map>

namespace mads {
namespace dfs_core {
namespace {

struct View {
  const Sighting* resident = nullptr;       // settled, at home
  const DfsScratch* resident_scr = nullptr;
  std::vector<const Sighting*> own_pool;    // unsettled, own label, Pool mode
  std::vector<const Sighting*> own_parked;  // unsettled, own label, WaitColour
  const Sighting* foreign_parked = nullptr; // unsettled WaitColour, other label
};

View classify(const Config& cfg, const StepContext& ctx, const RobotState& self) {
  View v;
  for (const auto& s : ctx.others) {
    const DfsScratch* scr = cfg.scratch_of(*s.st);
    if (!scr) continue;
    if (s.st->settled) {
      if (!scr->away) {
        v.resident = &s;
        v.resident_scr = scr;
      }
      continue;
    }
    if (scr->mode == DfsMode::Pool) {
      if (s.st->treelabel == self.treelabel) v.own_pool.push_back(&s);
    } else if (scr->mode == DfsMode::WaitColour) {
      if (s.st->treelabel == self.treelabel)
        v.own_parked.push_back(&s);
      else if (!v.foreign_parked || s.st->id < v.foreign_parked->st->id)
        v.foreign_parked = &s;
    }
  }
  return v;
}

bool black_for(const Config& cfg, const RobotState& self, const RobotState& other) {
  if (other.colour != Colour::Black) return false;
  if (cfg.colouring == DfsColouring::SameLabel)
    return other.treelabel == self.treelabel;
  return true;
}

// Settler excursion: visit every port once, two rounds each, looking for a
// black robot; colour resolves on return from the last port.
std::optional<int> scan_step(const Config& cfg, const StepContext& ctx,
                             RobotState& next, DfsScratch& s) {
  if (s.away) {
    for (const auto& o : ctx.others) {
      const DfsScratch* scr = cfg.scratch_of(*o.st);
      if (o.st->settled && scr && !scr->away && black_for(cfg, next, *o.st))
        s.scan_found = true;
    }
    s.away = false;
    return ctx.entry_port;  // return home
  }
  if (s.scan_idx < ctx.degree) {
    ++s.scan_idx;
    s.away = true;
    return s.scan_idx;
  }
  next.colour = s.scan_found ? Colour::Grey : Colour::Black;
  s.mode = DfsMode::Resident;
  next.done = true;
  return std::nullopt;
}

// Cursor continuation at a node whose settler recorded no onward exit.
int resume_cursor(const RobotState& resident, int degree) {
  return cyc_next(resident.parent.value_or(0), degree);
}

std::optional<int> settle_event(const Config& cfg, const StepContext& ctx,
                                RobotState& next, DfsScratch& s, bool at_root) {
  // Group = every co-located Pool robot regardless of label. Heads meeting at
  // an empty node merge here: all adopt the minimum label present, and the
  // shared cursor state comes from that label's minimum-id member. Everyone
  // computes the same values from the same snapshot.
  int min_id = next.id;
  int group_size = 1;
  int min_label = ctx.self->treelabel;
  std::optional<int> settler_entry = ctx.entry_port;
  for (const auto& o : ctx.others) {
    const DfsScratch* scr = cfg.scratch_of(*o.st);
    if (!o.st->settled && scr && scr->mode == DfsMode::Pool) {
      ++group_size;
      if (o.st->id < min_id) {
        min_id = o.st->id;
        settler_entry = o.entry_port;
      }
      min_label = std::min(min_label, o.st->treelabel);
    }
  }
  if (min_label != ctx.self->treelabel) {
    // Adopt the winning pool's shared fields before acting.
    const DfsScratch* base =
        ctx.self->treelabel == min_label ? cfg.scratch_of(*ctx.self) : nullptr;
    int base_id = base ? ctx.self->id : 0;
    for (const auto& o : ctx.others) {
      const DfsScratch* scr = cfg.scratch_of(*o.st);
      if (!o.st->settled && scr && scr->mode == DfsMode::Pool &&
          o.st->treelabel == min_label && (!base || o.st->id < base_id)) {
        base = scr;
        base_id = o.st->id;
      }
    }
    next.treelabel = min_label;
    s.pool_state = base->pool_state;
    s.next_rank = base->next_rank;
    s.last_node_colour = base->last_node_colour;
  }
  // Parent of the new settler is the port the settler entered through; the
  // port cursor continues from there for the whole group.
  const std::optional<int> entry = at_root ? std::nullopt : settler_entry;
  const int exit = ctx.degree > 0 ? cyc_next(entry.value_or(0), ctx.degree) : 0;
  const bool exhaust = entry && exit == *entry;  // degree-1 dead end

  const bool instant_grey = cfg.colouring == DfsColouring::Rooted && !at_root &&
                            s.last_node_colour == Colour::Black;
  const bool needs_scan =
      cfg.colouring != DfsColouring::None && !at_root && !instant_grey;

  if (next.id == min_id) {
    next.settled = true;
    next.rank = s.next_rank;
    next.parent = entry;
    next.child = group_size > 1 ? std::optional<int>(exit) : std::nullopt;
    s.last_seen_count = s.next_rank;
    if (cfg.colouring != DfsColouring::None) {
      if (at_root) {
        next.colour = Colour::Black;
      } else if (instant_grey) {
        next.colour = Colour::Grey;
      } else {
        s.mode = DfsMode::Scanning;
        s.scan_idx = 0;
        s.scan_found = false;
        return scan_step(cfg, ctx, next, s);
      }
    }
    s.mode = DfsMode::Resident;
    next.done = true;
    return std::nullopt;
  }

  // Remaining group member.
  s.next_rank += 1;
  if (needs_scan) {
    s.mode = DfsMode::WaitColour;
    s.pending_exit = exit;
    s.pending_state = exhaust ? MoveState::Backtrack : MoveState::Forward;
    return std::nullopt;
  }
  s.last_node_colour = at_root ? (cfg.colouring != DfsColouring::None
                                      ? Colour::Black
                                      : Colour::White)
                               : (instant_grey ? Colour::Grey : Colour::White);
  s.pool_state = exhaust ? MoveState::Backtrack : MoveState::Forward;
  next.state = s.pool_state;
  return exit;
}

// Pool arriving (or standing) where a settled robot of the same tree lives.
std::optional<int> own_resident_step(const StepContext& ctx, RobotState& next,
                                     DfsScratch& s, const RobotState& resident,
                                     const DfsScratch& resident_scr) {
  if (s.pool_state == MoveState::Forward) {
    // Forward probe into explored territory: bounce back.
    s.pool_state = MoveState::Backtrack;
    next.state = s.pool_state;
    return ctx.entry_port;
  }
  // Backtrack arrival: advance the cursor past the edge just used. The
  // resident's count refreshes ours (pools resuming a trail carry none).
  int cursor = cyc_next(*ctx.entry_port, ctx.degree);
  s.next_rank = std::max(s.next_rank, resident_scr.last_seen_count + 1);
  if (!(resident.parent && cursor == *resident.parent))
    s.pool_state = MoveState::Forward;
  s.last_node_colour = resident.colour;
  next.state = s.pool_state;
  return cursor;
}

// Submission: the pool bumped a settled robot from a foreign tree. It adopts
// that tree's label and walks the child-pointer trail toward its head.
std::optional<int> submit(const Config& cfg, const StepContext& ctx,
                          RobotState& next, DfsScratch& s,
                          const RobotState& resident,
                          const DfsScratch& resident_scr) {
  next.treelabel = resident.treelabel;
  if (resident.child) {
    s.mode = DfsMode::Reloc;
    return *resident.child;
  }
  // Trail ends right here: inherit the tree and continue its traversal.
  int cursor = resume_cursor(resident, ctx.degree);
  s.next_rank = resident_scr.last_seen_count + 1;
  if (resident_scr.mode == DfsMode::Scanning) {
    // Final-settle scan still running; park until the colour lands.
    s.mode = DfsMode::WaitColour;
    s.pending_exit = cursor;
    s.pending_state = (resident.parent && cursor == *resident.parent)
                          ? MoveState::Backtrack
                          : MoveState::Forward;
    return std::nullopt;
  }
  s.mode = DfsMode::Pool;
  s.pool_state = (resident.parent && cursor == *resident.parent)
                     ? MoveState::Backtrack
                     : MoveState::Forward;
  s.last_node_colour = resident.colour;
  next.state = s.pool_state;
  return cursor;
}

std::optional<int> pool_step(const Config& cfg, const StepContext& ctx,
                             RobotState& next, DfsScratch& s) {
  View v = classify(cfg, ctx, next);

  // Cluster start: first round, nobody settled here yet.
  if (ctx.last_move_round < 0 && !v.resident && s.pool_state == MoveState::Forward &&
      !v.foreign_parked && v.own_parked.empty())
    return settle_event(cfg, ctx, next, s, /*at_root=*/true);

  // A parked group marks a settlement in progress; join that tree.
  const Sighting* parked = v.foreign_parked;
  if (!v.own_parked.empty() &&
      (!parked || v.own_parked.front()->st->id < parked->st->id))
    parked = v.own_parked.front();
  if (parked) {
    const DfsScratch* scr = cfg.scratch_of(*parked->st);
    next.treelabel = parked->st->treelabel;
    s.mode = DfsMode::WaitColour;
    s.pending_exit = scr->pending_exit;
    s.pending_state = scr->pending_state;
    s.next_rank = scr->next_rank;
    s.last_node_colour = scr->last_node_colour;
    return std::nullopt;
  }

  if (v.resident) {
    if (v.resident->st->treelabel == next.treelabel)
      return own_resident_step(ctx, next, s, *v.resident->st, *v.resident_scr);
    if (!cfg.multi_cluster)
      throw SimulationFault("foreign settled robot in a single-cluster run");
    return submit(cfg, ctx, next, s, *v.resident->st, *v.resident_scr);
  }

  if (s.pool_state == MoveState::Backtrack)
    throw SimulationFault("backtrack arrival at a node with no settled robot");

  // Empty node. In multi-cluster colouring runs a scanning settler can be
  // momentarily away; it is home on every other round, so everyone waits
  // until someone in the group has observed the node empty for a full round.
  if (cfg.multi_cluster && cfg.colouring != DfsColouring::None) {
    bool someone_stood = ctx.last_move_round < ctx.round - 1;
    for (const auto& o : ctx.others) {
      const DfsScratch* scr = cfg.scratch_of(*o.st);
      if (!o.st->settled && scr && scr->mode == DfsMode::Pool &&
          o.last_move_round < ctx.round - 1)
        someone_stood = true;
    }
    if (!someone_stood) return std::nullopt;
  }
  return settle_event(cfg, ctx, next, s, /*at_root=*/false);
}

std::optional<int> reloc_step(const Config& cfg, const StepContext& ctx,
                              RobotState& next, DfsScratch& s) {
  View v = classify(cfg, ctx, next);
  if (!v.own_parked.empty()) {
    // Catch up with the parked pool: copy its shared fields and park too.
    const Sighting* src = *std::min_element(
        v.own_parked.begin(), v.own_parked.end(),
        [](const Sighting* a, const Sighting* b) { return a->st->id < b->st->id; });
    const DfsScratch* scr = cfg.scratch_of(*src->st);
    s.mode = DfsMode::WaitColour;
    s.pending_exit = scr->pending_exit;
    s.pending_state = scr->pending_state;
    s.next_rank = scr->next_rank;
    s.last_node_colour = scr->last_node_colour;
    return std::nullopt;
  }
  if (!v.own_pool.empty()) return std::nullopt;  // let them move or park first
  if (!v.resident) return std::nullopt;          // scanner mid-excursion; wait

  const RobotState& r = *v.resident->st;
  if (r.treelabel != next.treelabel) {
    // The trail dead-ends into a foreign junction: the tree we are chasing
    // submitted mid-probe. Resume its traversal as a bounced probe.
    s.mode = DfsMode::Pool;
    s.pool_state = MoveState::Backtrack;
    next.state = s.pool_state;
    return ctx.entry_port;
  }
  if (!r.child) return submit(cfg, ctx, next, s, r, *v.resident_scr);
  return *r.child;  // keep following the trail
}

std::optional<int> wait_colour_step(const Config& cfg, const StepContext& ctx,
                                    RobotState& next, DfsScratch& s) {
  for (const auto& o : ctx.others) {
    const DfsScratch* scr = cfg.scratch_of(*o.st);
    if (o.st->settled && scr && !scr->away && o.st->colour != Colour::White) {
      s.mode = DfsMode::Pool;
      s.pool_state = s.pending_state;
      s.last_node_colour = o.st->colour;
      next.state = s.pool_state;
      return s.pending_exit;
    }
  }
  return std::nullopt;
}

std::optional<int> resident_step(const Config& cfg, const StepContext& ctx,
                                 RobotState& next, DfsScratch& s) {
  // Mirror the pool's pointer updates; the settled robot computes the same
  // cursor values from the same co-located view.
  const Sighting* arrived = nullptr;
  bool own_unsettled_here = false;
  for (const auto& o : ctx.others) {
    const DfsScratch* scr = cfg.scratch_of(*o.st);
    if (!scr || o.st->settled) continue;
    if (o.st->treelabel != next.treelabel) continue;
    own_unsettled_here = true;
    if (scr->mode == DfsMode::Pool && scr->pool_state == MoveState::Backtrack &&
        o.last_move_round == ctx.round - 1 &&
        (!arrived || o.st->id < arrived->st->id))
      arrived = &o;
  }
  if (arrived) {
    const DfsScratch* scr = cfg.scratch_of(*arrived->st);
    next.child = cyc_next(*arrived->entry_port, ctx.degree);
    s.last_seen_count = std::max(s.last_seen_count, scr->next_rank - 1);
  } else if (!next.child && own_unsettled_here) {
    // Relocators are inheriting this dead tree; record their exit.
    next.child = resume_cursor(next, ctx.degree);
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> step(const Config& cfg, const StepContext& ctx,
                        RobotState& next) {
  DfsScratch& s = *cfg.scratch_mut(next);
  if (next.settled) {
    if (s.mode == DfsMode::Scanning) return scan_step(cfg, ctx, next, s);
    return resident_step(cfg, ctx, next, s);
  }
  switch (s.mode) {
    case DfsMode::Pool: return pool_step(cfg, ctx, next, s);
    case DfsMode::WaitColour: return wait_colour_step(cfg, ctx, next, s);
    case DfsMode::Reloc: return reloc_step(cfg, ctx, next, s);
    default:
      throw SimulationFault("unsettled robot in a settled-only mode");
  }
}

}  // namespace dfs_core

namespace {

const DfsScratch* plain_scratch(const RobotState& st) {
  return std::get_if<DfsScratch>(&st.scratch);
}
DfsScratch* plain_scratch_mut(RobotState& st) {
  return std::get_if<DfsScratch>(&st.scratch);
}

}  // namespace

DfsProtocol::DfsProtocol(DfsColouring colouring, bool multi_cluster) {
  cfg_.colouring = colouring;
  cfg_.multi_cluster = multi_cluster;
  cfg_.scratch_of = plain_scratch;
  cfg_.scratch_mut = plain_scratch_mut;
}

std::string DfsProtocol::name() const {
  switch (cfg_.colouring) {
    case DfsColouring::None: return cfg_.multi_cluster ? "dispersion" : "dfs";
    case DfsColouring::Rooted: return "rooted";
    case DfsColouring::SameLabel: return "arbitrary-basic";
  }
  return "dfs";
}

void DfsProtocol::on_attach(SimWorld& world) {
  // treelabel of a cluster is the id of its minimum robot.
  std::map<int, int> min_at_node;
  for (int i = 0; i < world.robot_count(); ++i) {
    int node = world.node_of(i);
    auto it = min_at_node.find(node);
    if (it == min_at_node.end() || world.robot(i).id < it->second)
      min_at_node[node] = world.robot(i).id;
  }
  if (!cfg_.multi_cluster && min_at_node.size() != 1)
    throw ParameterError("this protocol needs all robots co-located at one root");
  for (int i = 0; i < world.robot_count(); ++i) {
    RobotState& st = world.robot_mutable(i);
    st.treelabel = min_at_node[world.node_of(i)];
    st.scratch = DfsScratch{};
  }
}

Decision DfsProtocol::step_robot(const StepContext& ctx, RobotState& next) {
  return {dfs_core::step(cfg_, ctx, next)};
}

DispersionResult run_dfs_dispersion(const PortGraph& g, int k, int start_node) {
  if (k < 1 || k > g.node_count())
    throw ParameterError("robot count must satisfy 1 <= k <= n");
  if (start_node < 0 || start_node >= g.node_count())
    throw ParameterError("start node out of range");
  std::vector<std::pair<int, int>> placement;
  for (int id = 1; id <= k; ++id) placement.emplace_back(id, start_node);
  SimWorld world(g, placement);
  DfsProtocol proto(DfsColouring::None, false);
  world.attach(proto);
  long budget = 4L * g.edge_count() + 2L * g.node_count() + 8;
  RunOutcome out = world.run_until(proto, {budget});

  DispersionResult res;
  res.outcome = out;
  int best_rank = 0;
  res.status.complete = true;
  for (int i = 0; i < world.robot_count(); ++i) {
    res.placements.push_back(world.node_of(i));
    const RobotState& st = world.robot(i);
    if (st.settled) {
      ++res.status.settled_count;
      if (st.rank && *st.rank > best_rank) {
        best_rank = *st.rank;
        res.status.head_node = world.node_of(i);
      }
    } else {
      res.status.complete = false;
    }
  }
  return res;
}

}  // namespace mads
