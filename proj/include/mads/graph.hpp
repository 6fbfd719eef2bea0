#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mads/types.hpp"

namespace mads {

/// One adjacency entry at a node: local port number, the node it leads to,
/// and the port number of the same edge at the far end.
struct PortEdge {
  int port = 0;
  int to = 0;
  int reverse_port = 0;
};

enum class GraphKind { Star, Path, Cycle, Grid, RandomConnected };

GraphKind graph_kind_from_string(const std::string& s);
std::string to_string(GraphKind k);

struct Violation {
  std::string what;
  int node = -1;
  int port = 0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// Anonymous undirected graph with per-endpoint port labels 1..deg(v).
/// Node indices exist only at the simulator level; protocol code never
/// sees them. Immutable after construction.
class PortGraph {
 public:
  /// Builds a graph from an edge list. Ports are assigned per endpoint in
  /// ascending edge-creation order: the k-th edge incident to v gets port k.
  static PortGraph from_edge_list(int n,
                                  const std::vector<std::pair<int, int>>& edges);

  /// Same, with explicit per-endpoint ports: ports[i] = (port at u, port at v)
  /// for edges[i] = (u, v).
  static PortGraph from_edge_list_with_ports(
      int n, const std::vector<std::pair<int, int>>& edges,
      const std::vector<std::pair<int, int>>& ports);

  /// Unchecked constructor used by loaders and validation tests. Call
  /// validate() before trusting the result.
  static PortGraph from_raw_adjacency(std::vector<std::vector<PortEdge>> adj,
                                      std::vector<std::pair<int, int>> edges);

  static PortGraph generate(GraphKind kind, int n, int extra_edges,
                            std::uint64_t seed);

  /// Re-labels the ports at every node with a seeded permutation. Correctness
  /// properties of all protocols must be invariant under this.
  PortGraph shuffled_ports(std::uint64_t seed) const;

  /// Renames node indices (ports preserved). perm[v] is the new index of v.
  PortGraph permuted_nodes(const std::vector<int>& perm) const;

  int node_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int max_degree() const { return max_degree_; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  /// Adjacency entry behind port p (1-based) of node v.
  const PortEdge& out(int v, int port) const;
  int neighbor(int v, int port) const { return out(v, port).to; }

  const std::vector<PortEdge>& ports_of(int v) const { return adj_[v]; }
  /// Edges in creation order, canonical (u, v) as created.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool adjacent(int u, int v) const;

  nlohmann::ordered_json to_json() const;
  static PortGraph from_json(const nlohmann::json& j);

  /// DOT output; port labels appear as taillabel/headlabel edge attributes.
  /// colouring, when given, must cover every node.
  std::string to_dot(const std::optional<std::vector<Colour>>& colouring =
                         std::nullopt) const;

 private:
  PortGraph() = default;
  void finish();

  std::vector<std::vector<PortEdge>> adj_;  // adj_[v][p-1] is port p of v
  std::vector<std::pair<int, int>> edges_;  // creation order
  int max_degree_ = 0;
};

/// Checks every PortGraph invariant: ports form {1..deg}, symmetry of
/// reverse ports, no self-loops or multi-edges, connectivity.
ValidationReport validate(const PortGraph& g);

}  // namespace mads
