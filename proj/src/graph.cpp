#include "mads/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace mads {

Colour colour_from_string(const std::string& s) {
  if (s == "white") return Colour::White;
  if (s == "grey") return Colour::Grey;
  if (s == "black") return Colour::Black;
  throw ParameterError("unknown colour: " + s);
}

GraphKind graph_kind_from_string(const std::string& s) {
  if (s == "star") return GraphKind::Star;
  if (s == "path") return GraphKind::Path;
  if (s == "cycle") return GraphKind::Cycle;
  if (s == "grid") return GraphKind::Grid;
  if (s == "random" || s == "random_connected") return GraphKind::RandomConnected;
  throw ParameterError("unknown graph kind: " + s);
}

std::string to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Star: return "star";
    case GraphKind::Path: return "path";
    case GraphKind::Cycle: return "cycle";
    case GraphKind::Grid: return "grid";
    case GraphKind::RandomConnected: return "random_connected";
  }
  return "?";
}

namespace {

// Seeded bounded integer, independent of std distribution implementations.
std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

}  // namespace

PortGraph PortGraph::from_edge_list(int n,
                                    const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) throw ParameterError("node count must be >= 1");
  PortGraph g;
  g.adj_.resize(n);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) throw ParameterError("edge endpoint out of range");
    if (u == v) throw ParameterError("self-loop");
    int pu = static_cast<int>(g.adj_[u].size()) + 1;
    int pv = static_cast<int>(g.adj_[v].size()) + 1;
    g.adj_[u].push_back({pu, v, pv});
    g.adj_[v].push_back({pv, u, pu});
    g.edges_.emplace_back(u, v);
  }
  g.finish();
  return g;
}

PortGraph PortGraph::from_edge_list_with_ports(
    int n, const std::vector<std::pair<int, int>>& edges,
    const std::vector<std::pair<int, int>>& ports) {
  if (ports.size() != edges.size())
    throw ParameterError("ports list must parallel the edge list");
  PortGraph g;
  g.adj_.resize(n);
  for (size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    auto [pu, pv] = ports[i];
    if (u < 0 || u >= n || v < 0 || v >= n) throw ParameterError("edge endpoint out of range");
    g.adj_[u].push_back({pu, v, pv});
    g.adj_[v].push_back({pv, u, pu});
    g.edges_.emplace_back(u, v);
  }
  // Entries arrive in arbitrary port order; sort each node by port.
  for (auto& lst : g.adj_)
    std::sort(lst.begin(), lst.end(),
              [](const PortEdge& a, const PortEdge& b) { return a.port < b.port; });
  g.finish();
  return g;
}

PortGraph PortGraph::from_raw_adjacency(std::vector<std::vector<PortEdge>> adj,
                                        std::vector<std::pair<int, int>> edges) {
  PortGraph g;
  g.adj_ = std::move(adj);
  g.edges_ = std::move(edges);
  g.finish();
  return g;
}

void PortGraph::finish() {
  max_degree_ = 0;
  for (const auto& lst : adj_)
    max_degree_ = std::max(max_degree_, static_cast<int>(lst.size()));
}

const PortEdge& PortGraph::out(int v, int port) const {
  if (v < 0 || v >= node_count()) throw ParameterError("node out of range");
  if (port < 1 || port > degree(v)) throw ParameterError("port out of range");
  return adj_[v][port - 1];
}

bool PortGraph::adjacent(int u, int v) const {
  for (const auto& e : adj_[u])
    if (e.to == v) return true;
  return false;
}

PortGraph PortGraph::generate(GraphKind kind, int n, int extra_edges,
                              std::uint64_t seed) {
  if (n < 1) throw ParameterError("node count must be >= 1");
  std::vector<std::pair<int, int>> edges;
  switch (kind) {
    case GraphKind::Star:
      for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
      break;
    case GraphKind::Path:
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    case GraphKind::Cycle:
      if (n < 3) throw ParameterError("cycle needs n >= 3");
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      edges.emplace_back(n - 1, 0);
      break;
    case GraphKind::Grid: {
      int cols = 1;
      while (cols * cols < n) ++cols;
      for (int v = 0; v < n; ++v) {
        int r = v / cols, c = v % cols;
        if (c + 1 < cols && v + 1 < n && (v + 1) / cols == r) edges.emplace_back(v, v + 1);
        if (v + cols < n) edges.emplace_back(v, v + cols);
      }
      break;
    }
    case GraphKind::RandomConnected: {
      std::int64_t max_extra =
          static_cast<std::int64_t>(n) * (n - 1) / 2 - (n - 1);
      if (extra_edges < 0 || extra_edges > max_extra)
        throw ParameterError("extra_edges out of range for n");
      std::mt19937_64 rng(seed);
      // Random recursive tree guarantees connectivity.
      std::set<std::pair<int, int>> present;
      for (int v = 1; v < n; ++v) {
        int p = static_cast<int>(next_below(rng, v));
        edges.emplace_back(p, v);
        present.insert({std::min(p, v), std::max(p, v)});
      }
      std::vector<std::pair<int, int>> candidates;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (!present.count({u, v})) candidates.emplace_back(u, v);
      // Deterministic Fisher-Yates, take the first extra_edges.
      for (size_t i = 0; i < candidates.size(); ++i) {
        size_t j = i + static_cast<size_t>(next_below(rng, candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
      }
      for (int i = 0; i < extra_edges; ++i) edges.push_back(candidates[i]);
      break;
    }
  }
  return from_edge_list(n, edges);
}

PortGraph PortGraph::shuffled_ports(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  int n = node_count();
  // new_port[v][old_port-1] = new port number at v
  std::vector<std::vector<int>> new_port(n);
  for (int v = 0; v < n; ++v) {
    int d = degree(v);
    new_port[v].resize(d);
    std::iota(new_port[v].begin(), new_port[v].end(), 1);
    for (int i = 0; i < d; ++i) {
      int j = i + static_cast<int>(next_below(rng, d - i));
      std::swap(new_port[v][i], new_port[v][j]);
    }
  }
  std::vector<std::vector<PortEdge>> adj(n);
  for (int v = 0; v < n; ++v) adj[v].resize(degree(v));
  for (int v = 0; v < n; ++v)
    for (const auto& e : adj_[v]) {
      int np = new_port[v][e.port - 1];
      int nrev = new_port[e.to][e.reverse_port - 1];
      adj[v][np - 1] = {np, e.to, nrev};
    }
  return from_raw_adjacency(std::move(adj), edges_);
}

PortGraph PortGraph::permuted_nodes(const std::vector<int>& perm) const {
  int n = node_count();
  if (static_cast<int>(perm.size()) != n) throw ParameterError("permutation size mismatch");
  std::vector<std::vector<PortEdge>> adj(n);
  for (int v = 0; v < n; ++v) {
    adj[perm[v]].resize(degree(v));
    for (const auto& e : adj_[v]) adj[perm[v]][e.port - 1] = {e.port, perm[e.to], e.reverse_port};
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(edges_.size());
  for (auto [u, v] : edges_) edges.emplace_back(perm[u], perm[v]);
  return from_raw_adjacency(std::move(adj), std::move(edges));
}

ValidationReport validate(const PortGraph& g) {
  ValidationReport r;
  auto fail = [&](std::string what, int node, int port) {
    r.ok = false;
    r.violations.push_back({std::move(what), node, port});
  };
  int n = g.node_count();
  std::set<std::pair<int, int>> seen;
  for (int v = 0; v < n; ++v) {
    const auto& lst = g.ports_of(v);
    std::set<int> ports;
    for (const auto& e : lst) ports.insert(e.port);
    for (int p = 1; p <= static_cast<int>(lst.size()); ++p)
      if (!ports.count(p)) fail("port gap at node", v, p);
    if (static_cast<int>(ports.size()) != static_cast<int>(lst.size()))
      fail("duplicate port at node", v, 0);
    for (const auto& e : lst) {
      if (e.to == v) {
        fail("self-loop", v, e.port);
        continue;
      }
      if (e.to < 0 || e.to >= n) {
        fail("neighbor out of range", v, e.port);
        continue;
      }
      if (e.reverse_port < 1 || e.reverse_port > g.degree(e.to)) {
        fail("reverse port out of range", v, e.port);
        continue;
      }
      const PortEdge& back = g.ports_of(e.to)[e.reverse_port - 1];
      if (back.to != v || back.reverse_port != e.port)
        fail("symmetry broken", v, e.port);
      auto key = std::minmax(v, e.to);
      if (v < e.to && !seen.insert({key.first, key.second}).second)
        fail("multi-edge", v, e.port);
    }
  }
  // Connectivity over the adjacency as given.
  std::vector<char> vis(n, 0);
  std::vector<int> stack{0};
  vis[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto& e : g.ports_of(v))
      if (e.to >= 0 && e.to < n && !vis[e.to]) {
        vis[e.to] = 1;
        ++count;
        stack.push_back(e.to);
      }
  }
  if (count != n) fail("graph not connected", -1, 0);
  return r;
}

nlohmann::ordered_json PortGraph::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = node_count();
  auto edges = nlohmann::ordered_json::array();
  auto ports = nlohmann::ordered_json::array();
  for (size_t i = 0; i < edges_.size(); ++i) {
    auto [u, v] = edges_[i];
    edges.push_back({u, v});
    // Recover the port pair of this edge occurrence.
    int pu = 0, pv = 0;
    for (const auto& e : adj_[u])
      if (e.to == v) pu = e.port, pv = e.reverse_port;
    ports.push_back({pu, pv});
  }
  j["edges"] = edges;
  j["ports"] = ports;
  return j;
}

PortGraph PortGraph::from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  if (j.contains("ports") && !j["ports"].is_null()) {
    std::vector<std::pair<int, int>> ports;
    for (const auto& p : j["ports"]) ports.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    PortGraph g = from_edge_list_with_ports(n, edges, ports);
    auto rep = validate(g);
    if (!rep.ok)
      throw ParameterError("graph file invalid: " + rep.violations.front().what);
    return g;
  }
  PortGraph g = from_edge_list(n, edges);
  auto rep = validate(g);
  if (!rep.ok)
    throw ParameterError("graph file invalid: " + rep.violations.front().what);
  return g;
}

std::string PortGraph::to_dot(const std::optional<std::vector<Colour>>& colouring) const {
  if (colouring && static_cast<int>(colouring->size()) != node_count())
    throw ParameterError("colouring must cover all nodes");
  std::ostringstream os;
  os << "graph G {\n";
  os << "  node [style=filled, fillcolor=white];\n";
  for (int v = 0; v < node_count(); ++v) {
    os << "  " << v;
    if (colouring) {
      switch ((*colouring)[v]) {
        case Colour::Black: os << " [fillcolor=black, fontcolor=white]"; break;
        case Colour::Grey: os << " [fillcolor=grey]"; break;
        case Colour::White: os << " [fillcolor=white]"; break;
      }
    }
    os << ";\n";
  }
  for (auto [u, v] : edges_) {
    int pu = 0, pv = 0;
    for (const auto& e : adj_[u])
      if (e.to == v) pu = e.port, pv = e.reverse_port;
    os << "  " << u << " -- " << v << " [taillabel=\"" << pu << "\", headlabel=\""
       << pv << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace mads
