#include "dmb/topology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dmb/errors.hpp"

namespace dmb {

namespace {

std::vector<std::vector<int>> adjacency(const Topology& t) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(t.nodes));
  for (const auto& [u, v] : t.edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  // Ascending neighbor order so BFS parent selection is canonical.
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

}  // namespace

Topology Topology::star(int k) {
  if (k < 1) throw InputError("star: k must be >= 1");
  Topology t;
  t.nodes = k;
  for (int i = 1; i < k; ++i) t.edges.emplace_back(0, i);
  return t;
}

Topology Topology::path(int k) {
  if (k < 1) throw InputError("path: k must be >= 1");
  Topology t;
  t.nodes = k;
  for (int i = 0; i + 1 < k; ++i) t.edges.emplace_back(i, i + 1);
  return t;
}

Topology Topology::dary_tree(int k, int arity) {
  if (k < 1) throw InputError("dary_tree: k must be >= 1");
  if (arity < 1) throw InputError("dary_tree: arity must be >= 1");
  Topology t;
  t.nodes = k;
  for (int i = 1; i < k; ++i) t.edges.emplace_back((i - 1) / arity, i);
  return t;
}

Topology Topology::complete(int k) {
  if (k < 1) throw InputError("complete: k must be >= 1");
  Topology t;
  t.nodes = k;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) t.edges.emplace_back(i, j);
  }
  return t;
}

Topology Topology::load(std::istream& in) {
  Topology t;
  std::string line;
  if (!std::getline(in, line)) throw InputError("topology: empty input");
  t.nodes = std::stoi(line);
  if (t.nodes < 1) throw InputError("topology: k must be >= 1");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int u = -1;
    int v = -1;
    if (!(row >> u >> v)) throw InputError("topology: bad edge line: " + line);
    if (u < 0 || v < 0 || u >= t.nodes || v >= t.nodes || u == v) {
      throw InputError("topology: invalid edge " + line);
    }
    t.edges.emplace_back(u, v);
  }
  return t;
}

Topology Topology::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("topology: cannot open " + path);
  return load(in);
}

void Topology::save(std::ostream& out) const {
  out << nodes << "\n";
  for (const auto& [u, v] : edges) out << u << " " << v << "\n";
}

bool Topology::connected() const {
  if (nodes <= 1) return true;
  const auto adj = adjacency(*this);
  std::vector<char> seen(static_cast<std::size_t>(nodes), 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  return reached == nodes;
}

void Topology::validate() const {
  if (nodes < 1) throw TopologyError("topology: k must be >= 1");
  if (hop_latency_ms < 0.0) throw TopologyError("topology: latency must be >= 0");
  if (!(arrival_rate > 0.0)) throw TopologyError("topology: rate must be > 0");
  if (!connected()) throw TopologyError("topology: graph is not connected");
}

SpanningTree build_tree(const Topology& topology, int root) {
  if (root < 0 || root >= topology.nodes) {
    throw TopologyError("build_tree: root out of range");
  }
  if (!topology.connected()) {
    throw TopologyError("build_tree: graph is not connected");
  }
  const auto adj = adjacency(topology);
  const auto k = static_cast<std::size_t>(topology.nodes);

  // BFS distances from the root; these are the minimum possible depths.
  std::vector<int> depth(k, -1);
  depth[static_cast<std::size_t>(root)] = 0;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      auto vi = static_cast<std::size_t>(v);
      if (depth[vi] == -1) {
        depth[vi] = depth[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }

  SpanningTree tree;
  tree.root = root;
  tree.parent.assign(k, -1);
  tree.children.assign(k, {});
  tree.depth_of = depth;

  // Parent = lowest-id neighbor one level up; iterating v in ascending order
  // keeps every child list sorted.
  for (int v = 0; v < topology.nodes; ++v) {
    if (v == root) continue;
    auto vi = static_cast<std::size_t>(v);
    int best = -1;
    for (int u : adj[vi]) {
      if (depth[static_cast<std::size_t>(u)] == depth[vi] - 1) {
        best = u;
        break;  // neighbors are ascending
      }
    }
    tree.parent[vi] = best;
    tree.children[static_cast<std::size_t>(best)].push_back(v);
    tree.depth = std::max(tree.depth, depth[vi]);
  }
  return tree;
}

}  // namespace dmb
