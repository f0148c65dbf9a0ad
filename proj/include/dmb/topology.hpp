#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dmb {

// Undirected node graph with the latency/arrival-rate parameters of the
// simulated cluster. Hop latency is one-way, per edge traversal; the arrival
// rate is system-wide.
struct Topology {
  int nodes = 1;
  std::vector<std::pair<int, int>> edges;
  double hop_latency_ms = 0.0;
  double arrival_rate = 1.0;  // inputs per millisecond

  static Topology star(int k);
  static Topology path(int k);
  static Topology dary_tree(int k, int arity);
  static Topology complete(int k);

  // Plain-text format: first line "k", then one "u v" line per edge.
  static Topology load(std::istream& in);
  static Topology load_file(const std::string& path);
  void save(std::ostream& out) const;

  bool connected() const;
  void validate() const;  // throws TopologyError / InputError
};

// Rooted minimum-depth spanning tree (BFS tree). Children are kept in
// ascending node-id order; that ordering fixes the reduction order and makes
// floating-point sums reproducible.
struct SpanningTree {
  int root = 0;
  std::vector<int> parent;                  // parent[root] == -1
  std::vector<std::vector<int>> children;   // ascending ids
  std::vector<int> depth_of;
  int depth = 0;

  int size() const { return static_cast<int>(parent.size()); }
};

SpanningTree build_tree(const Topology& topology, int root = 0);

}  // namespace dmb
