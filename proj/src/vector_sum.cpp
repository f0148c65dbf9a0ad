#include "dmb/vector_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dmb/errors.hpp"

namespace dmb {

VectorSumResult vector_sum(const SpanningTree& tree,
                           const std::vector<Vector>& per_node) {
  const auto k = static_cast<std::size_t>(tree.size());
  if (per_node.size() != k) {
    throw InputError("vector_sum: need one vector per node");
  }
  const std::size_t dim = per_node.front().size();
  for (const Vector& v : per_node) {
    if (v.size() != dim) throw InputError("vector_sum: dimension mismatch");
  }

  // Up-sweep in decreasing depth: each node's message is its own vector plus
  // its children's messages, children taken in ascending id.
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return tree.depth_of[static_cast<std::size_t>(a)] >
           tree.depth_of[static_cast<std::size_t>(b)];
  });

  std::vector<Vector> message(k);
  long messages = 0;
  for (int node : order) {
    auto ni = static_cast<std::size_t>(node);
    message[ni] = per_node[ni];
    for (int child : tree.children[ni]) {
      auto ci = static_cast<std::size_t>(child);
      for (std::size_t d = 0; d < dim; ++d) message[ni][d] += message[ci][d];
      ++messages;  // child -> parent
    }
  }

  // Down-sweep: the root's total is broadcast verbatim, one message per edge.
  messages += static_cast<long>(k) - 1;

  VectorSumResult out;
  out.total = std::move(message[static_cast<std::size_t>(tree.root)]);
  out.messages = messages;
  return out;
}

double vector_sum_time_ms(const SpanningTree& tree, double hop_latency_ms) {
  if (hop_latency_ms < 0.0) throw InputError("latency must be >= 0");
  return 2.0 * static_cast<double>(tree.depth) * hop_latency_ms;
}

long compute_mu(const SpanningTree& tree, double hop_latency_ms, double rate) {
  if (!(rate > 0.0)) throw InputError("rate must be > 0");
  const double time = vector_sum_time_ms(tree, hop_latency_ms);
  return static_cast<long>(std::ceil(rate * time));
}

long round_up_to_multiple(long value, long k) {
  if (k < 1) throw InputError("round_up_to_multiple: k must be >= 1");
  if (value <= 0) return 0;
  return ((value + k - 1) / k) * k;
}

}  // namespace dmb
