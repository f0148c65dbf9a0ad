#pragma once

#include "dmb/topology.hpp"
#include "dmb/vec.hpp"

namespace dmb {

struct VectorSumResult {
  Vector total;        // held by every node after the down-sweep
  long messages = 0;   // one up-message and one down-message per tree edge
};

// Simulated synchronized reduction: leaves push partial sums up the tree in
// canonical child order, the root broadcasts the total back down. Every node
// ends up with bit-identical results, and each tree edge carries exactly one
// message per direction.
VectorSumResult vector_sum(const SpanningTree& tree,
                           const std::vector<Vector>& per_node);

// Wall-clock cost of one reduction: up-sweep plus down-sweep, one hop latency
// per tree level per direction, i.e. 2 * depth * hop_latency.
double vector_sum_time_ms(const SpanningTree& tree, double hop_latency_ms);

// Inputs arriving system-wide while a reduction is in flight:
// ceil(rate * vector_sum_time). This is the raw value used by the bound
// calculators; round_up_to_multiple balances it across nodes when an engine
// wants integral per-node latency counts.
long compute_mu(const SpanningTree& tree, double hop_latency_ms, double rate);

long round_up_to_multiple(long value, long k);

}  // namespace dmb
