#pragma once

// Helpers shared by the exact and mini-bucket elimination passes. The forward
// (decoding) pass in particular must be the same code for both, so that a
// mini-bucket run with a bound above the induced width reproduces elim-mpe
// decision for decision.

#include <limits>
#include <vector>

#include "bcode/elimination.hpp"
#include "bcode/errors.hpp"

namespace bcode::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline std::vector<int> position_map(const BeliefNetwork& net, const Ordering& ordering) {
  const int n = net.size();
  if (static_cast<int>(ordering.sequence.size()) != n)
    throw OrderingMismatch("ordering must cover all network variables");
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    int v = ordering.sequence[static_cast<std::size_t>(i)];
    if (v < 0 || v >= n || pos[static_cast<std::size_t>(v)] >= 0)
      throw OrderingMismatch("ordering is not a permutation of the variable ids");
    pos[static_cast<std::size_t>(v)] = i;
  }
  return pos;
}

inline int latest_position(const Factor& f, const std::vector<int>& pos) {
  int latest = -1;
  for (int v : f.scope) latest = std::max(latest, pos[static_cast<std::size_t>(v)]);
  return latest;
}

// Greedy per-bucket maximization along the ordering prefix [0, limit): each
// variable gets the value maximizing the product (log domain) of all the
// functions in its bucket given earlier choices; ties take the smallest value.
inline void forward_assign(const std::vector<Bucket>& buckets, const BeliefNetwork& net,
                           int limit, std::vector<int>& assignment) {
  for (int k = 0; k < limit; ++k) {
    const Bucket& b = buckets[static_cast<std::size_t>(k)];
    const int v = b.variable;
    if (b.hard_value) {
      assignment[static_cast<std::size_t>(v)] = *b.hard_value;
      continue;
    }
    int best_value = 0;
    double best = kNegInf;
    for (int t = 0; t < net.cardinality(v); ++t) {
      assignment[static_cast<std::size_t>(v)] = t;
      double score = 0.0;
      for (const Factor& f : b.factors) score += f.value_at(assignment);
      if (score > best) {
        best = score;
        best_value = t;
      }
    }
    assignment[static_cast<std::size_t>(v)] = best_value;
  }
}

}  // namespace bcode::detail
