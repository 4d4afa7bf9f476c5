#pragma once

#include <map>
#include <vector>

#include "bcode/elimination.hpp"

namespace bcode {

// A partition of one bucket's functions into groups whose combined scopes
// respect the arity bound. Group entries are indices into the bucket's
// factor list, kept in ascending order.
struct MiniBucketPartition {
  std::vector<std::vector<int>> groups;
  int bound = 0;            // the requested i
  int effective_bound = 0;  // max(i, largest input factor arity)
};

// Deterministic greedy i-partitioning: factors are visited in order of
// decreasing scope size (ties by first scope variable, then list position)
// and placed into the first group that can take them. A group can take a
// factor if the union scope stays within i variables, or if the factor adds
// no new variable; a factor larger than i opens its own group, which is how
// the bound degrades to max(i, largest factor arity).
MiniBucketPartition i_partition(const std::vector<Factor>& factors, int bound);

struct ApproxResult {
  std::map<int, int> assignment;  // unobserved variables only
  double lower_log = 0.0;         // log joint of the returned assignment
  double upper_log = 0.0;         // log of the mini-bucket upper bound
  int i = 0;
  int max_minibucket_vars = 0;           // largest group scope seen (incl. the bucket variable)
  std::size_t max_generated_entries = 0;
};

// approx-mpe(i): processes each bucket's mini-buckets independently to get an
// upper bound on the MPE, then greedily decodes an assignment whose joint
// probability lower-bounds it.
ApproxResult approx_mpe(const BeliefNetwork& net, const Ordering& ordering,
                        const Evidence& evidence, int bound);

}  // namespace bcode
