#pragma once

#include <map>
#include <vector>

#include "bcode/network.hpp"

namespace bcode {

// Exhaustive-enumeration ground truth. These deliberately touch nothing but
// joint_probability, so they stay independent of the elimination code paths
// they are used to check.

struct BruteForceMpe {
  std::map<int, int> assignment;  // unobserved variables only
  double probability = 0.0;       // joint with evidence, linear domain
};

// Exact maximizer over all completions of the evidence; ties resolved to the
// lexicographically smallest assignment (by variable id, then value).
BruteForceMpe brute_force_mpe(const BeliefNetwork& net, const Evidence& evidence);

// Exact normalized posterior of variable v given the evidence.
std::vector<double> brute_force_marginal(const BeliefNetwork& net, const Evidence& evidence,
                                         int v);

}  // namespace bcode
