#include "bcode/brute_force.hpp"

#include <string>

#include "bcode/errors.hpp"

namespace bcode {

namespace {

constexpr std::size_t kMaxCompletions = 1ULL << 24;

// Lists unobserved variables (ascending id) and checks the enumeration guard.
std::vector<int> free_variables(const BeliefNetwork& net, const Evidence& evidence) {
  validate_evidence(net, evidence);
  std::vector<int> free;
  std::size_t completions = 1;
  for (int v = 0; v < net.size(); ++v) {
    if (evidence.observed(v)) continue;
    free.push_back(v);
    completions *= static_cast<std::size_t>(net.cardinality(v));
    if (completions > kMaxCompletions)
      throw TooLargeForBruteForce("more than 2^24 completions; refusing to enumerate");
  }
  return free;
}

// Calls fn(assignment) for every completion, in lexicographic order over the
// free variables (ascending id, ascending value).
template <typename Fn>
void for_each_completion(const BeliefNetwork& net, const Evidence& evidence,
                         const std::vector<int>& free, Fn&& fn) {
  std::vector<int> assignment(static_cast<std::size_t>(net.size()), 0);
  for (const auto& [v, value] : evidence.assignments) assignment[static_cast<std::size_t>(v)] = value;
  for (;;) {
    fn(assignment);
    int i = static_cast<int>(free.size()) - 1;
    while (i >= 0) {
      int v = free[static_cast<std::size_t>(i)];
      if (++assignment[static_cast<std::size_t>(v)] < net.cardinality(v)) break;
      assignment[static_cast<std::size_t>(v)] = 0;
      --i;
    }
    if (i < 0) break;
  }
}

}  // namespace

BruteForceMpe brute_force_mpe(const BeliefNetwork& net, const Evidence& evidence) {
  std::vector<int> free = free_variables(net, evidence);
  BruteForceMpe best;
  best.probability = -1.0;
  std::vector<int> best_assignment;
  for_each_completion(net, evidence, free, [&](const std::vector<int>& assignment) {
    double p = joint_probability(net, assignment, evidence);
    if (p > best.probability) {  // strict: first maximum is lexicographically smallest
      best.probability = p;
      best_assignment = assignment;
    }
  });
  for (int v : free) best.assignment[v] = best_assignment[static_cast<std::size_t>(v)];
  return best;
}

std::vector<double> brute_force_marginal(const BeliefNetwork& net, const Evidence& evidence,
                                         int v) {
  if (v < 0 || v >= net.size()) throw InvalidParams("query variable id out of range");
  std::vector<int> free = free_variables(net, evidence);
  std::vector<double> posterior(static_cast<std::size_t>(net.cardinality(v)), 0.0);
  for_each_completion(net, evidence, free, [&](const std::vector<int>& assignment) {
    posterior[static_cast<std::size_t>(assignment[static_cast<std::size_t>(v)])] +=
        joint_probability(net, assignment, evidence);
  });
  double total = 0.0;
  for (double x : posterior) total += x;
  if (total <= 0.0)
    throw ZeroEvidenceProbability("every completion of the evidence has probability 0");
  for (double& x : posterior) x /= total;
  return posterior;
}

}  // namespace bcode
