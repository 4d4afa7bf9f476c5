#include "bcode/minibucket.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "bcode/errors.hpp"
#include "elim_internal.hpp"

namespace bcode {

MiniBucketPartition i_partition(const std::vector<Factor>& factors, int bound) {
  if (bound < 1) throw InvalidParams("mini-bucket bound must be >= 1");

  MiniBucketPartition partition;
  partition.bound = bound;
  partition.effective_bound = bound;
  for (const Factor& f : factors)
    partition.effective_bound = std::max(partition.effective_bound, f.arity());

  std::vector<int> order(factors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Factor& fa = factors[static_cast<std::size_t>(a)];
    const Factor& fb = factors[static_cast<std::size_t>(b)];
    if (fa.arity() != fb.arity()) return fa.arity() > fb.arity();
    int va = fa.scope.empty() ? -1 : fa.scope.front();
    int vb = fb.scope.empty() ? -1 : fb.scope.front();
    return va < vb;
  });

  std::vector<std::set<int>> scopes;  // running union scope per group
  for (int idx : order) {
    const Factor& f = factors[static_cast<std::size_t>(idx)];
    bool placed = false;
    for (std::size_t g = 0; g < partition.groups.size(); ++g) {
      std::set<int> merged = scopes[g];
      merged.insert(f.scope.begin(), f.scope.end());
      // Fits if the merged scope respects the bound, or if the factor brings
      // no new variable (it cannot push the group past its largest member).
      if (static_cast<int>(merged.size()) <= bound || merged.size() == scopes[g].size()) {
        partition.groups[g].push_back(idx);
        scopes[g] = std::move(merged);
        placed = true;
        break;
      }
    }
    if (!placed) {
      partition.groups.push_back({idx});
      scopes.emplace_back(f.scope.begin(), f.scope.end());
    }
  }
  // Members kept in list order, so a group product multiplies in the same
  // order the exact algorithm would.
  for (auto& group : partition.groups) std::sort(group.begin(), group.end());
  return partition;
}

ApproxResult approx_mpe(const BeliefNetwork& net, const Ordering& ordering,
                        const Evidence& evidence, int bound) {
  if (bound < 1) throw InvalidParams("mini-bucket bound must be >= 1");

  const int n = net.size();
  const std::vector<int> pos = detail::position_map(net, ordering);
  std::vector<Bucket> buckets = partition_buckets(net, ordering, evidence);
  for (Bucket& b : buckets)
    for (Factor& f : b.factors) f = factor_log(f);

  ApproxResult result;
  result.i = bound;
  double scalar_log = 0.0;

  auto route = [&](Factor f) {
    if (f.scope.empty()) {
      scalar_log += f.table[0];
      return;
    }
    buckets[static_cast<std::size_t>(detail::latest_position(f, pos))].factors.push_back(
        std::move(f));
  };

  for (int p = n - 1; p >= 0; --p) {
    Bucket& b = buckets[static_cast<std::size_t>(p)];
    if (b.hard_value) {
      // Observed buckets behave exactly as in exact elimination.
      for (std::size_t i = 0; i < b.factors.size(); ++i)
        route(factor_restrict(b.factors[i], b.variable, *b.hard_value));
      continue;
    }
    if (b.factors.empty()) continue;

    MiniBucketPartition partition = i_partition(b.factors, bound);
    for (const std::vector<int>& group : partition.groups) {
      std::vector<Factor> members;
      members.reserve(group.size());
      for (int idx : group) members.push_back(b.factors[static_cast<std::size_t>(idx)]);
      Factor prod = factor_logsum(members);
      result.max_minibucket_vars = std::max(result.max_minibucket_vars, prod.arity());
      Factor h = factor_eliminate(prod, b.variable, Reduce::Max);
      result.max_generated_entries = std::max(result.max_generated_entries, h.size());
      route(std::move(h));
    }
  }

  if (std::isinf(scalar_log))
    throw ZeroEvidenceProbability("the evidence has probability zero under the network");
  result.upper_log = scalar_log;

  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  detail::forward_assign(buckets, net, n, assignment);

  result.lower_log = log_joint_probability(net, assignment, evidence);
  for (int v = 0; v < n; ++v)
    if (!evidence.observed(v)) result.assignment[v] = assignment[static_cast<std::size_t>(v)];
  return result;
}

}  // namespace bcode
