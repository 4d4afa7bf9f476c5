#include "bcode/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bcode/errors.hpp"
#include "elim_internal.hpp"

namespace bcode {

using detail::forward_assign;
using detail::kNegInf;
using detail::latest_position;
using detail::position_map;

namespace {

// Routes a generated/restricted function: scalars accumulate, everything else
// drops into the bucket of its latest-in-ordering variable.
void route(Factor f, std::vector<Bucket>& buckets, const std::vector<int>& pos, bool log_domain,
           double& scalar_log) {
  if (f.scope.empty()) {
    double x = f.table[0];
    if (log_domain)
      scalar_log += x;
    else
      scalar_log += x > 0.0 ? std::log(x) : kNegInf;
    return;
  }
  buckets[static_cast<std::size_t>(latest_position(f, pos))].factors.push_back(std::move(f));
}

std::size_t eliminated_table_size(const std::vector<Factor>& factors, int variable) {
  std::size_t total = product_table_size(factors);
  for (const Factor& f : factors) {
    int p = f.position_of(variable);
    if (p >= 0) return total / static_cast<std::size_t>(f.cards[static_cast<std::size_t>(p)]);
  }
  return total;
}

void track(EliminationTrace* trace, const Factor& generated) {
  if (!trace) return;
  trace->max_generated_scope = std::max(trace->max_generated_scope, generated.arity());
  trace->max_generated_entries = std::max(trace->max_generated_entries, generated.size());
}

}  // namespace

std::vector<Bucket> partition_buckets(const BeliefNetwork& net, const Ordering& ordering,
                                      const Evidence& evidence) {
  validate_evidence(net, evidence);
  const std::vector<int> pos = position_map(net, ordering);
  const int n = net.size();

  std::vector<Bucket> buckets(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    buckets[static_cast<std::size_t>(k)].variable = ordering.sequence[static_cast<std::size_t>(k)];
  for (const auto& [v, value] : evidence.assignments)
    buckets[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])].hard_value = value;

  for (int v = 0; v < n; ++v) {
    const Factor& cpt = net.cpt(v);
    buckets[static_cast<std::size_t>(latest_position(cpt, pos))].factors.push_back(cpt);
  }
  for (const Factor& f : evidence.likelihoods)
    buckets[static_cast<std::size_t>(latest_position(f, pos))].factors.push_back(f);
  return buckets;
}

MpeResult elim_mpe(const BeliefNetwork& net, const Ordering& ordering, const Evidence& evidence,
                   const ElimOptions& options, EliminationTrace* trace) {
  const std::vector<int> pos = position_map(net, ordering);
  std::vector<Bucket> buckets = partition_buckets(net, ordering, evidence);
  for (Bucket& b : buckets)
    for (Factor& f : b.factors) f = factor_log(f);

  const int n = net.size();
  double scalar_log = 0.0;

  for (int p = n - 1; p >= 0; --p) {
    Bucket& b = buckets[static_cast<std::size_t>(p)];
    if (b.hard_value) {
      // Observation: instantiate the bucket variable in every function.
      for (std::size_t i = 0; i < b.factors.size(); ++i)
        route(factor_restrict(b.factors[i], b.variable, *b.hard_value), buckets, pos, true,
              scalar_log);
      continue;
    }
    if (b.factors.empty()) continue;
    if (eliminated_table_size(b.factors, b.variable) > options.max_table_entries)
      throw OutOfMemoryBudget("bucket of variable " + std::to_string(b.variable) +
                              " would generate a function over the table budget");
    Factor h = factor_eliminate(factor_logsum(b.factors), b.variable, Reduce::Max);
    track(trace, h);
    route(std::move(h), buckets, pos, true, scalar_log);
  }

  if (std::isinf(scalar_log))
    throw ZeroEvidenceProbability("the evidence has probability zero under the network");

  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  forward_assign(buckets, net, n, assignment);

  MpeResult result;
  result.log_probability = scalar_log;
  for (int v = 0; v < n; ++v)
    if (!evidence.observed(v)) result.assignment[v] = assignment[static_cast<std::size_t>(v)];
  if (trace) {
    trace->ordering = ordering;
    trace->buckets = std::move(buckets);
    trace->scalar_log = scalar_log;
  }
  return result;
}

namespace {

// Sum-eliminates `variable` from the bucket product in the linear domain.
// The generated table is rescaled by its maximum to keep long chains from
// underflowing; the scale is accumulated in log_scale.
Factor sum_out_rescaled(const std::vector<Factor>& factors, int variable,
                        const ElimOptions& options, double& log_scale) {
  if (eliminated_table_size(factors, variable) > options.max_table_entries)
    throw OutOfMemoryBudget("bucket of variable " + std::to_string(variable) +
                            " would generate a function over the table budget");
  Factor h = factor_eliminate(factor_product(factors), variable, Reduce::Sum);
  double peak = 0.0;
  for (double x : h.table) peak = std::max(peak, x);
  if (peak <= 0.0)
    throw ZeroEvidenceProbability("the evidence has probability zero under the network");
  for (double& x : h.table) x /= peak;
  log_scale += std::log(peak);
  return h;
}

}  // namespace

std::vector<double> elim_bel(const BeliefNetwork& net, const Ordering& ordering,
                             const Evidence& evidence, int query, const ElimOptions& options) {
  if (query < 0 || query >= net.size()) throw InvalidParams("query variable id out of range");
  if (evidence.observed(query)) throw InvalidParams("query variable must be unobserved");
  if (ordering.sequence.empty() || ordering.sequence.front() != query)
    throw OrderingMismatch("query variable must be first in the ordering");

  const std::vector<int> pos = position_map(net, ordering);
  std::vector<Bucket> buckets = partition_buckets(net, ordering, evidence);
  const int n = net.size();
  double log_scale = 0.0;  // absorbed scales; the posterior normalizes them away

  for (int p = n - 1; p >= 1; --p) {
    Bucket& b = buckets[static_cast<std::size_t>(p)];
    if (b.hard_value) {
      for (std::size_t i = 0; i < b.factors.size(); ++i)
        route(factor_restrict(b.factors[i], b.variable, *b.hard_value), buckets, pos, false,
              log_scale);
      continue;
    }
    if (b.factors.empty()) continue;
    route(sum_out_rescaled(b.factors, b.variable, options, log_scale), buckets, pos, false,
          log_scale);
  }
  if (std::isinf(log_scale))
    throw ZeroEvidenceProbability("the evidence has probability zero under the network");

  // Bucket 1 holds only functions over the query.
  std::vector<double> posterior(static_cast<std::size_t>(net.cardinality(query)), 1.0);
  for (const Factor& f : buckets[0].factors)
    for (std::size_t t = 0; t < posterior.size(); ++t) posterior[t] *= f.table[t];
  double total = 0.0;
  for (double x : posterior) total += x;
  if (total <= 0.0)
    throw ZeroEvidenceProbability("the evidence has probability zero under the network");
  for (double& x : posterior) x /= total;
  return posterior;
}

MapResult elim_map(const BeliefNetwork& net, const Ordering& ordering, const Evidence& evidence,
                   const std::set<int>& hypothesis, const ElimOptions& options) {
  const int n = net.size();
  const int k = static_cast<int>(hypothesis.size());
  if (k < 1 || k > n) throw InvalidParams("hypothesis must be a nonempty variable subset");
  const std::vector<int> pos = position_map(net, ordering);
  for (int i = 0; i < k; ++i)
    if (!hypothesis.count(ordering.sequence[static_cast<std::size_t>(i)]))
      throw OrderingViolatesHypothesisPrefix(
          "hypothesis variables must occupy the first positions of the ordering");

  std::vector<Bucket> buckets = partition_buckets(net, ordering, evidence);
  double log_scale = 0.0;

  // Sum phase over the non-hypothesis suffix (linear domain, rescaled).
  for (int p = n - 1; p >= k; --p) {
    Bucket& b = buckets[static_cast<std::size_t>(p)];
    if (b.hard_value) {
      for (std::size_t i = 0; i < b.factors.size(); ++i)
        route(factor_restrict(b.factors[i], b.variable, *b.hard_value), buckets, pos, false,
              log_scale);
      continue;
    }
    if (b.factors.empty()) continue;
    route(sum_out_rescaled(b.factors, b.variable, options, log_scale), buckets, pos, false,
          log_scale);
  }
  if (std::isinf(log_scale))
    throw ZeroEvidenceProbability("the evidence has probability zero under the network");

  // Max phase over the hypothesis prefix (log domain).
  for (int p = 0; p < k; ++p)
    for (Factor& f : buckets[static_cast<std::size_t>(p)].factors) f = factor_log(f);
  double scalar_log = 0.0;
  for (int p = k - 1; p >= 0; --p) {
    Bucket& b = buckets[static_cast<std::size_t>(p)];
    if (b.hard_value) {
      for (std::size_t i = 0; i < b.factors.size(); ++i)
        route(factor_restrict(b.factors[i], b.variable, *b.hard_value), buckets, pos, true,
              scalar_log);
      continue;
    }
    if (b.factors.empty()) continue;
    if (eliminated_table_size(b.factors, b.variable) > options.max_table_entries)
      throw OutOfMemoryBudget("bucket of variable " + std::to_string(b.variable) +
                              " would generate a function over the table budget");
    Factor h = factor_eliminate(factor_logsum(b.factors), b.variable, Reduce::Max);
    route(std::move(h), buckets, pos, true, scalar_log);
  }
  if (std::isinf(scalar_log))
    throw ZeroEvidenceProbability("the evidence has probability zero under the network");

  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  forward_assign(buckets, net, k, assignment);

  MapResult result;
  result.log_probability = scalar_log + log_scale;
  for (int i = 0; i < k; ++i) {
    int v = ordering.sequence[static_cast<std::size_t>(i)];
    if (!evidence.observed(v)) result.assignment[v] = assignment[static_cast<std::size_t>(v)];
  }
  return result;
}

}  // namespace bcode
