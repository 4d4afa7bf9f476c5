#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bcode/graph.hpp"
#include "bcode/network.hpp"

namespace bcode {

// One elimination bucket: the functions whose latest-in-ordering variable is
// `variable`, plus the observed value when that variable is hard evidence.
struct Bucket {
  int variable = -1;
  std::vector<Factor> factors;
  std::optional<int> hard_value;
};

struct ElimOptions {
  // Per-generated-function table budget; exceeding it aborts the run.
  std::size_t max_table_entries = std::size_t{1} << 26;
};

// Post-run record of the backward pass: buckets retain every function they
// held (original and received), scalar_log accumulates the functions whose
// scope emptied out.
struct EliminationTrace {
  Ordering ordering;
  std::vector<Bucket> buckets;
  double scalar_log = 0.0;
  int max_generated_scope = 0;
  std::size_t max_generated_entries = 0;
};

struct MpeResult {
  std::map<int, int> assignment;  // unobserved variables only
  double log_probability = 0.0;   // log of the joint with the evidence
};

struct MapResult {
  std::map<int, int> assignment;  // unobserved hypothesis variables
  double log_probability = 0.0;   // log max over hypothesis of sum over the rest
};

// Places every CPT and soft-evidence likelihood into the bucket of its
// latest-in-ordering scope variable; hard observations annotate their bucket.
std::vector<Bucket> partition_buckets(const BeliefNetwork& net, const Ordering& ordering,
                                      const Evidence& evidence);

// Exact MPE by max-product variable elimination (log domain), followed by a
// forward pass that re-maximizes each bucket's functions along the ordering.
MpeResult elim_mpe(const BeliefNetwork& net, const Ordering& ordering, const Evidence& evidence,
                   const ElimOptions& options = {}, EliminationTrace* trace = nullptr);

// Exact posterior of `query`, which must be first in the ordering. Runs
// sum-product elimination in the linear domain with per-bucket rescaling.
std::vector<double> elim_bel(const BeliefNetwork& net, const Ordering& ordering,
                             const Evidence& evidence, int query,
                             const ElimOptions& options = {});

// Exact MAP over `hypothesis`, which must occupy a prefix of the ordering:
// sum-elimination over the suffix buckets, max-elimination over the prefix.
MapResult elim_map(const BeliefNetwork& net, const Ordering& ordering, const Evidence& evidence,
                   const std::set<int>& hypothesis, const ElimOptions& options = {});

}  // namespace bcode
