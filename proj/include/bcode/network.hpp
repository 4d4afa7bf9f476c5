#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bcode/factor.hpp"

namespace bcode {

enum class VarKind { InformationBit, ParityBit, Generic };

std::string to_string(VarKind kind);
VarKind var_kind_from_string(const std::string& token);

struct Variable {
  int id = 0;
  int cardinality = 2;
  VarKind kind = VarKind::Generic;
};

// Immutable discrete belief network: a DAG over 0..n-1 with one CPT per
// variable. CPT scope order is (parents..., child), so for every parent
// configuration the child entries form one contiguous table row.
class BeliefNetwork {
 public:
  BeliefNetwork() = default;

  int size() const { return static_cast<int>(variables_.size()); }
  int cardinality(int v) const { return variables_[static_cast<std::size_t>(v)].cardinality; }
  const Variable& variable(int v) const { return variables_[static_cast<std::size_t>(v)]; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<int>& parents(int v) const { return parents_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& children(int v) const { return children_[static_cast<std::size_t>(v)]; }
  const Factor& cpt(int v) const { return cpts_[static_cast<std::size_t>(v)]; }

 private:
  friend BeliefNetwork build_network(std::vector<Variable> variables,
                                     std::vector<std::vector<int>> parent_lists,
                                     std::vector<std::vector<double>> cpt_tables);
  std::vector<Variable> variables_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<Factor> cpts_;
};

// Validates and assembles a network. cpt_tables[v] is the dense row-major
// table over scope (parents of v..., v).
BeliefNetwork build_network(std::vector<Variable> variables,
                            std::vector<std::vector<int>> parent_lists,
                            std::vector<std::vector<double>> cpt_tables);

// Hard assignments plus soft evidence expressed as unary likelihood factors.
// A variable may carry at most one of the two.
struct Evidence {
  std::map<int, int> assignments;
  std::vector<Factor> likelihoods;

  bool observed(int v) const { return assignments.count(v) != 0; }
};

void validate_evidence(const BeliefNetwork& net, const Evidence& evidence);

// P(x) * prod of likelihoods at x, for a full assignment (indexed by id).
// Throws EvidenceContradiction if x disagrees with a hard assignment.
double joint_probability(const BeliefNetwork& net, std::span<const int> assignment,
                         const Evidence& evidence);

// Log-domain variant (-inf for zero-probability assignments).
double log_joint_probability(const BeliefNetwork& net, std::span<const int> assignment,
                             const Evidence& evidence);

}  // namespace bcode
