#include "bcode/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "bcode/errors.hpp"

namespace bcode {

std::string to_string(VarKind kind) {
  switch (kind) {
    case VarKind::InformationBit:
      return "information-bit";
    case VarKind::ParityBit:
      return "parity-bit";
    default:
      return "generic";
  }
}

VarKind var_kind_from_string(const std::string& token) {
  if (token == "information-bit") return VarKind::InformationBit;
  if (token == "parity-bit") return VarKind::ParityBit;
  if (token == "generic") return VarKind::Generic;
  throw ParseError("unknown variable kind '" + token + "'");
}

BeliefNetwork build_network(std::vector<Variable> variables,
                            std::vector<std::vector<int>> parent_lists,
                            std::vector<std::vector<double>> cpt_tables) {
  const int n = static_cast<int>(variables.size());
  if (parent_lists.size() != variables.size() || cpt_tables.size() != variables.size())
    throw InvalidParams("variables, parent lists and CPT tables must have equal counts");

  for (int v = 0; v < n; ++v) {
    const Variable& var = variables[static_cast<std::size_t>(v)];
    if (var.id != v) throw InvalidParams("variable ids must be the contiguous range 0..n-1");
    if (var.cardinality < 2) throw InvalidParams("variable cardinality must be >= 2");
  }

  for (int v = 0; v < n; ++v) {
    const auto& pa = parent_lists[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < pa.size(); ++i) {
      if (pa[i] < 0 || pa[i] >= n) throw InvalidParams("parent id out of range");
      if (pa[i] == v) throw CycleDetected("variable " + std::to_string(v) + " is its own parent");
      for (std::size_t j = i + 1; j < pa.size(); ++j)
        if (pa[i] == pa[j]) throw InvalidParams("duplicate parent in list");
    }
  }

  // Kahn's algorithm over the parent relation.
  {
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v)
      indegree[static_cast<std::size_t>(v)] =
          static_cast<int>(parent_lists[static_cast<std::size_t>(v)].size());
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
      for (int p : parent_lists[static_cast<std::size_t>(v)])
        out[static_cast<std::size_t>(p)].push_back(v);
    std::queue<int> ready;
    for (int v = 0; v < n; ++v)
      if (indegree[static_cast<std::size_t>(v)] == 0) ready.push(v);
    int seen = 0;
    while (!ready.empty()) {
      int v = ready.front();
      ready.pop();
      ++seen;
      for (int c : out[static_cast<std::size_t>(v)])
        if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
    if (seen != n) throw CycleDetected("parent relation contains a directed cycle");
  }

  BeliefNetwork net;
  net.variables_ = std::move(variables);
  net.parents_ = std::move(parent_lists);
  net.children_.assign(static_cast<std::size_t>(n), {});
  net.cpts_.reserve(static_cast<std::size_t>(n));

  for (int v = 0; v < n; ++v) {
    std::vector<int> scope = net.parents_[static_cast<std::size_t>(v)];
    scope.push_back(v);
    std::vector<int> cards;
    cards.reserve(scope.size());
    std::size_t want = 1;
    for (int s : scope) {
      cards.push_back(net.variables_[static_cast<std::size_t>(s)].cardinality);
      want *= static_cast<std::size_t>(cards.back());
    }
    auto& table = cpt_tables[static_cast<std::size_t>(v)];
    if (table.size() != want)
      throw TableSizeMismatch("CPT of variable " + std::to_string(v) + " has " +
                              std::to_string(table.size()) + " entries, expected " +
                              std::to_string(want));
    for (double x : table)
      if (!(x >= 0.0) || !std::isfinite(x))
        throw NegativeProbability("CPT of variable " + std::to_string(v) +
                                  " has a negative or non-finite entry");
    const std::size_t c = static_cast<std::size_t>(net.cardinality(v));
    for (std::size_t row = 0; row < want; row += c) {
      double sum = 0.0;
      for (std::size_t j = 0; j < c; ++j) sum += table[row + j];
      if (std::abs(sum - 1.0) > 1e-9)
        throw CptNotNormalized("CPT row of variable " + std::to_string(v) + " sums to " +
                               std::to_string(sum));
    }
    net.cpts_.emplace_back(std::move(scope), std::move(cards), std::move(table));
  }

  for (int v = 0; v < n; ++v)
    for (int p : net.parents_[static_cast<std::size_t>(v)])
      net.children_[static_cast<std::size_t>(p)].push_back(v);

  return net;
}

void validate_evidence(const BeliefNetwork& net, const Evidence& evidence) {
  for (const auto& [v, value] : evidence.assignments) {
    if (v < 0 || v >= net.size()) throw InvalidParams("evidence variable id out of range");
    if (value < 0 || value >= net.cardinality(v))
      throw InvalidParams("evidence value out of range for variable " + std::to_string(v));
  }
  for (const Factor& f : evidence.likelihoods) {
    if (f.arity() != 1) throw InvalidParams("soft-evidence likelihood factors must be unary");
    int v = f.scope[0];
    if (v < 0 || v >= net.size()) throw InvalidParams("likelihood variable id out of range");
    if (f.cards[0] != net.cardinality(v))
      throw CardinalityMismatch("likelihood vector length differs from variable cardinality");
    if (evidence.observed(v))
      throw InvalidParams("variable " + std::to_string(v) +
                          " carries both a hard assignment and a likelihood");
    for (double x : f.table)
      if (!(x >= 0.0) || !std::isfinite(x))
        throw NegativeProbability("likelihood entries must be finite and nonnegative");
  }
}

namespace {

void check_assignment(const BeliefNetwork& net, std::span<const int> assignment,
                      const Evidence& evidence) {
  if (assignment.size() != static_cast<std::size_t>(net.size()))
    throw LengthMismatch("assignment must cover every variable");
  for (int v = 0; v < net.size(); ++v) {
    int val = assignment[static_cast<std::size_t>(v)];
    if (val < 0 || val >= net.cardinality(v))
      throw InvalidParams("assignment value out of range for variable " + std::to_string(v));
  }
  for (const auto& [v, value] : evidence.assignments)
    if (assignment[static_cast<std::size_t>(v)] != value)
      throw EvidenceContradiction("assignment contradicts hard evidence on variable " +
                                  std::to_string(v));
}

}  // namespace

double log_joint_probability(const BeliefNetwork& net, std::span<const int> assignment,
                             const Evidence& evidence) {
  check_assignment(net, assignment, evidence);
  double log_p = 0.0;
  for (int v = 0; v < net.size(); ++v) {
    double x = net.cpt(v).value_at(assignment);
    log_p += x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
  }
  for (const Factor& f : evidence.likelihoods) {
    double x = f.value_at(assignment);
    log_p += x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
  }
  return log_p;
}

double joint_probability(const BeliefNetwork& net, std::span<const int> assignment,
                         const Evidence& evidence) {
  check_assignment(net, assignment, evidence);
  double p = 1.0;
  for (int v = 0; v < net.size(); ++v) p *= net.cpt(v).value_at(assignment);
  for (const Factor& f : evidence.likelihoods) p *= f.value_at(assignment);
  return p;
}

}  // namespace bcode
