#pragma once

// Shared generators for the property-style tests: random DAG networks with
// strictly positive CPTs, random polytrees, and random evidence.

#include <algorithm>
#include <cmath>
#include <vector>

#include "bcode/brute_force.hpp"
#include "bcode/graph.hpp"
#include "bcode/network.hpp"
#include "bcode/rng.hpp"

namespace bcode::testing {

inline std::vector<double> random_cpt_table(Rng& rng, const std::vector<int>& parent_cards,
                                            int card) {
  std::size_t rows = 1;
  for (int c : parent_cards) rows *= static_cast<std::size_t>(c);
  std::vector<double> table;
  table.reserve(rows * static_cast<std::size_t>(card));
  for (std::size_t r = 0; r < rows; ++r) {
    double total = 0.0;
    std::vector<double> row(static_cast<std::size_t>(card));
    for (double& x : row) {
      x = rng.uniform(0.05, 1.0);
      total += x;
    }
    for (double x : row) table.push_back(x / total);
  }
  return table;
}

// Random DAG over n variables; each variable picks up to max_parents parents
// among the earlier ids.
inline BeliefNetwork random_network(Rng& rng, int n, int max_parents = 3, int max_card = 2) {
  std::vector<Variable> variables(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> tables(static_cast<std::size_t>(n));
  std::vector<int> cards(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    cards[static_cast<std::size_t>(v)] = max_card <= 2 ? 2 : rng.uniform_int(2, max_card);
    variables[static_cast<std::size_t>(v)] = {v, cards[static_cast<std::size_t>(v)],
                                              VarKind::Generic};
    if (v > 0) {
      int np = rng.uniform_int(0, std::min(v, max_parents));
      std::vector<int> pool(static_cast<std::size_t>(v));
      for (int i = 0; i < v; ++i) pool[static_cast<std::size_t>(i)] = i;
      for (int j = 0; j < np; ++j) {
        int pick = j + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(v - j)));
        std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
      }
      parents[static_cast<std::size_t>(v)].assign(pool.begin(), pool.begin() + np);
      std::sort(parents[static_cast<std::size_t>(v)].begin(),
                parents[static_cast<std::size_t>(v)].end());
    }
    std::vector<int> pcards;
    for (int p : parents[static_cast<std::size_t>(v)])
      pcards.push_back(cards[static_cast<std::size_t>(p)]);
    tables[static_cast<std::size_t>(v)] =
        random_cpt_table(rng, pcards, cards[static_cast<std::size_t>(v)]);
  }
  return build_network(std::move(variables), std::move(parents), std::move(tables));
}

// Random polytree: the undirected skeleton is a random tree, each edge gets a
// random direction.
inline BeliefNetwork random_polytree(Rng& rng, int n, int max_card = 3) {
  std::vector<int> cards(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) cards[static_cast<std::size_t>(v)] = rng.uniform_int(2, max_card);
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(n));
  for (int v = 1; v < n; ++v) {
    int other = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(v)));
    if (rng.bit())
      parents[static_cast<std::size_t>(v)].push_back(other);
    else
      parents[static_cast<std::size_t>(other)].push_back(v);
  }
  std::vector<Variable> variables(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> tables(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    variables[static_cast<std::size_t>(v)] = {v, cards[static_cast<std::size_t>(v)],
                                              VarKind::Generic};
    std::sort(parents[static_cast<std::size_t>(v)].begin(),
              parents[static_cast<std::size_t>(v)].end());
    std::vector<int> pcards;
    for (int p : parents[static_cast<std::size_t>(v)])
      pcards.push_back(cards[static_cast<std::size_t>(p)]);
    tables[static_cast<std::size_t>(v)] =
        random_cpt_table(rng, pcards, cards[static_cast<std::size_t>(v)]);
  }
  return build_network(std::move(variables), std::move(parents), std::move(tables));
}

// Hard evidence on ~p_hard of the variables and soft likelihoods on ~p_soft
// of the rest; likelihood entries are strictly positive.
inline Evidence random_evidence(Rng& rng, const BeliefNetwork& net, double p_hard = 0.15,
                                double p_soft = 0.15) {
  Evidence evidence;
  for (int v = 0; v < net.size(); ++v) {
    double roll = rng.uniform01();
    if (roll < p_hard) {
      evidence.assignments[v] = static_cast<int>(
          rng.uniform_below(static_cast<std::uint64_t>(net.cardinality(v))));
    } else if (roll < p_hard + p_soft) {
      std::vector<double> like(static_cast<std::size_t>(net.cardinality(v)));
      for (double& x : like) x = rng.uniform(0.1, 1.0);
      evidence.likelihoods.emplace_back(std::vector<int>{v},
                                        std::vector<int>{net.cardinality(v)}, std::move(like));
    }
  }
  // Keep at least one variable free so queries exist.
  if (static_cast<int>(evidence.assignments.size()) == net.size())
    evidence.assignments.erase(evidence.assignments.begin());
  return evidence;
}

inline int first_unobserved(const BeliefNetwork& net, const Evidence& evidence) {
  for (int v = 0; v < net.size(); ++v)
    if (!evidence.observed(v)) return v;
  return -1;
}

inline Ordering min_fill_ordering(const BeliefNetwork& net) {
  return find_ordering(moral_graph(net), OrderingHeuristic::MinFill);
}

inline bool close_rel(double a, double b, double tol) {
  double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace bcode::testing
