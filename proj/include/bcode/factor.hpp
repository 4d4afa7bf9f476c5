#pragma once

#include <span>
#include <vector>

namespace bcode {

// A nonnegative function over an ordered scope of discrete variables, stored
// as a dense row-major table (first scope variable is the most significant
// index digit). A scalar is a factor with empty scope and a 1-entry table.
//
// The same container is reused for log-space tables during max-product
// elimination; there entries may be -inf and are combined additively.
struct Factor {
  std::vector<int> scope;    // variable ids, no duplicates
  std::vector<int> cards;    // per-scope-position cardinality
  std::vector<double> table;

  Factor() = default;
  Factor(std::vector<int> scope_in, std::vector<int> cards_in, std::vector<double> table_in);

  static Factor scalar(double value);

  int arity() const { return static_cast<int>(scope.size()); }
  std::size_t size() const { return table.size(); }

  // Position of variable v in the scope, or -1.
  int position_of(int v) const;
  bool mentions(int v) const { return position_of(v) >= 0; }

  // Table value at a global assignment (indexed by variable id). Every scope
  // variable must be assigned (>= 0).
  double value_at(std::span<const int> assignment) const;
};

enum class Reduce { Max, Sum };

// Entry-wise product over the union scope (sorted by variable id). The empty
// product is the scalar factor 1.
Factor factor_product(std::span<const Factor> factors);
Factor factor_product(const Factor& a, const Factor& b);

// Log-space product: entries are added instead of multiplied; the empty
// combination is the scalar 0 (= log 1).
Factor factor_logsum(std::span<const Factor> factors);

// Removes v from the scope by max- or sum-reducing over its values.
Factor factor_eliminate(const Factor& f, int v, Reduce op);

// Fixes v := value and drops it from the scope.
Factor factor_restrict(const Factor& f, int v, int value);

// Converts a linear-domain factor to log domain (log 0 -> -inf).
Factor factor_log(const Factor& f);

// Number of table entries a product over `factors` would need; saturates at
// SIZE_MAX/2 to keep callers' budget comparisons safe.
std::size_t product_table_size(std::span<const Factor> factors);

}  // namespace bcode
