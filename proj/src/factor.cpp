#include "bcode/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "bcode/errors.hpp"

namespace bcode {

namespace {

constexpr std::size_t kSizeGuard = std::numeric_limits<std::size_t>::max() / 2;

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kSizeGuard / a) return kSizeGuard;
  return a * b;
}

}  // namespace

Factor::Factor(std::vector<int> scope_in, std::vector<int> cards_in, std::vector<double> table_in)
    : scope(std::move(scope_in)), cards(std::move(cards_in)), table(std::move(table_in)) {
  if (scope.size() != cards.size())
    throw TableSizeMismatch("factor scope and cardinality lists differ in length");
  std::size_t want = 1;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (cards[i] < 1) throw InvalidParams("factor cardinality must be >= 1");
    for (std::size_t j = i + 1; j < scope.size(); ++j)
      if (scope[i] == scope[j])
        throw InvalidParams("duplicate variable " + std::to_string(scope[i]) + " in factor scope");
    want = checked_mul(want, static_cast<std::size_t>(cards[i]));
  }
  if (table.size() != want)
    throw TableSizeMismatch("factor table has " + std::to_string(table.size()) +
                            " entries, scope requires " + std::to_string(want));
}

Factor Factor::scalar(double value) {
  Factor f;
  f.table.assign(1, value);
  return f;
}

int Factor::position_of(int v) const {
  for (std::size_t i = 0; i < scope.size(); ++i)
    if (scope[i] == v) return static_cast<int>(i);
  return -1;
}

double Factor::value_at(std::span<const int> assignment) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    int v = scope[i];
    int val = assignment[static_cast<std::size_t>(v)];
    if (val < 0 || val >= cards[i])
      throw VariableNotInScope("variable " + std::to_string(v) + " unassigned or out of range");
    idx = idx * static_cast<std::size_t>(cards[i]) + static_cast<std::size_t>(val);
  }
  return table[idx];
}

std::size_t product_table_size(std::span<const Factor> factors) {
  std::map<int, int> cards;
  for (const Factor& f : factors)
    for (std::size_t i = 0; i < f.scope.size(); ++i) cards.emplace(f.scope[i], f.cards[i]);
  std::size_t total = 1;
  for (const auto& [v, c] : cards) total = checked_mul(total, static_cast<std::size_t>(c));
  return total;
}

namespace {

// Shared product/logsum core: combines factors over the union scope (sorted
// by id), walking the output table with an odometer and keeping one running
// index per input factor.
template <bool kAdd>
Factor combine_factors(std::span<const Factor> factors) {
  std::map<int, int> card_of;
  for (const Factor& f : factors) {
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
      auto [it, inserted] = card_of.emplace(f.scope[i], f.cards[i]);
      if (!inserted && it->second != f.cards[i])
        throw CardinalityMismatch("variable " + std::to_string(f.scope[i]) +
                                  " has inconsistent cardinalities across factors");
    }
  }

  Factor out;
  out.scope.reserve(card_of.size());
  out.cards.reserve(card_of.size());
  for (const auto& [v, c] : card_of) {
    out.scope.push_back(v);
    out.cards.push_back(c);
  }
  const int m = out.arity();

  std::size_t total = 1;
  for (int d = 0; d < m; ++d) total = checked_mul(total, static_cast<std::size_t>(out.cards[d]));
  if (total >= kSizeGuard) throw OutOfMemoryBudget("product table size overflows the size guard");
  out.table.assign(total, kAdd ? 0.0 : 1.0);

  // stride[f][d]: how much factor f's table index moves when output digit d
  // increments (0 if the variable is not in f's scope).
  const std::size_t nf = factors.size();
  std::vector<std::vector<std::size_t>> stride(nf, std::vector<std::size_t>(m, 0));
  for (std::size_t fi = 0; fi < nf; ++fi) {
    const Factor& f = factors[fi];
    std::size_t s = 1;
    std::vector<std::size_t> local(f.scope.size());
    for (int i = f.arity() - 1; i >= 0; --i) {
      local[static_cast<std::size_t>(i)] = s;
      s *= static_cast<std::size_t>(f.cards[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < f.arity(); ++i) {
      int d = static_cast<int>(
          std::lower_bound(out.scope.begin(), out.scope.end(), f.scope[static_cast<std::size_t>(i)]) -
          out.scope.begin());
      stride[fi][static_cast<std::size_t>(d)] = local[static_cast<std::size_t>(i)];
    }
  }

  std::vector<int> digit(static_cast<std::size_t>(m), 0);
  std::vector<std::size_t> idx(nf, 0);
  for (std::size_t o = 0;;) {
    double acc = kAdd ? 0.0 : 1.0;
    for (std::size_t fi = 0; fi < nf; ++fi) {
      if constexpr (kAdd)
        acc += factors[fi].table[idx[fi]];
      else
        acc *= factors[fi].table[idx[fi]];
    }
    out.table[o] = acc;
    if (++o == total) break;
    int d = m - 1;
    for (;;) {
      ++digit[static_cast<std::size_t>(d)];
      for (std::size_t fi = 0; fi < nf; ++fi) idx[fi] += stride[fi][static_cast<std::size_t>(d)];
      if (digit[static_cast<std::size_t>(d)] < out.cards[static_cast<std::size_t>(d)]) break;
      digit[static_cast<std::size_t>(d)] = 0;
      for (std::size_t fi = 0; fi < nf; ++fi)
        idx[fi] -= stride[fi][static_cast<std::size_t>(d)] *
                   static_cast<std::size_t>(out.cards[static_cast<std::size_t>(d)]);
      --d;
    }
  }
  return out;
}

}  // namespace

Factor factor_product(std::span<const Factor> factors) { return combine_factors<false>(factors); }

Factor factor_product(const Factor& a, const Factor& b) {
  const Factor fs[2] = {a, b};
  return combine_factors<false>(std::span<const Factor>(fs, 2));
}

Factor factor_logsum(std::span<const Factor> factors) { return combine_factors<true>(factors); }

Factor factor_eliminate(const Factor& f, int v, Reduce op) {
  int pos = f.position_of(v);
  if (pos < 0) throw VariableNotInScope("variable " + std::to_string(v) + " not in factor scope");
  const std::size_t c = static_cast<std::size_t>(f.cards[static_cast<std::size_t>(pos)]);
  std::size_t suffix = 1;
  for (int i = pos + 1; i < f.arity(); ++i)
    suffix *= static_cast<std::size_t>(f.cards[static_cast<std::size_t>(i)]);
  const std::size_t prefix = f.table.size() / (c * suffix);

  Factor out;
  out.scope = f.scope;
  out.cards = f.cards;
  out.scope.erase(out.scope.begin() + pos);
  out.cards.erase(out.cards.begin() + pos);
  out.table.resize(prefix * suffix);

  for (std::size_t p = 0; p < prefix; ++p) {
    const std::size_t in_base = p * c * suffix;
    const std::size_t out_base = p * suffix;
    for (std::size_t s = 0; s < suffix; ++s) {
      double acc = f.table[in_base + s];
      for (std::size_t t = 1; t < c; ++t) {
        double x = f.table[in_base + t * suffix + s];
        if (op == Reduce::Max)
          acc = std::max(acc, x);
        else
          acc += x;
      }
      out.table[out_base + s] = acc;
    }
  }
  return out;
}

Factor factor_restrict(const Factor& f, int v, int value) {
  int pos = f.position_of(v);
  if (pos < 0) throw VariableNotInScope("variable " + std::to_string(v) + " not in factor scope");
  const std::size_t c = static_cast<std::size_t>(f.cards[static_cast<std::size_t>(pos)]);
  if (value < 0 || static_cast<std::size_t>(value) >= c)
    throw InvalidParams("restricted value out of range");
  std::size_t suffix = 1;
  for (int i = pos + 1; i < f.arity(); ++i)
    suffix *= static_cast<std::size_t>(f.cards[static_cast<std::size_t>(i)]);
  const std::size_t prefix = f.table.size() / (c * suffix);

  Factor out;
  out.scope = f.scope;
  out.cards = f.cards;
  out.scope.erase(out.scope.begin() + pos);
  out.cards.erase(out.cards.begin() + pos);
  out.table.resize(prefix * suffix);
  for (std::size_t p = 0; p < prefix; ++p)
    for (std::size_t s = 0; s < suffix; ++s)
      out.table[p * suffix + s] =
          f.table[p * c * suffix + static_cast<std::size_t>(value) * suffix + s];
  return out;
}

Factor factor_log(const Factor& f) {
  Factor out = f;
  for (double& x : out.table)
    x = x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace bcode
