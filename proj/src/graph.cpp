#include "bcode/graph.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "bcode/errors.hpp"

namespace bcode {

UndirectedGraph::UndirectedGraph(int n) : n_(n), words_((n + 63) / 64) {
  if (n < 0) throw InvalidParams("graph node count must be nonnegative");
  bits_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(words_), 0);
}

void UndirectedGraph::add_edge(int a, int b) {
  if (a < 0 || a >= n_ || b < 0 || b >= n_) throw InvalidParams("edge endpoint out of range");
  if (a == b) throw InvalidParams("self-loops are not allowed");
  bits_[static_cast<std::size_t>(a) * words_ + b / 64] |= 1ULL << (b % 64);
  bits_[static_cast<std::size_t>(b) * words_ + a / 64] |= 1ULL << (a % 64);
}

bool UndirectedGraph::has_edge(int a, int b) const {
  if (a < 0 || a >= n_ || b < 0 || b >= n_ || a == b) return false;
  return (bits_[static_cast<std::size_t>(a) * words_ + b / 64] >> (b % 64)) & 1ULL;
}

int UndirectedGraph::degree(int v) const {
  int d = 0;
  for (int w = 0; w < words_; ++w)
    d += std::popcount(bits_[static_cast<std::size_t>(v) * words_ + w]);
  return d;
}

std::vector<int> UndirectedGraph::neighbors(int v) const {
  std::vector<int> out;
  for (int w = 0; w < words_; ++w) {
    std::uint64_t word = bits_[static_cast<std::size_t>(v) * words_ + w];
    while (word) {
      int b = std::countr_zero(word);
      out.push_back(w * 64 + b);
      word &= word - 1;
    }
  }
  return out;
}

UndirectedGraph moral_graph(const BeliefNetwork& net) {
  UndirectedGraph g(net.size());
  for (int v = 0; v < net.size(); ++v) {
    const auto& pa = net.parents(v);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      g.add_edge(pa[i], v);
      for (std::size_t j = i + 1; j < pa.size(); ++j) g.add_edge(pa[i], pa[j]);
    }
  }
  return g;
}

namespace {

void check_permutation(int n, const std::vector<int>& sequence) {
  if (static_cast<int>(sequence.size()) != n)
    throw OrderingMismatch("ordering must cover all " + std::to_string(n) + " nodes");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : sequence) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
      throw OrderingMismatch("ordering is not a permutation of the node ids");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

}  // namespace

std::pair<int, int> width_along(const UndirectedGraph& g, const std::vector<int>& sequence) {
  const int n = g.size();
  check_permutation(n, sequence);
  if (n == 0) return {0, 0};

  std::vector<int> pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(sequence[static_cast<std::size_t>(i)])] = i;

  const int words = (n + 63) / 64;
  // earlier_mask[w] relative to the node being processed, rebuilt per node.
  std::vector<std::uint64_t> work = g.bits_;
  auto row = [&](int v) { return work.begin() + static_cast<std::size_t>(v) * words; };

  int width = 0;
  int induced = 0;
  std::vector<std::uint64_t> earlier(static_cast<std::size_t>(words));
  std::vector<int> members;
  for (int i = n - 1; i >= 0; --i) {
    const int v = sequence[static_cast<std::size_t>(i)];
    // Original-graph width of v.
    int w_orig = 0;
    for (int u : g.neighbors(v))
      if (pos[static_cast<std::size_t>(u)] < i) ++w_orig;
    width = std::max(width, w_orig);

    // Earlier neighbors in the working (induced) graph.
    members.clear();
    for (int w = 0; w < words; ++w) earlier[static_cast<std::size_t>(w)] = *(row(v) + w);
    for (int w = 0; w < words; ++w) {
      std::uint64_t word = earlier[static_cast<std::size_t>(w)];
      while (word) {
        int b = std::countr_zero(word);
        int u = w * 64 + b;
        if (pos[static_cast<std::size_t>(u)] < i) members.push_back(u);
        word &= word - 1;
      }
    }
    induced = std::max(induced, static_cast<int>(members.size()));
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        int x = members[a], y = members[b];
        *(row(x) + y / 64) |= 1ULL << (y % 64);
        *(row(y) + x / 64) |= 1ULL << (x % 64);
      }
  }
  return {width, induced};
}

namespace {

// Greedy elimination on a working copy; returns the elimination sequence
// (first-eliminated first).
std::vector<int> greedy_eliminate(const UndirectedGraph& g, OrderingHeuristic heuristic) {
  const int n = g.size();
  const int words = (n + 63) / 64;
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n) * static_cast<std::size_t>(words), 0);
  for (int v = 0; v < n; ++v)
    for (int u : g.neighbors(v))
      adj[static_cast<std::size_t>(v) * words + u / 64] |= 1ULL << (u % 64);

  std::vector<std::uint64_t> alive(static_cast<std::size_t>(words), 0);
  for (int v = 0; v < n; ++v) alive[static_cast<std::size_t>(v / 64)] |= 1ULL << (v % 64);

  auto row = [&](int v) { return adj.begin() + static_cast<std::size_t>(v) * words; };
  auto list_alive_neighbors = [&](int v, std::vector<int>& out) {
    out.clear();
    for (int w = 0; w < words; ++w) {
      std::uint64_t word = *(row(v) + w) & alive[static_cast<std::size_t>(w)];
      while (word) {
        int b = std::countr_zero(word);
        out.push_back(w * 64 + b);
        word &= word - 1;
      }
    }
  };

  std::vector<int> elimination;
  elimination.reserve(static_cast<std::size_t>(n));
  std::vector<int> nb;
  std::vector<char> dead(static_cast<std::size_t>(n), 0);

  for (int step = 0; step < n; ++step) {
    int best = -1;
    long long best_score = -1;
    for (int v = 0; v < n; ++v) {
      if (dead[static_cast<std::size_t>(v)]) continue;
      long long score;
      if (heuristic == OrderingHeuristic::MinDegree) {
        int d = 0;
        for (int w = 0; w < words; ++w)
          d += std::popcount(*(row(v) + w) & alive[static_cast<std::size_t>(w)]);
        score = d;
      } else {
        list_alive_neighbors(v, nb);
        long long fill = 0;
        for (std::size_t a = 0; a < nb.size(); ++a) {
          const int u = nb[a];
          for (std::size_t b = a + 1; b < nb.size(); ++b) {
            const int x = nb[b];
            if (!((*(row(u) + x / 64) >> (x % 64)) & 1ULL)) ++fill;
          }
        }
        score = fill;
      }
      if (best < 0 || score < best_score) {
        best = v;
        best_score = score;
      }
    }
    list_alive_neighbors(best, nb);
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        int x = nb[a], y = nb[b];
        *(row(x) + y / 64) |= 1ULL << (y % 64);
        *(row(y) + x / 64) |= 1ULL << (x % 64);
      }
    dead[static_cast<std::size_t>(best)] = 1;
    alive[static_cast<std::size_t>(best / 64)] &= ~(1ULL << (best % 64));
    elimination.push_back(best);
  }
  return elimination;
}

}  // namespace

Ordering find_ordering(const UndirectedGraph& g, OrderingHeuristic heuristic) {
  std::vector<int> elimination = greedy_eliminate(g, heuristic);
  std::reverse(elimination.begin(), elimination.end());
  return make_ordering(g, std::move(elimination));
}

Ordering make_ordering(const UndirectedGraph& g, std::vector<int> sequence) {
  auto [width, induced] = width_along(g, sequence);
  Ordering o;
  o.sequence = std::move(sequence);
  o.width = width;
  o.induced_width = induced;
  return o;
}

}  // namespace bcode
