#include "bcode/coding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bcode/errors.hpp"

namespace bcode {

std::vector<int> GeneratorMatrix::parity_parents(int i) const {
  std::vector<int> rows;
  for (int r = 0; r < k; ++r)
    if (at(r, k + i)) rows.push_back(r);
  return rows;
}

GeneratorMatrix code_from_generator(int k, int n, std::vector<std::uint8_t> bits) {
  if (k < 1 || n < k) throw InvalidParams("generator matrix needs 1 <= K <= N");
  if (bits.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(n))
    throw TableSizeMismatch("generator matrix bit count does not match K x N");
  for (std::uint8_t b : bits)
    if (b > 1) throw InvalidParams("generator matrix entries must be 0 or 1");

  GeneratorMatrix g;
  g.k = k;
  g.n = n;
  g.bits = std::move(bits);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c)
      if (g.at(r, c) != (r == c ? 1 : 0))
        throw NotSystematic("the first K columns must form the identity");
  for (int c = k; c < n; ++c) {
    bool any = false;
    for (int r = 0; r < k; ++r) any = any || g.at(r, c);
    if (!any) throw EmptyParityColumn("parity column " + std::to_string(c) + " is all zero");
  }
  return g;
}

GeneratorMatrix hamming_7_4() {
  const std::uint8_t rows[4][7] = {
      {1, 0, 0, 0, 1, 1, 0},
      {0, 1, 0, 0, 1, 0, 1},
      {0, 0, 1, 0, 0, 1, 1},
      {0, 0, 0, 1, 1, 1, 1},
  };
  std::vector<std::uint8_t> bits;
  bits.reserve(28);
  for (const auto& row : rows) bits.insert(bits.end(), row, row + 7);
  return code_from_generator(4, 7, std::move(bits));
}

GeneratorMatrix hamming_15_11() {
  // Parity sets of the systematic (15,11) Hamming code, with data bits taken
  // in classic codeword-position order 3,5,6,7,9,10,11,12,13,14,15.
  const std::vector<std::vector<int>> parity = {
      {0, 1, 3, 4, 6, 8, 10},   // covers positions with bit 1 set
      {0, 2, 3, 5, 6, 9, 10},   // bit 2
      {1, 2, 3, 7, 8, 9, 10},   // bit 4
      {4, 5, 6, 7, 8, 9, 10},   // bit 8
  };
  const int k = 11, n = 15;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(k) * n, 0);
  for (int r = 0; r < k; ++r) bits[static_cast<std::size_t>(r) * n + r] = 1;
  for (int j = 0; j < 4; ++j)
    for (int r : parity[static_cast<std::size_t>(j)])
      bits[static_cast<std::size_t>(r) * n + k + j] = 1;
  return code_from_generator(k, n, std::move(bits));
}

GeneratorMatrix structured_code(int k, int p) {
  if (k < 1 || p < 1 || p > k) throw InvalidParams("structured code needs 1 <= P <= K");
  const int n = 2 * k;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(k) * n, 0);
  for (int r = 0; r < k; ++r) bits[static_cast<std::size_t>(r) * n + r] = 1;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < p; ++j)
      bits[static_cast<std::size_t>((i + j) % k) * n + k + i] = 1;
  return code_from_generator(k, n, std::move(bits));
}

GeneratorMatrix random_code(int k, int p, std::uint64_t seed) {
  if (k < 1 || p < 1 || p > k) throw InvalidParams("random code needs 1 <= P <= K");
  const int n = 2 * k;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(k) * n, 0);
  for (int r = 0; r < k; ++r) bits[static_cast<std::size_t>(r) * n + r] = 1;
  Rng rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    // Partial Fisher-Yates: the first p entries are a uniform p-subset.
    for (int r = 0; r < k; ++r) pool[static_cast<std::size_t>(r)] = r;
    for (int j = 0; j < p; ++j) {
      int pick = j + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(k - j)));
      std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
      bits[static_cast<std::size_t>(pool[static_cast<std::size_t>(j)]) * n + k + i] = 1;
    }
  }
  return code_from_generator(k, n, std::move(bits));
}

std::string write_generator_text(const GeneratorMatrix& g) {
  std::ostringstream out;
  out << g.k << ' ' << g.n << '\n';
  for (int r = 0; r < g.k; ++r) {
    for (int c = 0; c < g.n; ++c) {
      if (c) out << ' ';
      out << static_cast<int>(g.at(r, c));
    }
    out << '\n';
  }
  return out.str();
}

GeneratorMatrix read_generator_text(const std::string& text) {
  std::istringstream in(text);
  int k, n;
  if (!(in >> k >> n)) throw ParseError("generator file must start with 'K N'");
  if (k < 1 || n < k) throw ParseError("generator file has invalid K, N");
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(n));
  int b;
  while (in >> b) {
    if (b != 0 && b != 1) throw ParseError("generator entries must be 0 or 1");
    bits.push_back(static_cast<std::uint8_t>(b));
  }
  if (bits.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(n))
    throw ParseError("generator file has the wrong number of bits");
  return code_from_generator(k, n, std::move(bits));
}

void save_generator(const GeneratorMatrix& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidParams("cannot open '" + path + "' for writing");
  out << write_generator_text(g);
}

GeneratorMatrix load_generator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_generator_text(buf.str());
}

std::vector<int> encode(const GeneratorMatrix& g, const std::vector<int>& u) {
  if (static_cast<int>(u.size()) != g.k)
    throw LengthMismatch("information vector length differs from K");
  for (int b : u)
    if (b != 0 && b != 1) throw InvalidParams("information bits must be 0 or 1");
  std::vector<int> c(static_cast<std::size_t>(g.n), 0);
  for (int col = 0; col < g.n; ++col) {
    int acc = 0;
    for (int r = 0; r < g.k; ++r) acc ^= u[static_cast<std::size_t>(r)] & g.at(r, col);
    c[static_cast<std::size_t>(col)] = acc;
  }
  return c;
}

std::vector<double> transmit(const std::vector<int>& c, const ChannelModel& channel, Rng& rng) {
  if (!(channel.sigma > 0.0) || !std::isfinite(channel.sigma))
    throw InvalidParams("channel sigma must be positive and finite");
  std::vector<double> y(c.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    y[j] = static_cast<double>(c[j]) + channel.sigma * rng.gaussian();
  return y;
}

Factor xor_cpt(int parent_count) {
  if (parent_count < 1) throw InvalidParams("XOR CPT needs at least one parent");
  std::vector<int> scope(static_cast<std::size_t>(parent_count) + 1);
  std::vector<int> cards(static_cast<std::size_t>(parent_count) + 1, 2);
  for (int i = 0; i <= parent_count; ++i) scope[static_cast<std::size_t>(i)] = i;
  const std::size_t rows = std::size_t{1} << parent_count;
  std::vector<double> table(rows * 2, 0.0);
  for (std::size_t pc = 0; pc < rows; ++pc) {
    int parity = std::popcount(pc) & 1;
    table[pc * 2 + static_cast<std::size_t>(parity)] = 1.0;
  }
  return Factor(std::move(scope), std::move(cards), std::move(table));
}

BeliefNetwork code_network(const GeneratorMatrix& g) {
  const int k = g.k, n = g.n;
  std::vector<Variable> variables(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> tables(static_cast<std::size_t>(n));
  for (int v = 0; v < k; ++v) {
    variables[static_cast<std::size_t>(v)] = {v, 2, VarKind::InformationBit};
    tables[static_cast<std::size_t>(v)] = {0.5, 0.5};
  }
  for (int i = 0; i < n - k; ++i) {
    const int v = k + i;
    variables[static_cast<std::size_t>(v)] = {v, 2, VarKind::ParityBit};
    std::vector<int> pa = g.parity_parents(i);
    Factor cpt = xor_cpt(static_cast<int>(pa.size()));
    tables[static_cast<std::size_t>(v)] = std::move(cpt.table);
    parents[static_cast<std::size_t>(v)] = std::move(pa);
  }
  return build_network(std::move(variables), std::move(parents), std::move(tables));
}

DecodingInstance build_decoding_instance(const GeneratorMatrix& g, const std::vector<double>& y,
                                         double sigma) {
  if (static_cast<int>(y.size()) != g.n)
    throw LengthMismatch("channel output length differs from N");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidParams("channel sigma must be positive and finite");

  DecodingInstance inst;
  inst.k = g.k;
  inst.n = g.n;
  inst.network = code_network(g);
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  for (int j = 0; j < g.n; ++j) {
    // Unnormalized Gaussian densities; the 1/(sigma sqrt(2 pi)) constant
    // cancels in every posterior and argmax.
    const double yj = y[static_cast<std::size_t>(j)];
    std::vector<double> like = {std::exp(-yj * yj * inv2s2),
                                std::exp(-(yj - 1.0) * (yj - 1.0) * inv2s2)};
    inst.evidence.likelihoods.emplace_back(std::vector<int>{j}, std::vector<int>{2},
                                           std::move(like));
  }
  return inst;
}

}  // namespace bcode
