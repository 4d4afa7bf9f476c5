#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcode/network.hpp"
#include "bcode/rng.hpp"

namespace bcode {

// Systematic linear (N, K) block code: the first K columns are the identity,
// the remaining N-K columns define the parity checks.
struct GeneratorMatrix {
  int k = 0;
  int n = 0;
  std::vector<std::uint8_t> bits;  // k*n row-major

  std::uint8_t at(int row, int col) const {
    return bits[static_cast<std::size_t>(row) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(col)];
  }
  // Rows with a 1 in parity column K+i, ascending.
  std::vector<int> parity_parents(int i) const;
};

GeneratorMatrix code_from_generator(int k, int n, std::vector<std::uint8_t> bits);

GeneratorMatrix hamming_7_4();
// Standard systematic (15,11) Hamming code; parity column j covers the data
// positions whose classic codeword position has bit j set.
GeneratorMatrix hamming_15_11();

// N = 2K; parity bit x_i is the XOR of the P sequential information bits
// u_{(i+j) mod K}, 0 <= j < P.
GeneratorMatrix structured_code(int k, int p);

// N = 2K; each parity bit picks P distinct parents uniformly at random from a
// deterministic seeded stream (mt19937_64 + rejection sampling, see rng.hpp).
GeneratorMatrix random_code(int k, int p, std::uint64_t seed);

// Text form: first line "K N", then K rows of N space-separated bits.
std::string write_generator_text(const GeneratorMatrix& g);
GeneratorMatrix read_generator_text(const std::string& text);
void save_generator(const GeneratorMatrix& g, const std::string& path);
GeneratorMatrix load_generator(const std::string& path);

// c = uG over GF(2); the systematic prefix of c equals u.
std::vector<int> encode(const GeneratorMatrix& g, const std::vector<int>& u);

struct ChannelModel {
  double sigma = 0.0;
};

// y_j = c_j + Normal(0, sigma^2), independent per bit.
std::vector<double> transmit(const std::vector<int>& c, const ChannelModel& channel, Rng& rng);

// Deterministic CPT over (parents..., child): 1 where the child equals the
// XOR of the parents. Scope ids are the placeholder 0..parent_count; rebind
// before use in a real network.
Factor xor_cpt(int parent_count);

// A code plus one observed channel output, as an inference problem: K
// uniform information bits, N-K XOR parity bits, and one Gaussian likelihood
// factor per transmitted bit (the real-valued y nodes are absorbed into soft
// evidence rather than instantiated).
struct DecodingInstance {
  BeliefNetwork network;
  Evidence evidence;
  int k = 0;
  int n = 0;
};

DecodingInstance build_decoding_instance(const GeneratorMatrix& g, const std::vector<double>& y,
                                         double sigma);

// The code's belief network with no channel observation attached.
BeliefNetwork code_network(const GeneratorMatrix& g);

}  // namespace bcode
