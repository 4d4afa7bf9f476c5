#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcode/coding.hpp"
#include "bcode/elimination.hpp"
#include "bcode/graph.hpp"

namespace bcode {

enum class DecoderTag { ElimBel, ElimMpe, ElimMap, ApproxMpe, Ibp };

struct DecoderKind {
  DecoderTag tag = DecoderTag::ElimMpe;
  int param = 0;  // i for approx-mpe, I for ibp; unused otherwise

  bool has_param() const { return tag == DecoderTag::ApproxMpe || tag == DecoderTag::Ibp; }
};

std::string to_string(const DecoderKind& d);       // e.g. "approx-mpe(7)"
std::string tag_string(DecoderTag tag);            // e.g. "approx-mpe"
DecoderKind parse_decoder(const std::string& text);

struct CodeSpec {
  enum class Kind { Hamming74, Hamming1511, Structured, Random };
  Kind kind = Kind::Hamming74;
  int k = 0;
  int p = 0;               // parent-set size, structured/random only
  std::uint64_t seed = 0;  // random only

  double rate() const;
};

std::string to_string(CodeSpec::Kind kind);
CodeSpec::Kind code_kind_from_string(const std::string& text);
GeneratorMatrix make_code(const CodeSpec& spec);

// The ordering the experiments were calibrated with: the natural variable
// sequence (information bits, then parity bits), which eliminates the parity
// checks first and then sweeps the information band. For the (15,11) Hamming
// network a precomputed minimum-width sequence is used instead.
Ordering reference_ordering(const CodeSpec& spec);
std::vector<int> reference_sequence(const CodeSpec& spec);

// Min-fill ordering of a decoding instance's moral graph.
Ordering decoding_ordering(const DecodingInstance& instance);

// Fraction of wrongly decoded information bits.
double ber(const std::vector<int>& decoded_u, const std::vector<int>& true_u);

// Runs one decoder on one observation. elim-bel and ibp decode bit-wise,
// elim-mpe/approx-mpe block-wise, elim-map over the information-bit
// hypothesis. `ordering` guides the elimination-based decoders.
std::vector<int> decode(const DecodingInstance& instance, const DecoderKind& decoder,
                        const Ordering& ordering, const ElimOptions& options = {});
std::vector<int> decode(const DecodingInstance& instance, const DecoderKind& decoder);

struct ExperimentConfig {
  CodeSpec code;
  std::vector<double> sigmas;
  std::vector<DecoderKind> decoders;
  int trials = 0;
  std::uint64_t master_seed = 0;
  std::optional<std::vector<int>> ordering;  // explicit elimination sequence
  bool code_per_trial = false;               // regenerate a random code every trial
  int threads = 1;
  ElimOptions elim;
};

struct ReportRow {
  double sigma = 0.0;
  DecoderKind decoder;
  int trials = 0;
  long long bit_errors = 0;  // -1 when the decoder failed
  double ber = 0.0;
  double stderr_ = 0.0;  // binomial standard error
  double mean_time_s = 0.0;
  bool failed = false;
  std::string failure;
};

// Per-trial record, for paired-decision analyses.
struct TrialLog {
  std::vector<std::vector<int>> truth;                          // [trial] -> u
  std::vector<std::vector<std::vector<std::vector<int>>>> decoded;  // [sigma][decoder][trial] -> u
};

// Monte-Carlo harness. Every decoder sees the identical noisy observation per
// (sigma, trial); per-trial random streams derive from the master seed. A
// decoder that fails (e.g. over the memory budget) marks its row failed
// without disturbing the others.
std::vector<ReportRow> run_experiment(const ExperimentConfig& config, TrialLog* log = nullptr);

enum class ReportFormat { Csv, Pretty };

// CSV columns: sigma,decoder,param,trials,bit_errors,ber,stderr,mean_time_s.
// Rows are emitted in (sigma, decoder tag, param) order.
std::string emit_report(std::vector<ReportRow> rows, ReportFormat format);

// Flat key=value experiment description (see README for the keys).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace bcode
