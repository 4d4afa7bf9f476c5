#include "bcode/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "bcode/brute_force.hpp"
#include "bcode/errors.hpp"
#include "bcode/ibp.hpp"
#include "bcode/minibucket.hpp"
#include "bcode/network_io.hpp"
#include "bcode/rng.hpp"

namespace bcode {

namespace {

constexpr std::uint64_t kCodeStream = 0xC0DEULL << 32;

}  // namespace

std::string tag_string(DecoderTag tag) {
  switch (tag) {
    case DecoderTag::ElimBel:
      return "elim-bel";
    case DecoderTag::ElimMpe:
      return "elim-mpe";
    case DecoderTag::ElimMap:
      return "elim-map";
    case DecoderTag::ApproxMpe:
      return "approx-mpe";
    case DecoderTag::Ibp:
      return "ibp";
  }
  return "?";
}

std::string to_string(const DecoderKind& d) {
  if (d.has_param()) return tag_string(d.tag) + "(" + std::to_string(d.param) + ")";
  return tag_string(d.tag);
}

DecoderKind parse_decoder(const std::string& text) {
  std::string name = text;
  int param = 0;
  bool has_param = false;
  if (auto open = text.find('('); open != std::string::npos) {
    if (text.back() != ')') throw ParseError("bad decoder '" + text + "'");
    name = text.substr(0, open);
    std::string inside = text.substr(open + 1, text.size() - open - 2);
    auto res = std::from_chars(inside.data(), inside.data() + inside.size(), param);
    if (res.ec != std::errc() || res.ptr != inside.data() + inside.size())
      throw ParseError("bad decoder parameter in '" + text + "'");
    has_param = true;
  }
  DecoderKind d;
  if (name == "elim-bel")
    d.tag = DecoderTag::ElimBel;
  else if (name == "elim-mpe")
    d.tag = DecoderTag::ElimMpe;
  else if (name == "elim-map")
    d.tag = DecoderTag::ElimMap;
  else if (name == "approx-mpe")
    d.tag = DecoderTag::ApproxMpe;
  else if (name == "ibp")
    d.tag = DecoderTag::Ibp;
  else
    throw ParseError("unknown decoder '" + name + "'");
  if (d.has_param()) {
    if (!has_param || param < 1)
      throw InvalidParams("decoder " + name + " needs a parameter >= 1");
    d.param = param;
  } else if (has_param) {
    throw InvalidParams("decoder " + name + " takes no parameter");
  }
  return d;
}

double CodeSpec::rate() const {
  switch (kind) {
    case Kind::Hamming74:
      return 4.0 / 7.0;
    case Kind::Hamming1511:
      return 11.0 / 15.0;
    default:
      return 0.5;
  }
}

std::string to_string(CodeSpec::Kind kind) {
  switch (kind) {
    case CodeSpec::Kind::Hamming74:
      return "hamming-7-4";
    case CodeSpec::Kind::Hamming1511:
      return "hamming-15-11";
    case CodeSpec::Kind::Structured:
      return "structured";
    case CodeSpec::Kind::Random:
      return "random";
  }
  return "?";
}

CodeSpec::Kind code_kind_from_string(const std::string& text) {
  if (text == "hamming-7-4") return CodeSpec::Kind::Hamming74;
  if (text == "hamming-15-11") return CodeSpec::Kind::Hamming1511;
  if (text == "structured") return CodeSpec::Kind::Structured;
  if (text == "random") return CodeSpec::Kind::Random;
  throw ParseError("unknown code kind '" + text + "'");
}

GeneratorMatrix make_code(const CodeSpec& spec) {
  switch (spec.kind) {
    case CodeSpec::Kind::Hamming74:
      return hamming_7_4();
    case CodeSpec::Kind::Hamming1511:
      return hamming_15_11();
    case CodeSpec::Kind::Structured:
      return structured_code(spec.k, spec.p);
    case CodeSpec::Kind::Random:
      return random_code(spec.k, spec.p, spec.seed);
  }
  throw InvalidParams("unknown code kind");
}

std::vector<int> reference_sequence(const CodeSpec& spec) {
  if (spec.kind == CodeSpec::Kind::Hamming1511) {
    // Minimum-width elimination sequence for the (15,11) Hamming network
    // (induced width 9), found by randomized min-fill search.
    return {10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 0, 14, 13, 12, 11};
  }
  int n = 0;
  switch (spec.kind) {
    case CodeSpec::Kind::Hamming74:
      n = 7;
      break;
    case CodeSpec::Kind::Structured:
    case CodeSpec::Kind::Random:
      if (spec.k < 1) throw InvalidParams("code spec needs K >= 1");
      n = 2 * spec.k;
      break;
    default:
      n = 15;
      break;
  }
  std::vector<int> seq(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) seq[static_cast<std::size_t>(i)] = i;
  return seq;
}

Ordering reference_ordering(const CodeSpec& spec) {
  GeneratorMatrix g = make_code(spec);
  return make_ordering(moral_graph(code_network(g)), reference_sequence(spec));
}

Ordering decoding_ordering(const DecodingInstance& instance) {
  return find_ordering(moral_graph(instance.network), OrderingHeuristic::MinFill);
}

double ber(const std::vector<int>& decoded_u, const std::vector<int>& true_u) {
  if (decoded_u.size() != true_u.size())
    throw LengthMismatch("decoded and true vectors differ in length");
  if (true_u.empty()) throw LengthMismatch("empty bit vectors");
  int errors = 0;
  for (std::size_t i = 0; i < true_u.size(); ++i) errors += decoded_u[i] != true_u[i];
  return static_cast<double>(errors) / static_cast<double>(true_u.size());
}

namespace {

int argmax_bit(const std::vector<double>& posterior) {
  int best = 0;
  double best_p = posterior[0];
  for (int t = 1; t < static_cast<int>(posterior.size()); ++t)
    if (posterior[static_cast<std::size_t>(t)] > best_p) {  // ties stay at the smaller value
      best_p = posterior[static_cast<std::size_t>(t)];
      best = t;
    }
  return best;
}

}  // namespace

std::vector<int> decode(const DecodingInstance& instance, const DecoderKind& decoder,
                        const Ordering& ordering, const ElimOptions& options) {
  const int k = instance.k;
  std::vector<int> u(static_cast<std::size_t>(k), 0);
  switch (decoder.tag) {
    case DecoderTag::ElimBel: {
      // One elimination per information bit, with that bit moved to the front.
      for (int bit = 0; bit < k; ++bit) {
        Ordering per_bit;
        per_bit.sequence.reserve(ordering.sequence.size());
        per_bit.sequence.push_back(bit);
        for (int v : ordering.sequence)
          if (v != bit) per_bit.sequence.push_back(v);
        std::vector<double> posterior =
            elim_bel(instance.network, per_bit, instance.evidence, bit, options);
        u[static_cast<std::size_t>(bit)] = argmax_bit(posterior);
      }
      return u;
    }
    case DecoderTag::ElimMpe: {
      MpeResult res = elim_mpe(instance.network, ordering, instance.evidence, options);
      for (int bit = 0; bit < k; ++bit) u[static_cast<std::size_t>(bit)] = res.assignment.at(bit);
      return u;
    }
    case DecoderTag::ElimMap: {
      std::set<int> hypothesis;
      Ordering prefixed;
      prefixed.sequence.reserve(ordering.sequence.size());
      for (int v : ordering.sequence)
        if (v < k) {
          prefixed.sequence.push_back(v);
          hypothesis.insert(v);
        }
      for (int v : ordering.sequence)
        if (v >= k) prefixed.sequence.push_back(v);
      MapResult res = elim_map(instance.network, prefixed, instance.evidence, hypothesis, options);
      for (int bit = 0; bit < k; ++bit) u[static_cast<std::size_t>(bit)] = res.assignment.at(bit);
      return u;
    }
    case DecoderTag::ApproxMpe: {
      ApproxResult res = approx_mpe(instance.network, ordering, instance.evidence, decoder.param);
      for (int bit = 0; bit < k; ++bit) u[static_cast<std::size_t>(bit)] = res.assignment.at(bit);
      return u;
    }
    case DecoderTag::Ibp: {
      Schedule schedule = coding_schedule(instance.network, instance.evidence);
      BeliefTable beliefs = run_ibp(instance.network, instance.evidence, decoder.param, schedule);
      for (int bit = 0; bit < k; ++bit)
        u[static_cast<std::size_t>(bit)] = argmax_bit(beliefs.beliefs[static_cast<std::size_t>(bit)]);
      return u;
    }
  }
  throw InvalidParams("unknown decoder tag");
}

std::vector<int> decode(const DecodingInstance& instance, const DecoderKind& decoder) {
  return decode(instance, decoder, decoding_ordering(instance));
}

namespace {

struct CellAccumulator {
  long long bit_errors = 0;
  double time_s = 0.0;
  bool failed = false;
  std::string failure;
};

}  // namespace

std::vector<ReportRow> run_experiment(const ExperimentConfig& config, TrialLog* log) {
  if (config.trials < 1) throw InvalidParams("trials must be >= 1");
  if (config.sigmas.empty()) throw InvalidParams("at least one sigma is required");
  for (double s : config.sigmas)
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidParams("sigma values must be positive");
  if (config.decoders.empty()) throw InvalidParams("at least one decoder is required");
  for (const DecoderKind& d : config.decoders)
    if (d.has_param() && d.param < 1) throw InvalidParams("decoder parameter must be >= 1");
  if (config.threads < 1) throw InvalidParams("threads must be >= 1");

  const std::size_t ns = config.sigmas.size();
  const std::size_t nd = config.decoders.size();
  const std::size_t nt = static_cast<std::size_t>(config.trials);

  // Fixed-code path: one generator and one ordering for the whole experiment.
  GeneratorMatrix fixed_code;
  Ordering fixed_ordering;
  if (!config.code_per_trial) {
    fixed_code = make_code(config.code);
    DecodingInstance probe = build_decoding_instance(
        fixed_code, std::vector<double>(static_cast<std::size_t>(fixed_code.n), 0.5),
        config.sigmas.front());
    fixed_ordering = config.ordering
                         ? make_ordering(moral_graph(probe.network), *config.ordering)
                         : decoding_ordering(probe);
  }

  const int k = config.code.kind == CodeSpec::Kind::Hamming74      ? 4
                : config.code.kind == CodeSpec::Kind::Hamming1511 ? 11
                                                                  : config.code.k;
  if (k < 1) throw InvalidParams("code spec needs K >= 1");

  // Per-(sigma, decoder, trial) outcome slots keep the reduction independent
  // of the execution schedule.
  std::vector<CellAccumulator> cells(ns * nd * nt);
  std::vector<std::vector<int>> truths(nt);
  if (log) {
    log->truth.assign(nt, {});
    log->decoded.assign(ns, std::vector<std::vector<std::vector<int>>>(
                                nd, std::vector<std::vector<int>>(nt)));
  }
  // (sigma, decoder) failure flags let later trials skip known-failed rows.
  std::vector<std::atomic<bool>> row_failed(ns * nd);
  for (auto& f : row_failed) f.store(false);

  auto run_trial = [&](std::size_t t) {
    Rng bits_rng(mix_seed(config.master_seed, t, 0));
    std::vector<int> u(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) u[static_cast<std::size_t>(i)] = bits_rng.bit();
    truths[t] = u;

    GeneratorMatrix code_local;
    const GeneratorMatrix* code = &fixed_code;
    Ordering ordering_local;
    const Ordering* ordering = &fixed_ordering;
    if (config.code_per_trial) {
      CodeSpec per_trial = config.code;
      if (per_trial.kind == CodeSpec::Kind::Random)
        per_trial.seed = mix_seed(config.master_seed, t, kCodeStream);
      code_local = make_code(per_trial);
      code = &code_local;
      DecodingInstance probe = build_decoding_instance(
          *code, std::vector<double>(static_cast<std::size_t>(code->n), 0.5),
          config.sigmas.front());
      ordering_local = config.ordering
                           ? make_ordering(moral_graph(probe.network), *config.ordering)
                           : decoding_ordering(probe);
      ordering = &ordering_local;
    }

    std::vector<int> c = encode(*code, u);
    for (std::size_t s = 0; s < ns; ++s) {
      Rng noise_rng(mix_seed(config.master_seed, t, s + 1));
      std::vector<double> y = transmit(c, ChannelModel{config.sigmas[s]}, noise_rng);
      DecodingInstance instance = build_decoding_instance(*code, y, config.sigmas[s]);
      for (std::size_t d = 0; d < nd; ++d) {
        CellAccumulator& cell = cells[(s * nd + d) * nt + t];
        if (row_failed[s * nd + d].load(std::memory_order_relaxed)) continue;
        try {
          auto t0 = std::chrono::steady_clock::now();
          std::vector<int> decoded = decode(instance, config.decoders[d], *ordering, config.elim);
          auto t1 = std::chrono::steady_clock::now();
          cell.time_s = std::chrono::duration<double>(t1 - t0).count();
          for (int i = 0; i < k; ++i)
            cell.bit_errors += decoded[static_cast<std::size_t>(i)] != u[static_cast<std::size_t>(i)];
          if (log) log->decoded[s][d][t] = std::move(decoded);
        } catch (const Error& e) {
          cell.failed = true;
          cell.failure = e.what();
          row_failed[s * nd + d].store(true, std::memory_order_relaxed);
        }
      }
    }
  };

  if (config.threads == 1) {
    for (std::size_t t = 0; t < nt; ++t) run_trial(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int nw = std::min<int>(config.threads, static_cast<int>(nt));
    workers.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w)
      workers.emplace_back([&] {
        for (;;) {
          std::size_t t = next.fetch_add(1);
          if (t >= nt) return;
          run_trial(t);
        }
      });
    for (auto& w : workers) w.join();
  }

  if (log) log->truth = truths;

  std::vector<ReportRow> rows;
  rows.reserve(ns * nd);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t d = 0; d < nd; ++d) {
      ReportRow row;
      row.sigma = config.sigmas[s];
      row.decoder = config.decoders[d];
      row.trials = config.trials;
      double time_total = 0.0;
      for (std::size_t t = 0; t < nt; ++t) {
        const CellAccumulator& cell = cells[(s * nd + d) * nt + t];
        if (cell.failed) {
          row.failed = true;
          if (row.failure.empty()) row.failure = cell.failure;
        }
        row.bit_errors += cell.bit_errors;
        time_total += cell.time_s;
      }
      if (row.failed) {
        row.bit_errors = -1;
        row.ber = row.stderr_ = row.mean_time_s = std::numeric_limits<double>::quiet_NaN();
      } else {
        const double bits = static_cast<double>(config.trials) * static_cast<double>(k);
        row.ber = static_cast<double>(row.bit_errors) / bits;
        row.stderr_ = std::sqrt(row.ber * (1.0 - row.ber) / bits);
        row.mean_time_s = time_total / static_cast<double>(config.trials);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

void sort_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.sigma != b.sigma) return a.sigma < b.sigma;
    std::string ta = tag_string(a.decoder.tag), tb = tag_string(b.decoder.tag);
    if (ta != tb) return ta < tb;
    return a.decoder.param < b.decoder.param;
  });
}

std::string format_ber(double x) {
  if (std::isnan(x)) return "failed";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1e", x);
  return buf;
}

std::string format_time(double x) {
  if (std::isnan(x)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", x);
  return buf;
}

}  // namespace

std::string emit_report(std::vector<ReportRow> rows, ReportFormat format) {
  if (rows.empty()) throw InvalidParams("cannot emit an empty report");
  sort_rows(rows);

  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out << "sigma,decoder,param,trials,bit_errors,ber,stderr,mean_time_s\n";
    for (const ReportRow& r : rows) {
      out << format_double(r.sigma) << ',' << tag_string(r.decoder.tag) << ',';
      if (r.decoder.has_param()) out << r.decoder.param;
      out << ',' << r.trials << ',' << r.bit_errors << ',';
      if (r.failed)
        out << "nan,nan,nan";
      else
        out << format_double(r.ber) << ',' << format_double(r.stderr_) << ','
            << format_double(r.mean_time_s);
      out << '\n';
    }
    return out.str();
  }

  // Pretty: one BER block and one Time block, decoders across the columns.
  std::vector<double> sigmas;
  std::vector<DecoderKind> decoders;
  for (const ReportRow& r : rows) {
    if (sigmas.empty() || sigmas.back() != r.sigma) {
      if (std::find(sigmas.begin(), sigmas.end(), r.sigma) == sigmas.end())
        sigmas.push_back(r.sigma);
    }
    bool seen = false;
    for (const DecoderKind& d : decoders)
      seen = seen || (d.tag == r.decoder.tag && d.param == r.decoder.param);
    if (!seen) decoders.push_back(r.decoder);
  }
  auto cell = [&](double sigma, const DecoderKind& d) -> const ReportRow* {
    for (const ReportRow& r : rows)
      if (r.sigma == sigma && r.decoder.tag == d.tag && r.decoder.param == d.param) return &r;
    return nullptr;
  };

  std::ostringstream out;
  const int w = 12;
  auto pad = [&](const std::string& s) {
    out << s;
    for (int i = static_cast<int>(s.size()); i < w; ++i) out << ' ';
  };
  for (int block = 0; block < 2; ++block) {
    out << (block == 0 ? "BER\n" : "Mean decode time [s]\n");
    pad("sigma");
    for (const DecoderKind& d : decoders) pad(to_string(d));
    out << '\n';
    for (double sigma : sigmas) {
      pad(format_double(sigma));
      for (const DecoderKind& d : decoders) {
        const ReportRow* r = cell(sigma, d);
        if (!r)
          pad("-");
        else
          pad(block == 0 ? format_ber(r->ber) : format_time(r->mean_time_s));
      }
      out << '\n';
    }
    if (block == 0) out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

long long parse_ll(const std::string& key, const std::string& value) {
  long long out;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ParseError("config key " + key + " has a bad integer value '" + value + "'");
  return out;
}

double parse_d(const std::string& key, const std::string& value) {
  double out;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ParseError("config key " + key + " has a bad numeric value '" + value + "'");
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  bool saw_kind = false, saw_trials = false, saw_seed = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ParseError("config key " + key + " has an empty value");

    if (key == "code.kind") {
      config.code.kind = code_kind_from_string(value);
      saw_kind = true;
    } else if (key == "code.k") {
      config.code.k = static_cast<int>(parse_ll(key, value));
    } else if (key == "code.p") {
      config.code.p = static_cast<int>(parse_ll(key, value));
    } else if (key == "code.seed") {
      config.code.seed = static_cast<std::uint64_t>(parse_ll(key, value));
    } else if (key == "sigmas") {
      for (const std::string& tok : split(value, ','))
        config.sigmas.push_back(parse_d(key, trim(tok)));
    } else if (key == "decoders") {
      for (const std::string& tok : split(value, ','))
        config.decoders.push_back(parse_decoder(trim(tok)));
    } else if (key == "trials") {
      config.trials = static_cast<int>(parse_ll(key, value));
      saw_trials = true;
    } else if (key == "seed") {
      config.master_seed = static_cast<std::uint64_t>(parse_ll(key, value));
      saw_seed = true;
    } else if (key == "threads") {
      config.threads = static_cast<int>(parse_ll(key, value));
    } else if (key == "ordering") {
      std::vector<int> seq;
      for (const std::string& tok : split(value, ','))
        seq.push_back(static_cast<int>(parse_ll(key, trim(tok))));
      config.ordering = std::move(seq);
    } else if (key == "code_per_trial") {
      if (value == "true")
        config.code_per_trial = true;
      else if (value == "false")
        config.code_per_trial = false;
      else
        throw ParseError("config key code_per_trial must be true or false");
    } else {
      throw ParseError("unknown config key '" + key + "'");
    }
  }
  if (!saw_kind) throw ParseError("config is missing code.kind");
  if (config.sigmas.empty()) throw ParseError("config is missing sigmas");
  if (config.decoders.empty()) throw ParseError("config is missing decoders");
  if (!saw_trials) throw ParseError("config is missing trials");
  if (!saw_seed) throw ParseError("config is missing seed");
  if ((config.code.kind == CodeSpec::Kind::Structured ||
       config.code.kind == CodeSpec::Kind::Random) &&
      (config.code.k < 1 || config.code.p < 1))
    throw ParseError("structured/random codes need code.k and code.p");
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace bcode
