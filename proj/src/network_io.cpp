#include "bcode/network_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "bcode/errors.hpp"

namespace bcode {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string write_network_text(const BeliefNetwork& net) {
  std::ostringstream out;
  out << "# belief network: " << net.size() << " variables\n";
  out << "# id cardinality kind parent_ids... table_entries...\n";
  for (int v = 0; v < net.size(); ++v) {
    const Variable& var = net.variable(v);
    out << v << ' ' << var.cardinality << ' ' << to_string(var.kind);
    for (int p : net.parents(v)) out << ' ' << p;
    for (double x : net.cpt(v).table) out << ' ' << format_double(x);
    out << '\n';
  }
  return out.str();
}

namespace {

bool parse_int(const std::string& tok, long long& out) {
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

bool parse_real(const std::string& tok, double& out) {
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

}  // namespace

BeliefNetwork read_network_text(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (!toks.empty()) records.push_back(std::move(toks));
  }

  // First pass: ids and cardinalities, needed to size each record's table.
  std::map<long long, int> card_of;
  for (const auto& toks : records) {
    if (toks.size() < 3) throw ParseError("variable record needs at least id, cardinality, kind");
    long long id, card;
    if (!parse_int(toks[0], id) || !parse_int(toks[1], card))
      throw ParseError("bad id or cardinality in record starting '" + toks[0] + "'");
    if (card < 2) throw ParseError("cardinality must be >= 2");
    if (!card_of.emplace(id, static_cast<int>(card)).second)
      throw ParseError("duplicate variable id " + std::to_string(id));
  }
  const int n = static_cast<int>(card_of.size());

  std::vector<Variable> variables(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> tables(static_cast<std::size_t>(n));
  std::vector<char> seen(static_cast<std::size_t>(n), 0);

  for (const auto& toks : records) {
    long long id_ll;
    parse_int(toks[0], id_ll);
    if (id_ll < 0 || id_ll >= n)
      throw ParseError("variable ids must form the contiguous range 0..n-1");
    const int id = static_cast<int>(id_ll);
    if (seen[static_cast<std::size_t>(id)]) throw ParseError("duplicate record");
    seen[static_cast<std::size_t>(id)] = 1;

    Variable var;
    var.id = id;
    var.cardinality = card_of[id];
    var.kind = var_kind_from_string(toks[2]);

    // The parent count is not written explicitly, but it is recoverable: with
    // every cardinality >= 2, (#parents + table length) grows strictly with
    // the parent count, so exactly one split can match the token count.
    const std::size_t rest = toks.size() - 3;
    std::size_t table_len = static_cast<std::size_t>(var.cardinality);
    std::size_t np = 0;
    bool found = false;
    for (;; ++np) {
      if (np + table_len == rest) {
        found = true;
        break;
      }
      if (np + table_len > rest || 3 + np >= toks.size()) break;
      long long pid;
      if (!parse_int(toks[3 + np], pid) || pid < 0 || pid >= n) break;
      table_len *= static_cast<std::size_t>(card_of[pid]);
    }
    if (!found)
      throw ParseError("record of variable " + std::to_string(id) +
                       " has an inconsistent parent/table token count");

    for (std::size_t i = 0; i < np; ++i) {
      long long pid;
      parse_int(toks[3 + i], pid);
      parents[static_cast<std::size_t>(id)].push_back(static_cast<int>(pid));
    }
    for (std::size_t i = 0; i < table_len; ++i) {
      double x;
      if (!parse_real(toks[3 + np + i], x))
        throw ParseError("bad table entry '" + toks[3 + np + i] + "'");
      tables[static_cast<std::size_t>(id)].push_back(x);
    }
    variables[static_cast<std::size_t>(id)] = var;
  }

  for (int v = 0; v < n; ++v)
    if (!seen[static_cast<std::size_t>(v)])
      throw ParseError("missing record for variable " + std::to_string(v));

  return build_network(std::move(variables), std::move(parents), std::move(tables));
}

void save_network(const BeliefNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidParams("cannot open '" + path + "' for writing");
  out << write_network_text(net);
}

BeliefNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_network_text(buf.str());
}

}  // namespace bcode
