#include "bcode/ibp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bcode/errors.hpp"

namespace bcode {

namespace {

void normalize_message(std::vector<double>& msg, const char* what) {
  double total = 0.0;
  for (double x : msg) total += x;
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericalCollapse(std::string(what) + " normalizes over total mass zero");
  for (double& x : msg) x /= total;
}

}  // namespace

Schedule default_schedule(const BeliefNetwork& net, const Evidence& evidence) {
  Schedule s;
  for (int v = 0; v < net.size(); ++v)
    if (!evidence.observed(v)) s.order.push_back(v);
  return s;
}

Schedule coding_schedule(const BeliefNetwork& net, const Evidence& evidence) {
  Schedule s;
  auto push_kind = [&](VarKind kind) {
    for (int v = 0; v < net.size(); ++v)
      if (net.variable(v).kind == kind && !evidence.observed(v)) s.order.push_back(v);
  };
  push_kind(VarKind::InformationBit);
  push_kind(VarKind::ParityBit);
  push_kind(VarKind::Generic);
  return s;
}

MessageStore::MessageStore(const BeliefNetwork& net, const Evidence& evidence) {
  validate_evidence(net, evidence);
  const int n = net.size();
  observed_.assign(static_cast<std::size_t>(n), -1);
  for (const auto& [v, value] : evidence.assignments) observed_[static_cast<std::size_t>(v)] = value;
  soft_.assign(static_cast<std::size_t>(n), {});
  for (const Factor& f : evidence.likelihoods) soft_[static_cast<std::size_t>(f.scope[0])] = f.table;

  node_lambda_.resize(static_cast<std::size_t>(n));
  node_pi_.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const std::size_t c = static_cast<std::size_t>(net.cardinality(v));
    // node lambda: indicator for observations, the likelihood vector for soft
    // evidence, all-ones otherwise.
    if (observed(v)) {
      node_lambda_[static_cast<std::size_t>(v)].assign(c, 0.0);
      node_lambda_[static_cast<std::size_t>(v)][static_cast<std::size_t>(observed_value(v))] = 1.0;
    } else if (!soft(v).empty()) {
      node_lambda_[static_cast<std::size_t>(v)] = soft(v);
    } else {
      node_lambda_[static_cast<std::size_t>(v)].assign(c, 1.0);
    }
    // node pi: the prior for parentless nodes, all-ones otherwise.
    if (net.parents(v).empty())
      node_pi_[static_cast<std::size_t>(v)] = net.cpt(v).table;
    else
      node_pi_[static_cast<std::size_t>(v)].assign(c, 1.0);
  }

  for (int v = 0; v < n; ++v) {
    const std::size_t cv = static_cast<std::size_t>(net.cardinality(v));
    for (int child : net.children(v)) {
      // pi message from v to child, over v's domain. Observed senders always
      // emit an indicator; that never changes during the run.
      std::vector<double> pi_msg(cv, 1.0);
      if (observed(v)) {
        pi_msg.assign(cv, 0.0);
        pi_msg[static_cast<std::size_t>(observed_value(v))] = 1.0;
      }
      pi_.emplace(std::make_pair(v, child), std::move(pi_msg));
      // lambda message from child to v, over v's domain.
      lambda_.emplace(std::make_pair(child, v), std::vector<double>(cv, 1.0));
    }
  }
}

const std::vector<double>& MessageStore::child_to_parent(int child, int parent) const {
  auto it = lambda_.find({child, parent});
  if (it == lambda_.end()) throw InvalidParams("no lambda message for that (child, parent) pair");
  return it->second;
}

const std::vector<double>& MessageStore::parent_to_child(int parent, int child) const {
  auto it = pi_.find({parent, child});
  if (it == pi_.end()) throw InvalidParams("no pi message for that (parent, child) pair");
  return it->second;
}

std::vector<double>& MessageStore::mutable_child_to_parent(int child, int parent) {
  auto it = lambda_.find({child, parent});
  if (it == lambda_.end()) throw InvalidParams("no lambda message for that (child, parent) pair");
  return it->second;
}

const std::vector<double>& MessageStore::node_lambda(int v) const {
  return node_lambda_[static_cast<std::size_t>(v)];
}

const std::vector<double>& MessageStore::node_pi(int v) const {
  return node_pi_[static_cast<std::size_t>(v)];
}

MessageStore init_messages(const BeliefNetwork& net, const Evidence& evidence) {
  return MessageStore(net, evidence);
}

// Per-node message mechanics shared by the sweep, the evidence refresh and
// the belief readout.
class IbpRunner {
 public:
  IbpRunner(const BeliefNetwork& net, MessageStore& store) : net_(net), store_(store) {}

  // Combined diagnostic support: product of children lambda messages and the
  // soft-evidence vector; an indicator for observed nodes.
  std::vector<double> diagnostic_support(int x) const {
    const std::size_t c = static_cast<std::size_t>(net_.cardinality(x));
    std::vector<double> lam(c, 1.0);
    if (store_.observed(x)) {
      lam.assign(c, 0.0);
      lam[static_cast<std::size_t>(store_.observed_value(x))] = 1.0;
      return lam;
    }
    if (!store_.soft(x).empty()) lam = store_.soft(x);
    for (int y : net_.children(x)) {
      const std::vector<double>& msg = store_.lambda_.at({y, x});
      for (std::size_t j = 0; j < c; ++j) lam[j] *= msg[j];
    }
    return lam;
  }

  // Causal support pi_x = sum_u P(x|u) prod_k pi_{u_k -> x}; the prior at a
  // root. Also fills lambda_out (one accumulator per parent) with
  // sum_{u: u_i = a} (sum_x P(x|u) lam(x)) prod_{k != i} pi_k when asked.
  std::vector<double> causal_support(int x, const std::vector<double>* lam,
                                     std::vector<std::vector<double>>* lambda_out) const {
    const Factor& cpt = net_.cpt(x);
    const auto& parents = net_.parents(x);
    const int m = static_cast<int>(parents.size());
    const std::size_t cx = static_cast<std::size_t>(net_.cardinality(x));
    std::vector<double> pi_x(cx, 0.0);
    if (m == 0) {
      pi_x = cpt.table;
      return pi_x;
    }

    std::vector<const std::vector<double>*> pin(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
      pin[static_cast<std::size_t>(k)] =
          &store_.pi_.at({parents[static_cast<std::size_t>(k)], x});

    if (lambda_out) {
      lambda_out->assign(static_cast<std::size_t>(m), {});
      for (int k = 0; k < m; ++k)
        (*lambda_out)[static_cast<std::size_t>(k)].assign(
            static_cast<std::size_t>(net_.cardinality(parents[static_cast<std::size_t>(k)])), 0.0);
    }

    std::vector<int> value(static_cast<std::size_t>(m), 0);
    std::vector<double> prefix(static_cast<std::size_t>(m) + 1);
    std::vector<double> suffix(static_cast<std::size_t>(m) + 1);
    const std::size_t rows = cpt.table.size() / cx;
    for (std::size_t pc = 0; pc < rows; ++pc) {
      prefix[0] = 1.0;
      for (int k = 0; k < m; ++k)
        prefix[static_cast<std::size_t>(k) + 1] =
            prefix[static_cast<std::size_t>(k)] *
            (*pin[static_cast<std::size_t>(k)])[static_cast<std::size_t>(
                value[static_cast<std::size_t>(k)])];
      const double w = prefix[static_cast<std::size_t>(m)];

      const std::size_t base = pc * cx;
      if (w != 0.0 || lambda_out) {
        for (std::size_t j = 0; j < cx; ++j) pi_x[j] += cpt.table[base + j] * w;
      }
      if (lambda_out) {
        suffix[static_cast<std::size_t>(m)] = 1.0;
        for (int k = m - 1; k >= 0; --k)
          suffix[static_cast<std::size_t>(k)] =
              suffix[static_cast<std::size_t>(k) + 1] *
              (*pin[static_cast<std::size_t>(k)])[static_cast<std::size_t>(
                  value[static_cast<std::size_t>(k)])];
        double srow = 0.0;
        for (std::size_t j = 0; j < cx; ++j) srow += cpt.table[base + j] * (*lam)[j];
        if (srow != 0.0) {
          for (int k = 0; k < m; ++k) {
            const double others =
                prefix[static_cast<std::size_t>(k)] * suffix[static_cast<std::size_t>(k) + 1];
            (*lambda_out)[static_cast<std::size_t>(k)][static_cast<std::size_t>(
                value[static_cast<std::size_t>(k)])] += srow * others;
          }
        }
      }

      for (int k = m - 1; k >= 0; --k) {
        if (++value[static_cast<std::size_t>(k)] <
            net_.cardinality(parents[static_cast<std::size_t>(k)]))
          break;
        value[static_cast<std::size_t>(k)] = 0;
      }
    }
    return pi_x;
  }

  // Recomputes the outgoing lambda messages of x (to every parent).
  void send_lambda_messages(int x) {
    const auto& parents = net_.parents(x);
    if (parents.empty()) return;
    std::vector<double> lam = diagnostic_support(x);
    std::vector<std::vector<double>> lambda_out;
    causal_support(x, &lam, &lambda_out);
    for (std::size_t k = 0; k < parents.size(); ++k) {
      normalize_message(lambda_out[k], "lambda message");
      store_.lambda_[{x, parents[k]}] = std::move(lambda_out[k]);
    }
  }

  // Recomputes the outgoing pi messages of x (to every child). Never called
  // for observed nodes, whose pi messages are fixed indicators.
  void send_pi_messages(int x, const std::vector<double>& pi_x) {
    const auto& children = net_.children(x);
    if (children.empty()) return;
    const std::size_t c = static_cast<std::size_t>(net_.cardinality(x));
    const std::size_t nc = children.size();
    std::vector<double> base(c, 1.0);
    if (!store_.soft(x).empty()) base = store_.soft(x);
    for (std::size_t j = 0; j < c; ++j) base[j] *= pi_x[j];

    // prefix/suffix products over the children lambda messages.
    std::vector<double> pre(c, 1.0);
    std::vector<std::vector<double>> suf(nc + 1, std::vector<double>(c, 1.0));
    for (std::size_t i = nc; i-- > 0;) {
      const std::vector<double>& msg = store_.lambda_.at({children[i], x});
      for (std::size_t j = 0; j < c; ++j) suf[i][j] = suf[i + 1][j] * msg[j];
    }
    for (std::size_t i = 0; i < nc; ++i) {
      std::vector<double> out(c);
      for (std::size_t j = 0; j < c; ++j) out[j] = base[j] * pre[j] * suf[i + 1][j];
      normalize_message(out, "pi message");
      store_.pi_[{x, children[i]}] = std::move(out);
      const std::vector<double>& msg = store_.lambda_.at({children[i], x});
      for (std::size_t j = 0; j < c; ++j) pre[j] *= msg[j];
    }
  }

  void activate(int x) {
    std::vector<double> lam = diagnostic_support(x);
    std::vector<std::vector<double>> lambda_out;
    std::vector<double> pi_x = causal_support(x, &lam, net_.parents(x).empty() ? nullptr : &lambda_out);
    const auto& parents = net_.parents(x);
    for (std::size_t k = 0; k < parents.size(); ++k) {
      normalize_message(lambda_out[k], "lambda message");
      store_.lambda_[{x, parents[k]}] = std::move(lambda_out[k]);
    }
    send_pi_messages(x, pi_x);
    store_.node_lambda_[static_cast<std::size_t>(x)] = std::move(lam);
    store_.node_pi_[static_cast<std::size_t>(x)] = std::move(pi_x);
  }

 private:
  const BeliefNetwork& net_;
  MessageStore& store_;
};

void propagate_iteration(const BeliefNetwork& net, MessageStore& store,
                         const Schedule& schedule) {
  for (int x : schedule.order) {
    if (x < 0 || x >= net.size()) throw InvalidParams("schedule contains an invalid node id");
    if (store.observed(x))
      throw InvalidParams("schedule must not contain evidence variables");
  }
  IbpRunner runner(net, store);
  for (int x : schedule.order) runner.activate(x);
  // Observed nodes are not activated, but their lambda messages depend on the
  // co-parents' pi messages and must track them.
  for (int x = 0; x < net.size(); ++x)
    if (store.observed(x)) runner.send_lambda_messages(x);
}

BeliefTable compute_beliefs(const BeliefNetwork& net, MessageStore& store) {
  IbpRunner runner(net, store);
  BeliefTable table;
  table.beliefs.resize(static_cast<std::size_t>(net.size()));
  for (int x = 0; x < net.size(); ++x) {
    const std::size_t c = static_cast<std::size_t>(net.cardinality(x));
    if (store.observed(x)) {
      std::vector<double> bel(c, 0.0);
      bel[static_cast<std::size_t>(store.observed_value(x))] = 1.0;
      table.beliefs[static_cast<std::size_t>(x)] = std::move(bel);
      continue;
    }
    std::vector<double> lam = runner.diagnostic_support(x);
    std::vector<double> pi_x = runner.causal_support(x, nullptr, nullptr);
    std::vector<double> bel(c);
    for (std::size_t j = 0; j < c; ++j) bel[j] = lam[j] * pi_x[j];
    normalize_message(bel, "belief");
    table.beliefs[static_cast<std::size_t>(x)] = std::move(bel);
  }
  return table;
}

BeliefTable run_ibp(const BeliefNetwork& net, const Evidence& evidence, int iterations,
                    const Schedule& schedule) {
  if (iterations < 1) throw InvalidParams("iteration count must be >= 1");
  MessageStore store(net, evidence);
  for (int it = 0; it < iterations; ++it) propagate_iteration(net, store, schedule);
  return compute_beliefs(net, store);
}

}  // namespace bcode
