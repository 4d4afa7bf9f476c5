#pragma once

#include <map>
#include <utility>
#include <vector>

#include "bcode/network.hpp"

namespace bcode {

// Activation schedule for one sweep; evidence variables are never activated.
struct Schedule {
  std::vector<int> order;
};

Schedule default_schedule(const BeliefNetwork& net, const Evidence& evidence);

// Information-bit nodes first, then parity-check nodes, then the rest.
Schedule coding_schedule(const BeliefNetwork& net, const Evidence& evidence);

// Pearl lambda/pi message state for one IBP run. Hard observations are
// clamped: an observed node keeps an indicator node-lambda and sends
// indicator pi messages; its lambda messages to parents are refreshed from
// the co-parents' current pi messages at the end of every sweep.
class MessageStore {
 public:
  MessageStore(const BeliefNetwork& net, const Evidence& evidence);

  const std::vector<double>& child_to_parent(int child, int parent) const;  // lambda message
  const std::vector<double>& parent_to_child(int parent, int child) const;  // pi message
  const std::vector<double>& node_lambda(int v) const;
  const std::vector<double>& node_pi(int v) const;

  bool observed(int v) const { return observed_[static_cast<std::size_t>(v)] >= 0; }
  int observed_value(int v) const { return observed_[static_cast<std::size_t>(v)]; }
  // Unary likelihood attached to v, or empty.
  const std::vector<double>& soft(int v) const { return soft_[static_cast<std::size_t>(v)]; }

  // Test hook: direct access for perturbing a message.
  std::vector<double>& mutable_child_to_parent(int child, int parent);

 private:
  friend void propagate_iteration(const BeliefNetwork& net, MessageStore& store,
                                  const Schedule& schedule);
  friend struct BeliefTable;
  friend class IbpRunner;
  std::map<std::pair<int, int>, std::vector<double>> lambda_;  // (child, parent)
  std::map<std::pair<int, int>, std::vector<double>> pi_;      // (parent, child)
  std::vector<std::vector<double>> node_lambda_;
  std::vector<std::vector<double>> node_pi_;
  std::vector<int> observed_;               // value or -1
  std::vector<std::vector<double>> soft_;   // empty when absent
};

struct BeliefTable {
  std::vector<std::vector<double>> beliefs;  // per node, normalized
};

MessageStore init_messages(const BeliefNetwork& net, const Evidence& evidence);

// One sweep: every scheduled node recomputes its outgoing messages in order
// (later nodes see the fresh values), then evidence nodes refresh their
// lambda messages.
void propagate_iteration(const BeliefNetwork& net, MessageStore& store, const Schedule& schedule);

// BEL(x) = alpha * lambda_x * pi_x from the current messages, for every node.
BeliefTable compute_beliefs(const BeliefNetwork& net, MessageStore& store);

// init + `iterations` sweeps + belief readout.
BeliefTable run_ibp(const BeliefNetwork& net, const Evidence& evidence, int iterations,
                    const Schedule& schedule);

}  // namespace bcode
