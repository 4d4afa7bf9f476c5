#pragma once

#include <string>

#include "bcode/network.hpp"

namespace bcode {

// Text interchange format: one record per variable,
//   id cardinality kind parent_ids... table_entries...
// '#' starts a comment. Floating-point entries are written with the shortest
// decimal representation that round-trips exactly.
std::string write_network_text(const BeliefNetwork& net);
BeliefNetwork read_network_text(const std::string& text);

void save_network(const BeliefNetwork& net, const std::string& path);
BeliefNetwork load_network(const std::string& path);

// Shortest round-trip decimal for a double.
std::string format_double(double x);

}  // namespace bcode
