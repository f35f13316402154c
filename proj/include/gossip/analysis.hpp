#pragma once

// Simulation between protocols. P simulates Q when every call sequence Q can
// generate, P can generate too; bisimilar when both directions hold.
//
// Sequences are compared on Q's tree without epistemically redundant calls,
// level by level. A sequence ending in a redundant call is checked but not
// extended: guards after it agree with guards after its reduct.

#include <cstddef>
#include <optional>
#include <vector>

#include "gossip/engine.hpp"
#include "gossip/protocol.hpp"

namespace gossip {

struct PrefixSet {
  // Shortlex order.
  std::vector<CallSequence> sequences;
  bool truncated = false;
};

// Generable sequences without redundant calls, of length <= len_bound.
PrefixSet generated_prefixes(const Protocol& p, std::size_t len_bound, const ExploreOptions& options = {});

struct SimulationVerdict {
  bool simulates = true;
  // Shortlex-least sequence generable by the simulated protocol but not by
  // the simulator.
  std::optional<CallSequence> counterexample;
  // Every counterexample of the minimal length, shortlex order.
  std::vector<CallSequence> minimal_counterexamples;
  // Largest length compared.
  std::size_t bound = 0;
  // true when the comparison stopped at a budget before the simulated
  // protocol's tree was exhausted or the length bound n^4 was reached.
  bool bound_relative = false;
};

// Does `simulator` simulate `simulated`? options.depth_budget caps the length
// (0 means n^4); options.node_budget caps the nodes of the simulated tree.
SimulationVerdict simulates(const Protocol& simulator, const Protocol& simulated, const ExploreOptions& options = {});

struct BisimulationVerdict {
  bool bisimilar = true;
  SimulationVerdict forward;   // p simulates q
  SimulationVerdict backward;  // q simulates p
};

BisimulationVerdict bisimilar(const Protocol& p, const Protocol& q, const ExploreOptions& options = {});

}  // namespace gossip
