#pragma once

// Machine-readable forms of protocols and verdicts.

#include <json.hpp>

#include "gossip/analysis.hpp"
#include "gossip/engine.hpp"
#include "gossip/protocol.hpp"

namespace gossip {

using Json = nlohmann::ordered_json;

// Everything `gossip check` reports about one protocol.
struct ProtocolCheck {
  TerminationVerdict termination;
  std::optional<Fairness> witness_fairness;
  // Searched only when the protocol diverges.
  std::optional<Lasso> agent_fair_lasso;
  std::optional<Lasso> rule_fair_lasso;
  CorrectnessVerdict partial_correctness;
  std::optional<CorrectnessVerdict> phi_correctness;
  std::optional<LengthBounds> lengths;
};

// Fairness searches use at most `fairness_budget` nodes.
ProtocolCheck check_protocol(const Protocol& p, const ExploreOptions& options,
                             const std::optional<Formula>& phi = std::nullopt,
                             std::size_t fairness_budget = 100'000);

Json to_json(const Protocol& p);
Json to_json(const Lasso& l, const Protocol& p);
// Leaves are listed only when `with_leaves` is set.
Json to_json(const ExplorationReport& r, const Protocol& p, bool with_leaves = false);
Json to_json(const TerminationVerdict& v, const Protocol& p);
Json to_json(const CorrectnessVerdict& v, const Protocol& p);
Json to_json(const SimulationVerdict& v, const AgentNames& names);
Json to_json(const BisimulationVerdict& v, const AgentNames& names);
Json to_json(const ProtocolCheck& c, const Protocol& p);

}  // namespace gossip
