#pragma once

// Indistinguishability of call sequences for a single agent.
//
// The production predicate compares agent views: the agent's own calls, each
// paired with the secrets it holds right after the call. closure_oracle
// decides the same relation from the Base/Step closure rules, by saturation
// over a bounded universe, and exists to cross-check the view predicate.

#include <functional>
#include <optional>
#include <vector>

#include "gossip/model.hpp"

namespace gossip {

struct ViewStep {
  Call call;
  SecretSet secrets;

  auto operator<=>(const ViewStep&) const = default;
};

struct AgentView {
  Agent owner = 0;
  std::vector<ViewStep> steps;

  // The owner's secrets after the last step (its own secret if none).
  SecretSet final_secrets() const;

  auto operator<=>(const AgentView&) const = default;
};

AgentView agent_view(const CallSequence& seq, Agent a, int n);
bool equivalent(const CallSequence& s1, const CallSequence& s2, Agent a, int n);

inline constexpr std::size_t kDefaultUniverseBudget = 2'000'000;

// The closure of the Base/Step rules for agent a over every sequence on the
// complete digraph of length <= len_bound.
struct ClosureClasses {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Agent agent = 0;
  int agents = 0;
  std::vector<Call> calls;
  // Shortlex order.
  std::vector<CallSequence> universe;
  std::vector<std::size_t> children;
  // Equal entries mean equivalent sequences.
  std::vector<std::size_t> class_of;

  std::size_t index_of(const CallSequence& seq) const;
  bool equivalent(const CallSequence& s1, const CallSequence& s2) const;
};

ClosureClasses closure_classes(Agent a, int n, std::size_t len_bound, std::size_t budget = kDefaultUniverseBudget);

// Decides s1 ~a s2 by saturating the closure rules over every sequence on the
// complete digraph of length <= len_bound. Throws BudgetExceeded when that
// universe is larger than `budget`.
bool closure_oracle(const CallSequence& s1, const CallSequence& s2, Agent a, int n, std::size_t len_bound,
                    std::size_t budget = kDefaultUniverseBudget);

// Situations D(root) over all D with the given view whose calls outside the
// view come from `domain`.
std::vector<GossipSituation> class_situations(const AgentView& view, int n, const Digraph& domain);
std::vector<GossipSituation> class_situations(const CallSequence& seq, Agent a, int n, const Digraph& domain);

// First situation of the class (view steps explored before other calls) that
// satisfies `pred`, or nullopt when none does. Stops at the first hit.
std::optional<GossipSituation> find_class_situation(const AgentView& view, int n, const Digraph& domain,
                                                    const std::function<bool(const GossipSituation&)>& pred);

// Pointwise lower bound on every situation of the class: each partner holds
// at least what it shared in its last call with the owner.
GossipSituation knowledge_lower_bound(const AgentView& view, int n);

// Every D ~a seq with |D| <= len_bound, in shortlex order.
std::vector<CallSequence> class_representatives(const CallSequence& seq, Agent a, int n, const Digraph& domain,
                                                std::size_t len_bound,
                                                std::size_t budget = kDefaultUniverseBudget);

}  // namespace gossip
