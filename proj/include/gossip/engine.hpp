#pragma once

// Computation trees of protocols.
//
// Tree mode walks the generable call sequences that contain no epistemically
// redundant call. Appending an enabled call that would close a redundancy
// pattern is recorded as a lasso instead: by redundancy removal the guards
// after the longer sequence are those after the stem, so the call can be
// repeated forever. Every other path is bounded, so the walk is finite.
//
// Situation-graph mode applies only to propositional protocols, where
// enabledness depends on the gossip situation alone. Nodes are situations;
// an enabled call that does not change the situation is a lasso, and all
// other edges strictly grow the situation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gossip/logic.hpp"
#include "gossip/model.hpp"
#include "gossip/protocol.hpp"

namespace gossip {

enum class ExploreMode { Auto, Tree, SituationGraph };

const char* to_string(ExploreMode m);

struct ExploreOptions {
  std::size_t node_budget = 10'000'000;
  // 0 means n^4.
  std::size_t depth_budget = 0;
  bool stop_at_first_lasso = false;
  // Auto: the situation graph for propositional protocols, else the tree.
  ExploreMode mode = ExploreMode::Auto;
  // Let K quantify only over sequences along the protocol's digraph.
  bool restrict_knowledge_to_digraph = false;
  // Needed only for formulas with nested knowledge (see EvalConfig).
  std::size_t representative_bound = 0;
};

// The infinite computation stem.p1.p2...pk.p1.p2...pk... where p are the
// calls of the period rules.
struct Lasso {
  CallSequence stem;
  std::vector<RuleRef> period;

  bool operator==(const Lasso&) const = default;
};

CallSequence period_calls(const Protocol& p, const Lasso& l);

struct ExplorationReport {
  int agents = 0;
  ExploreMode mode = ExploreMode::Tree;
  // Tree mode: every leaf, in depth-first lexicographic order.
  std::vector<CallSequence> leaves;
  // Situation-graph mode: the situations at leaves, in discovery order, with
  // a shortlex-least sequence reaching each.
  std::vector<GossipSituation> leaf_situations;
  std::vector<CallSequence> leaf_witnesses;
  std::vector<Lasso> lassos;
  std::size_t nodes = 0;
  bool truncated = false;
  std::string truncation_reason;
  // Number of maximal finite computations (saturates at UINT64_MAX).
  std::uint64_t computations = 0;
  std::optional<std::size_t> min_length;
  std::optional<std::size_t> max_length;
  bool outside_guard_restriction = false;
};

class Engine {
 public:
  explicit Engine(Protocol protocol, ExploreOptions options = {});

  const Protocol& protocol() const { return protocol_; }
  const ExploreOptions& options() const { return options_; }
  Evaluator& evaluator() { return evaluator_; }

  // Rules whose guards hold after `seq`, in canonical order.
  std::vector<RuleRef> enabled_rules(const CallSequence& seq);
  // Propositional protocols only.
  std::vector<RuleRef> enabled_rules_at(const GossipSituation& s) const;
  // Distinct calls of the enabled rules, lexicographic.
  std::vector<Call> enabled_calls(const CallSequence& seq);
  bool generable(const CallSequence& seq);

  ExplorationReport explore();

  // Checks that the stem is generable and that every period call repeats
  // without changing the situation while its rule stays enabled.
  bool verify_lasso(const Lasso& l, std::string* why = nullptr);

 private:
  bool rule_enabled(const Rule& r, const CallSequence& seq, const GossipSituation& s);
  ExplorationReport explore_tree();
  ExplorationReport explore_graph();

  Protocol protocol_;
  ExploreOptions options_;
  Evaluator evaluator_;
};

struct Fairness {
  bool agent_fair = false;
  bool rule_fair = false;
};

// Throws std::logic_error when the lasso is not a valid stationary witness.
Fairness classify_lasso(Engine& engine, const Lasso& l);
Fairness classify_lasso(const Protocol& p, const Lasso& l, const ExploreOptions& options = {});

enum class FairnessKind { Agent, Rule };

// Breadth-first search for a lasso that is fair in the requested sense. The
// period at a node is every enabled rule whose call leaves the situation
// unchanged. Finding none within budget proves nothing.
std::optional<Lasso> find_fair_lasso(const Protocol& p, FairnessKind kind, const ExploreOptions& options = {});

enum class Outcome { Yes, No, Unknown };

const char* to_string(Outcome o);

struct TerminationVerdict {
  // Yes: terminates; No: diverges with `witness`; Unknown: budget ran out.
  Outcome terminates = Outcome::Unknown;
  std::optional<Lasso> witness;
  ExplorationReport report;
};

// Auto mode picks the situation graph for propositional protocols.
TerminationVerdict decide_termination(const Protocol& p, ExploreOptions options = {});

struct CorrectnessVerdict {
  Outcome correct = Outcome::Unknown;
  std::optional<CallSequence> counterexample;
  // false when some knowledge operator was evaluated over bounded
  // representatives.
  bool exact = true;
  std::size_t leaves_checked = 0;
  ExplorationReport report;
};

// Every leaf makes all agents experts. The counterexample is the
// shortlex-least failing leaf.
CorrectnessVerdict check_partial_correctness(const Protocol& p, ExploreOptions options = {});
// Every leaf satisfies phi.
CorrectnessVerdict check_phi_correctness(const Protocol& p, const Formula& phi, ExploreOptions options = {});

struct LengthBounds {
  std::size_t min = 0;
  std::size_t max = 0;
  std::uint64_t computations = 0;
};

// Throws GossipError when the protocol diverges and BudgetExceeded when the
// exploration is truncated.
LengthBounds computation_length_bounds(const Protocol& p, ExploreOptions options = {});

}  // namespace gossip
