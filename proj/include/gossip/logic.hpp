#pragma once

// Truth of formulas at call sequences, and truth over all call sequences.
//
// K_a over a propositional body is decided exactly by searching the
// situations consistent with a's view. K_a over a body that itself contains
// knowledge is evaluated over the bounded set of class representatives; such
// results carry exact = false. Common knowledge is evaluated only where a
// closed characterisation is available (singleton groups, groups of three or
// more, and two-agent groups with negation-free bodies at sequences without a
// call between the two members).

#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <unordered_map>

#include "gossip/equivalence.hpp"
#include "gossip/formula.hpp"
#include "gossip/model.hpp"

namespace gossip {

class UnsupportedCommon : public GossipError {
 public:
  using GossipError::GossipError;
};

class FragmentError : public GossipError {
 public:
  using GossipError::GossipError;
};

struct EvalConfig {
  // Sequences quantified by K_a; nullopt means the complete digraph.
  std::optional<Digraph> domain;
  // Length bound for representatives under nested knowledge; 0 rejects
  // nested knowledge.
  std::size_t representative_bound = 0;
  // Sequence-length bound for truth of non-propositional bodies of common
  // knowledge over groups of three or more.
  std::size_t truth_bound = 4;
  std::size_t budget = kDefaultUniverseBudget;
};

struct EvalResult {
  bool value = false;
  // false when some knowledge operator was evaluated over a bounded set of
  // representatives.
  bool exact = true;
};

struct TruthResult {
  bool holds = true;
  std::optional<GossipSituation> counterexample;
  std::optional<CallSequence> witness;
};

struct BoundedTruth {
  bool refuted = false;
  std::optional<CallSequence> counterexample;
  std::size_t bound = 0;
  std::size_t sequences_checked = 0;
  bool exact = true;
};

// Evaluates formulas over a fixed agent count, caching knowledge verdicts by
// (agent, view, subformula). Not thread-safe; use one per worker.
class Evaluator {
 public:
  explicit Evaluator(int n, EvalConfig config = {});

  int agents() const { return n_; }
  const EvalConfig& config() const { return config_; }
  const Digraph& domain() const { return domain_; }

  EvalResult eval(const Formula& f, const CallSequence& seq);
  bool holds(const Formula& f, const CallSequence& seq) { return eval(f, seq).value; }

  // Truth over all call sequences for propositional formulas, cached.
  TruthResult truth_L0(const Formula& f);

  std::size_t knowledge_queries() const { return queries_; }
  std::size_t knowledge_cache_hits() const { return hits_; }

 private:
  struct Point {
    const CallSequence& seq;
    GossipSituation situation;
  };

  EvalResult eval_at(const Formula& f, const Point& at);
  EvalResult know(Agent a, const Formula& body, const Point& at);
  EvalResult common(const Formula& f, const Point& at);
  bool know_propositional(const AgentView& view, const Formula& body);

  // (subformula, view, representative bound; 0 for exact verdicts)
  using KnowKey = std::tuple<const void*, AgentView, std::size_t>;

  int n_;
  EvalConfig config_;
  Digraph domain_;
  std::map<KnowKey, EvalResult> know_cache_;
  std::unordered_map<const void*, TruthResult> truth_cache_;
  std::unordered_map<const void*, Formula> surrogates_;
  std::unordered_map<const void*, Formula> pinned_;
  std::size_t queries_ = 0;
  std::size_t hits_ = 0;
};

EvalResult eval(const Formula& f, const CallSequence& seq, int n, const EvalConfig& config = {});

// Propositional truth: checks every situation reachable over `g`.
TruthResult is_true_L0(const Formula& f, int n, const Digraph& g);

// Searches every sequence over `g` of length <= len_bound, shortest first and
// lexicographic within a length, for one falsifying `f`.
BoundedTruth holds_for_all_bounded(const Formula& f, int n, const Digraph& g, std::size_t len_bound,
                                   const EvalConfig& config = {});

enum class Axiom {
  Chain,       // secrets travel along chains of mutual familiarity
  Reveal,      // learning a secret reveals one's own
  OnlyCaller,  // the only other holder of B also holds the matching secret
};

Formula build_axiom(int n, Axiom which);

}  // namespace gossip
