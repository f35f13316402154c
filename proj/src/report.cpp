#include "gossip/report.hpp"

namespace gossip {
namespace {

Json sequences(const std::vector<CallSequence>& seqs, const AgentNames& names) {
  Json out = Json::array();
  for (const CallSequence& s : seqs) out.push_back(render(s, names));
  return out;
}

Json optional_sequence(const std::optional<CallSequence>& seq, const AgentNames& names) {
  return seq ? Json(render(*seq, names)) : Json(nullptr);
}

Json optional_length(const std::optional<std::size_t>& n) { return n ? Json(*n) : Json(nullptr); }

Json fair_lasso_json(const std::optional<Lasso>& l, const Protocol& p) {
  return l ? to_json(*l, p) : Json(nullptr);
}

}  // namespace

ProtocolCheck check_protocol(const Protocol& p, const ExploreOptions& options, const std::optional<Formula>& phi,
                             std::size_t fairness_budget) {
  ProtocolCheck c;
  c.termination = decide_termination(p, options);
  if (c.termination.witness) {
    c.witness_fairness = classify_lasso(p, *c.termination.witness, options);
    ExploreOptions search = options;
    search.node_budget = std::min(options.node_budget, fairness_budget);
    c.agent_fair_lasso = find_fair_lasso(p, FairnessKind::Agent, search);
    c.rule_fair_lasso = find_fair_lasso(p, FairnessKind::Rule, search);
  }
  c.partial_correctness = check_partial_correctness(p, options);
  if (phi) c.phi_correctness = check_phi_correctness(p, *phi, options);
  if (c.termination.terminates == Outcome::Yes) c.lengths = computation_length_bounds(p, options);
  return c;
}

Json to_json(const ProtocolCheck& c, const Protocol& p) {
  const AgentNames& names = p.names();
  Json out;
  out["terminates"] = to_string(c.termination.terminates);
  if (c.termination.witness) {
    Json w = to_json(*c.termination.witness, p);
    w["agent_fair"] = c.witness_fairness->agent_fair;
    w["rule_fair"] = c.witness_fairness->rule_fair;
    out["witness"] = std::move(w);
    out["agent_fair_lasso"] = fair_lasso_json(c.agent_fair_lasso, p);
    out["rule_fair_lasso"] = fair_lasso_json(c.rule_fair_lasso, p);
  } else {
    out["witness"] = nullptr;
  }
  out["partially_correct"] = to_string(c.partial_correctness.correct);
  out["counterexample"] = optional_sequence(c.partial_correctness.counterexample, names);
  if (c.partial_correctness.counterexample) {
    const GossipSituation s = apply_sequence(initial_situation(p.agents()), *c.partial_correctness.counterexample);
    Json missing = Json::array();
    for (Agent a = 0; a < p.agents(); ++a)
      if (!is_expert(s, a)) missing.push_back(names.agent(a));
    out["non_experts"] = std::move(missing);
  }
  out["correct_terminating"] =
      c.termination.terminates == Outcome::Yes && c.partial_correctness.correct == Outcome::Yes;
  if (c.phi_correctness) out["phi"] = to_json(*c.phi_correctness, p);
  if (c.lengths) {
    out["min_length"] = c.lengths->min;
    out["max_length"] = c.lengths->max;
    out["computations"] = c.lengths->computations;
  }
  out["exploration"] = to_json(c.termination.report, p);
  out["warnings"] = p.warnings();
  out["outside_guard_restriction"] = p.outside_guard_restriction();
  return out;
}

Json to_json(const Protocol& p) {
  const AgentNames& names = p.names();
  Json out;
  out["agents"] = names.names();
  Json edges = Json::array();
  for (Call c : p.digraph().calls()) edges.push_back({names.agent(c.caller), names.agent(c.callee)});
  out["graph"] = std::move(edges);
  Json programs = Json::array();
  for (const Program& prog : p.programs()) {
    Json rules = Json::array();
    for (const Rule& r : prog.rules)
      rules.push_back({{"guard", render(r.guard, names)}, {"call", render(r.call, names)}});
    programs.push_back({{"owner", names.agent(prog.owner)}, {"rules", std::move(rules)}});
  }
  out["programs"] = std::move(programs);
  out["propositional"] = p.is_propositional();
  out["outside_guard_restriction"] = p.outside_guard_restriction();
  out["warnings"] = p.warnings();
  return out;
}

Json to_json(const Lasso& l, const Protocol& p) {
  return {{"stem", render(l.stem, p.names())}, {"period", render(period_calls(p, l), p.names())}};
}

Json to_json(const ExplorationReport& r, const Protocol& p, bool with_leaves) {
  const AgentNames& names = p.names();
  Json out;
  out["mode"] = to_string(r.mode);
  out["nodes"] = r.nodes;
  out["truncated"] = r.truncated;
  if (r.truncated) out["truncation_reason"] = r.truncation_reason;
  out["computations"] = r.computations;
  out["min_length"] = optional_length(r.min_length);
  out["max_length"] = optional_length(r.max_length);
  out["lasso_count"] = r.lassos.size();
  if (with_leaves) {
    if (r.mode == ExploreMode::Tree) {
      out["leaves"] = sequences(r.leaves, names);
    } else {
      Json leaves = Json::array();
      for (std::size_t i = 0; i < r.leaf_situations.size(); ++i)
        leaves.push_back({{"situation", render(r.leaf_situations[i], names)},
                          {"witness", render(r.leaf_witnesses[i], names)}});
      out["leaf_situations"] = std::move(leaves);
    }
    Json lassos = Json::array();
    for (const Lasso& l : r.lassos) lassos.push_back(to_json(l, p));
    out["lassos"] = std::move(lassos);
  }
  out["outside_guard_restriction"] = r.outside_guard_restriction;
  return out;
}

Json to_json(const TerminationVerdict& v, const Protocol& p) {
  Json out;
  out["terminates"] = to_string(v.terminates);
  out["witness"] = v.witness ? to_json(*v.witness, p) : Json(nullptr);
  out["report"] = to_json(v.report, p);
  return out;
}

Json to_json(const CorrectnessVerdict& v, const Protocol& p) {
  Json out;
  out["correct"] = to_string(v.correct);
  out["counterexample"] = optional_sequence(v.counterexample, p.names());
  out["exact"] = v.exact;
  out["leaves_checked"] = v.leaves_checked;
  return out;
}

Json to_json(const SimulationVerdict& v, const AgentNames& names) {
  Json out;
  out["simulates"] = v.simulates;
  out["counterexample"] = optional_sequence(v.counterexample, names);
  out["minimal_counterexamples"] = sequences(v.minimal_counterexamples, names);
  out["bound"] = v.bound;
  out["bound_relative"] = v.bound_relative;
  return out;
}

Json to_json(const BisimulationVerdict& v, const AgentNames& names) {
  return {{"bisimilar", v.bisimilar}, {"forward", to_json(v.forward, names)}, {"backward", to_json(v.backward, names)}};
}

}  // namespace gossip
