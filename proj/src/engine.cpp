#include "gossip/engine.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace gossip {
namespace {

EvalConfig eval_config(const Protocol& p, const ExploreOptions& options) {
  EvalConfig config;
  if (options.restrict_knowledge_to_digraph) config.domain = p.digraph();
  config.representative_bound = options.representative_bound;
  return config;
}

std::size_t depth_cap(int n, const ExploreOptions& options) {
  if (options.depth_budget != 0) return options.depth_budget;
  const auto m = static_cast<std::size_t>(n);
  return m * m * m * m;
}

ExploreMode resolve(const Protocol& p, ExploreMode mode) {
  if (mode == ExploreMode::Auto) return p.is_propositional() ? ExploreMode::SituationGraph : ExploreMode::Tree;
  if (mode == ExploreMode::SituationGraph && !p.is_propositional())
    throw GossipError("situation-graph exploration needs a propositional protocol");
  return mode;
}

// The last occurrence of c in seq already produced `now`, so appending c
// again repeats it redundantly. trace[i] is the situation after i calls.
bool closes_pattern(const CallSequence& seq, const std::vector<GossipSituation>& trace, Call c,
                    const GossipSituation& now) {
  for (std::size_t p = seq.size(); p-- > 0;)
    if (seq[p] == c) return trace[p + 1] == now;
  return false;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

// First enabled rule for each distinct call, lexicographic by call.
std::map<Call, RuleRef> by_call(const Protocol& p, const std::vector<RuleRef>& rules) {
  std::map<Call, RuleRef> out;
  for (RuleRef r : rules) out.emplace(p.rule(r).call, r);
  return out;
}

}  // namespace

const char* to_string(ExploreMode m) {
  switch (m) {
    case ExploreMode::Auto: return "auto";
    case ExploreMode::Tree: return "tree";
    case ExploreMode::SituationGraph: return "situation-graph";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Yes: return "yes";
    case Outcome::No: return "no";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

CallSequence period_calls(const Protocol& p, const Lasso& l) {
  CallSequence out;
  for (RuleRef r : l.period) out.push_back(p.rule(r).call);
  return out;
}

Engine::Engine(Protocol protocol, ExploreOptions options)
    : protocol_(std::move(protocol)),
      options_(options),
      evaluator_(protocol_.agents(), eval_config(protocol_, options_)) {}

bool Engine::rule_enabled(const Rule& r, const CallSequence& seq, const GossipSituation& s) {
  if (is_propositional(r.guard)) return holds_in(r.guard, s);
  return evaluator_.holds(r.guard, seq);
}

std::vector<RuleRef> Engine::enabled_rules(const CallSequence& seq) {
  const GossipSituation s = apply_sequence(initial_situation(protocol_.agents()), seq);
  std::vector<RuleRef> out;
  for (RuleRef r : protocol_.rules())
    if (rule_enabled(protocol_.rule(r), seq, s)) out.push_back(r);
  return out;
}

std::vector<RuleRef> Engine::enabled_rules_at(const GossipSituation& s) const {
  if (!protocol_.is_propositional()) throw GossipError("enabledness at a bare situation needs propositional guards");
  std::vector<RuleRef> out;
  for (RuleRef r : protocol_.rules())
    if (holds_in(protocol_.rule(r).guard, s)) out.push_back(r);
  return out;
}

std::vector<Call> Engine::enabled_calls(const CallSequence& seq) {
  std::vector<Call> out;
  for (const auto& [call, rule] : by_call(protocol_, enabled_rules(seq))) out.push_back(call);
  return out;
}

bool Engine::generable(const CallSequence& seq) {
  const int n = protocol_.agents();
  CallSequence prefix;
  for (Call c : seq) {
    if (c.caller < 0 || c.caller >= n || c.callee < 0 || c.callee >= n || c.caller == c.callee) return false;
    const std::vector<Call> calls = enabled_calls(prefix);
    if (!std::binary_search(calls.begin(), calls.end(), c)) return false;
    prefix.push_back(c);
  }
  return true;
}

ExplorationReport Engine::explore() {
  return resolve(protocol_, options_.mode) == ExploreMode::SituationGraph ? explore_graph() : explore_tree();
}

ExplorationReport Engine::explore_tree() {
  const int n = protocol_.agents();
  const std::size_t max_depth = depth_cap(n, options_);
  ExplorationReport rep;
  rep.agents = n;
  rep.mode = ExploreMode::Tree;
  rep.outside_guard_restriction = protocol_.outside_guard_restriction();

  CallSequence seq;
  std::vector<GossipSituation> trace{initial_situation(n)};
  bool stop = false;

  auto dfs = [&](auto&& self) -> void {
    if (++rep.nodes > options_.node_budget) {
      rep.truncated = true;
      rep.truncation_reason = "node budget exhausted";
      stop = true;
      return;
    }
    const GossipSituation now = trace.back();
    std::vector<RuleRef> enabled;
    for (RuleRef r : protocol_.rules())
      if (rule_enabled(protocol_.rule(r), seq, now)) enabled.push_back(r);
    if (enabled.empty()) {
      rep.leaves.push_back(seq);
      rep.computations = saturating_add(rep.computations, 1);
      rep.min_length = std::min(rep.min_length.value_or(seq.size()), seq.size());
      rep.max_length = std::max(rep.max_length.value_or(seq.size()), seq.size());
      return;
    }
    if (seq.size() >= max_depth) {
      rep.truncated = true;
      rep.truncation_reason = "depth budget exhausted";
      stop = true;
      return;
    }
    for (const auto& [call, rule] : by_call(protocol_, enabled)) {
      GossipSituation next = apply_call(now, call);
      if (next == now && closes_pattern(seq, trace, call, now)) {
        rep.lassos.push_back(Lasso{seq, {rule}});
        if (options_.stop_at_first_lasso) {
          stop = true;
          return;
        }
        continue;
      }
      seq.push_back(call);
      trace.push_back(std::move(next));
      self(self);
      seq.pop_back();
      trace.pop_back();
      if (stop) return;
    }
  };
  dfs(dfs);
  return rep;
}

ExplorationReport Engine::explore_graph() {
  const int n = protocol_.agents();
  ExplorationReport rep;
  rep.agents = n;
  rep.mode = ExploreMode::SituationGraph;
  rep.outside_guard_restriction = protocol_.outside_guard_restriction();

  std::vector<GossipSituation> nodes{initial_situation(n)};
  std::unordered_map<GossipSituation, std::size_t, SituationHash> index{{nodes[0], 0}};
  std::vector<std::size_t> parent{0};
  std::vector<Call> via{Call{}};
  std::vector<std::vector<std::size_t>> edges(1);
  std::vector<bool> leaf(1, false);

  auto path_to = [&](std::size_t i) {
    CallSequence out;
    for (; i != 0; i = parent[i]) out.push_back(via[i]);
    std::reverse(out.begin(), out.end());
    return out;
  };

  bool stop = false;
  for (std::size_t i = 0; i < nodes.size() && !stop; ++i) {
    const GossipSituation s = nodes[i];
    const std::vector<RuleRef> enabled = enabled_rules_at(s);
    if (enabled.empty()) {
      leaf[i] = true;
      rep.leaf_situations.push_back(s);
      rep.leaf_witnesses.push_back(path_to(i));
      continue;
    }
    for (const auto& [call, rule] : by_call(protocol_, enabled)) {
      GossipSituation next = apply_call(s, call);
      if (next == s) {
        CallSequence stem = path_to(i);
        const std::vector<GossipSituation> trace = situation_trace(stem, n);
        if (!closes_pattern(stem, trace, call, s)) stem.push_back(call);
        rep.lassos.push_back(Lasso{std::move(stem), {rule}});
        if (options_.stop_at_first_lasso) {
          stop = true;
          break;
        }
        continue;
      }
      auto [it, inserted] = index.emplace(next, nodes.size());
      if (inserted) {
        if (nodes.size() >= options_.node_budget) {
          rep.truncated = true;
          rep.truncation_reason = "node budget exhausted";
          stop = true;
          break;
        }
        nodes.push_back(std::move(next));
        parent.push_back(i);
        via.push_back(call);
        edges.emplace_back();
        leaf.push_back(false);
      }
      edges[i].push_back(it->second);
    }
  }
  rep.nodes = nodes.size();
  if (stop) return rep;

  // Productive edges strictly grow the situation, so decreasing weight is a
  // reverse topological order.
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return nodes[x].weight() > nodes[y].weight(); });
  std::vector<std::uint64_t> count(nodes.size(), 0);
  std::vector<std::optional<std::size_t>> lo(nodes.size()), hi(nodes.size());
  for (std::size_t i : order) {
    if (leaf[i]) {
      count[i] = 1;
      lo[i] = hi[i] = 0;
      continue;
    }
    for (std::size_t t : edges[i]) {
      count[i] = saturating_add(count[i], count[t]);
      if (lo[t]) lo[i] = std::min(lo[i].value_or(*lo[t] + 1), *lo[t] + 1);
      if (hi[t]) hi[i] = std::max(hi[i].value_or(*hi[t] + 1), *hi[t] + 1);
    }
  }
  rep.computations = count[0];
  rep.min_length = lo[0];
  rep.max_length = hi[0];
  return rep;
}

bool Engine::verify_lasso(const Lasso& l, std::string* why) {
  auto fail = [&](std::string message) {
    if (why) *why = std::move(message);
    return false;
  };
  if (l.period.empty()) return fail("empty period");
  for (RuleRef r : l.period)
    if (r.agent < 0 || r.agent >= protocol_.agents() || r.index >= protocol_.program(r.agent).rules.size())
      return fail("period names a rule that does not exist");
  if (!generable(l.stem)) return fail("stem is not generable");
  const std::vector<GossipSituation> trace = situation_trace(l.stem, protocol_.agents());
  const GossipSituation& now = trace.back();
  const std::vector<RuleRef> enabled = enabled_rules(l.stem);
  for (RuleRef r : l.period) {
    const Call c = protocol_.rule(r).call;
    if (!std::binary_search(enabled.begin(), enabled.end(), r))
      return fail("period rule for " + render(c, protocol_.names()) + " is not enabled after the stem");
    if (apply_call(now, c) != now) return fail("period call " + render(c, protocol_.names()) + " is productive");
    if (!closes_pattern(l.stem, trace, c, now))
      return fail("period call " + render(c, protocol_.names()) + " does not repeat a call made in the final situation");
  }
  return true;
}

Fairness classify_lasso(Engine& engine, const Lasso& l) {
  std::string why;
  if (!engine.verify_lasso(l, &why)) throw std::logic_error("lasso is not stationary: " + why);
  const std::vector<RuleRef> enabled = engine.enabled_rules(l.stem);
  AgentSet enabled_agents, period_agents;
  for (RuleRef r : enabled) enabled_agents.insert(r.agent);
  for (RuleRef r : l.period) period_agents.insert(r.agent);
  Fairness out;
  out.agent_fair = enabled_agents.subset_of(period_agents);
  out.rule_fair = std::all_of(enabled.begin(), enabled.end(), [&](RuleRef r) {
    return std::find(l.period.begin(), l.period.end(), r) != l.period.end();
  });
  return out;
}

Fairness classify_lasso(const Protocol& p, const Lasso& l, const ExploreOptions& options) {
  Engine engine(p, options);
  return classify_lasso(engine, l);
}

std::optional<Lasso> find_fair_lasso(const Protocol& p, FairnessKind kind, const ExploreOptions& options) {
  Engine engine(p, options);
  const int n = p.agents();
  const std::size_t max_depth = depth_cap(n, options);
  const bool by_situation = p.is_propositional();
  std::unordered_set<GossipSituation, SituationHash> seen;
  std::deque<CallSequence> queue{CallSequence{}};
  seen.insert(initial_situation(n));
  std::size_t visited = 0;

  while (!queue.empty() && visited++ < options.node_budget) {
    const CallSequence x = std::move(queue.front());
    queue.pop_front();
    const std::vector<GossipSituation> trace = situation_trace(x, n);
    const GossipSituation& now = trace.back();
    const std::vector<RuleRef> enabled = engine.enabled_rules(x);

    std::vector<RuleRef> period;
    for (RuleRef r : enabled)
      if (apply_call(now, p.rule(r).call) == now) period.push_back(r);
    if (!period.empty()) {
      Lasso candidate{x, period};
      bool first_pass = true;
      for (RuleRef r : period) {
        const std::vector<RuleRef> here = engine.enabled_rules(candidate.stem);
        if (!std::binary_search(here.begin(), here.end(), r)) {
          first_pass = false;
          break;
        }
        candidate.stem.push_back(p.rule(r).call);
      }
      if (first_pass && engine.verify_lasso(candidate)) {
        const Fairness f = classify_lasso(engine, candidate);
        if (kind == FairnessKind::Agent ? f.agent_fair : f.rule_fair) return candidate;
      }
    }

    if (x.size() >= max_depth) continue;
    for (const auto& [call, rule] : by_call(p, enabled)) {
      GossipSituation next = apply_call(now, call);
      if (next == now && closes_pattern(x, trace, call, now)) continue;
      if (by_situation && !seen.insert(next).second) continue;
      CallSequence child = x;
      child.push_back(call);
      queue.push_back(std::move(child));
    }
  }
  return std::nullopt;
}

TerminationVerdict decide_termination(const Protocol& p, ExploreOptions options) {
  options.mode = resolve(p, options.mode);
  options.stop_at_first_lasso = true;
  Engine engine(p, options);
  TerminationVerdict v;
  v.report = engine.explore();
  if (!v.report.lassos.empty()) {
    v.terminates = Outcome::No;
    v.witness = v.report.lassos.front();
  } else {
    v.terminates = v.report.truncated ? Outcome::Unknown : Outcome::Yes;
  }
  return v;
}

namespace {

std::vector<CallSequence> sorted_leaves(const ExplorationReport& rep) {
  std::vector<CallSequence> leaves = rep.mode == ExploreMode::Tree ? rep.leaves : rep.leaf_witnesses;
  std::sort(leaves.begin(), leaves.end(), shortlex_less);
  return leaves;
}

Outcome settle(bool failed, bool truncated) {
  if (failed) return Outcome::No;
  return truncated ? Outcome::Unknown : Outcome::Yes;
}

}  // namespace

CorrectnessVerdict check_partial_correctness(const Protocol& p, ExploreOptions options) {
  return check_phi_correctness(p, Formula::conjunction([&] {
                                 std::vector<Formula> all;
                                 for (Agent a = 0; a < p.agents(); ++a) all.push_back(Formula::expert(a, p.agents()));
                                 return all;
                               }()),
                               options);
}

CorrectnessVerdict check_phi_correctness(const Protocol& p, const Formula& phi, ExploreOptions options) {
  if (max_index(phi) >= p.agents()) throw GossipError("formula mentions an agent outside the protocol");
  options.stop_at_first_lasso = false;
  if (options.mode == ExploreMode::Auto && !is_propositional(phi)) options.mode = ExploreMode::Tree;
  options.mode = resolve(p, options.mode);
  Engine engine(p, options);
  CorrectnessVerdict v;
  v.report = engine.explore();
  bool failed = false;
  if (v.report.mode == ExploreMode::SituationGraph) {
    // Witnesses are shortlex-least per situation and discovered in shortlex
    // order, so the first failure is the least failing leaf.
    for (std::size_t i = 0; i < v.report.leaf_situations.size(); ++i) {
      ++v.leaves_checked;
      if (holds_in(phi, v.report.leaf_situations[i])) continue;
      failed = true;
      v.counterexample = v.report.leaf_witnesses[i];
      break;
    }
  } else {
    for (const CallSequence& leaf : sorted_leaves(v.report)) {
      ++v.leaves_checked;
      const EvalResult r = engine.evaluator().eval(phi, leaf);
      v.exact = v.exact && r.exact;
      if (r.value) continue;
      failed = true;
      v.counterexample = leaf;
      break;
    }
  }
  v.correct = settle(failed, v.report.truncated);
  return v;
}

LengthBounds computation_length_bounds(const Protocol& p, ExploreOptions options) {
  options.mode = resolve(p, options.mode);
  options.stop_at_first_lasso = true;
  Engine engine(p, options);
  const ExplorationReport rep = engine.explore();
  if (!rep.lassos.empty()) throw GossipError("the protocol has infinite computations");
  if (rep.truncated) throw BudgetExceeded("exploration truncated: " + rep.truncation_reason);
  if (!rep.min_length) throw GossipError("the protocol has no finite computation");
  return LengthBounds{*rep.min_length, *rep.max_length, rep.computations};
}

}  // namespace gossip
