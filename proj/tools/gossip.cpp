// gossip: command-line front end.
//
// Exit codes: 0 true/success, 1 false/failure, 2 usage or input error,
// 3 verdict relative to a budget or bound.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "gossip/replicate.hpp"

using namespace gossip;

namespace {

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

std::size_t env_size(const char* var, std::size_t fallback) {
  const char* value = std::getenv(var);
  if (!value || !*value) return fallback;
  try {
    return static_cast<std::size_t>(std::stoull(value));
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring invalid " << var << '\n';
    return fallback;
  }
}

struct AgentFlags {
  int agents = 3;
  std::string names;

  void add(CLI::App* cmd) {
    cmd->add_option("-n,--agents", agents, "Number of agents, named a, b, c, ...")->check(CLI::Range(2, kMaxAgents));
    cmd->add_option("--names", names, "Comma-separated agent names (overrides --agents)");
  }

  AgentNames resolve() const {
    if (names.empty()) return default_names(agents);
    std::vector<std::string> list;
    std::stringstream in(names);
    for (std::string item; std::getline(in, item, ',');) list.push_back(item);
    return AgentNames(list);
  }
};

// A shape name or an edge list "a->b, b->c".
Digraph parse_digraph(const std::string& text, const AgentNames& names) {
  const int n = names.size();
  if (text == "complete") return Digraph::complete(n);
  if (text == "path") return Digraph::path(n);
  if (text == "ring") return Digraph::ring(n);
  if (text == "star") return Digraph::star(n, 0);
  Digraph g(n);
  std::stringstream in(text);
  for (std::string edge; std::getline(in, edge, ',');) {
    const auto arrow = edge.find("->");
    if (arrow == std::string::npos) throw GossipError("bad edge '" + edge + "'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const auto from = names.find_agent(trim(edge.substr(0, arrow)));
    const auto to = names.find_agent(trim(edge.substr(arrow + 2)));
    if (!from || !to || *from == *to) throw GossipError("bad edge '" + edge + "'");
    g.add_edge(*from, *to);
  }
  return g;
}

struct BudgetFlags {
  std::size_t nodes = 0;
  std::size_t depth = 0;

  void add(CLI::App* cmd) {
    nodes = env_size("GOSSIP_BUDGET_NODES", ExploreOptions{}.node_budget);
    depth = env_size("GOSSIP_BUDGET_DEPTH", 0);
    cmd->add_option("--budget-nodes", nodes, "Node budget (default from GOSSIP_BUDGET_NODES or 10^7)");
    cmd->add_option("--budget-depth", depth, "Depth budget, 0 for n^4 (default from GOSSIP_BUDGET_DEPTH)");
  }

  void apply(ExploreOptions& o) const {
    o.node_budget = nodes;
    o.depth_budget = depth;
  }
};

void print_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int outcome_code(Outcome o) {
  switch (o) {
    case Outcome::Yes: return kTrue;
    case Outcome::No: return kFalse;
    case Outcome::Unknown: return kBudget;
  }
  return kUsage;
}

// Text output names the empty sequence; JSON keeps "".
std::string shown(const CallSequence& seq, const AgentNames& names) {
  return seq.empty() ? std::string("(empty)") : render(seq, names);
}

std::string describe(const Lasso& l, const Protocol& p) {
  return "stem " + shown(l.stem, p.names()) + ", period " +
         render(period_calls(p, l), p.names());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epistemic gossip protocols: formulas, protocol checks and simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Machine-readable output");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Truth of a formula after a call sequence");
  AgentFlags eval_agents;
  eval_agents.add(eval_cmd);
  std::string eval_formula, eval_sequence, eval_digraph;
  std::size_t eval_bound = 0, eval_truth_bound = 4;
  eval_cmd->add_option("formula", eval_formula, "Formula, e.g. 'K(a, Exp(b))'")->required();
  eval_cmd->add_option("sequence", eval_sequence, "Calls, e.g. 'ab,bc' (empty for the root)");
  eval_cmd->add_option("--bound", eval_bound, "Representative length bound for nested knowledge");
  eval_cmd->add_option("--truth-bound", eval_truth_bound, "Sequence bound for common knowledge of epistemic bodies");
  eval_cmd->add_option("--digraph", eval_digraph, "Restrict K to sequences over this digraph");

  // truth
  auto* truth_cmd = app.add_subcommand("truth", "Truth of a formula after every call sequence");
  AgentFlags truth_agents;
  truth_agents.add(truth_cmd);
  std::string truth_formula, truth_digraph = "complete";
  std::size_t truth_bound = 4, truth_rep_bound = 0;
  truth_cmd->add_option("formula", truth_formula, "Formula")->required();
  truth_cmd->add_option("--bound", truth_bound, "Sequence length bound for epistemic formulas");
  truth_cmd->add_option("--rep-bound", truth_rep_bound, "Representative bound for nested knowledge");
  truth_cmd->add_option("--digraph", truth_digraph, "Digraph of allowed calls");

  // eqcheck
  auto* eq_cmd = app.add_subcommand("eqcheck", "Whether an agent can tell two call sequences apart");
  AgentFlags eq_agents;
  eq_agents.add(eq_cmd);
  std::string eq_lhs, eq_rhs, eq_agent;
  bool eq_oracle = false;
  std::size_t eq_bound = 0;
  eq_cmd->add_option("lhs", eq_lhs, "First call sequence")->required();
  eq_cmd->add_option("rhs", eq_rhs, "Second call sequence")->required();
  eq_cmd->add_option("agent", eq_agent, "Agent")->required();
  eq_cmd->add_flag("--oracle", eq_oracle, "Cross-check with the closure construction");
  eq_cmd->add_option("--bound", eq_bound, "Universe length bound for --oracle (default: longest input)");

  // check
  auto* check_cmd = app.add_subcommand("check", "Termination and correctness of a protocol");
  std::string check_ref, check_phi, check_digraph, check_mode = "auto";
  bool check_restrict = false, check_permissive = false, check_leaves = false;
  std::size_t check_rep_bound = 0;
  BudgetFlags check_budget;
  check_cmd->add_option("protocol", check_ref, "Protocol file or builtin such as lns:3, exp:4:path")->required();
  check_cmd->add_option("--phi", check_phi, "Also check that every leaf satisfies this formula");
  check_cmd->add_option("--digraph", check_digraph, "Replace the protocol digraph (shape or edge list)");
  check_cmd->add_flag("--restrict-knowledge", check_restrict, "Let K range only over sequences along the digraph");
  check_cmd->add_option("--mode", check_mode, "auto, tree or graph")->check(CLI::IsMember({"auto", "tree", "graph"}));
  check_cmd->add_option("--bound", check_rep_bound, "Representative bound for nested knowledge in --phi");
  check_cmd->add_flag("--permissive", check_permissive, "Accept any L1 guard in protocol files");
  check_cmd->add_flag("--leaves", check_leaves, "List leaves and lassos (with --json)");
  check_budget.add(check_cmd);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Whether P can simulate Q");
  std::string sim_p, sim_q;
  bool sim_bisim = false;
  std::size_t sim_bound = 0;
  BudgetFlags sim_budget;
  sim_cmd->add_option("P", sim_p, "Simulating protocol")->required();
  sim_cmd->add_option("Q", sim_q, "Simulated protocol")->required();
  sim_cmd->add_option("--bound", sim_bound, "Length bound (default n^4)");
  sim_cmd->add_flag("--bisim", sim_bisim, "Check both directions");
  sim_budget.add(sim_cmd);

  // replicate
  auto* rep_cmd = app.add_subcommand("replicate", "Run the worked-example cases");
  std::string rep_selector = "all", rep_manifest = default_manifest_path();
  bool rep_verbose = false;
  rep_cmd->add_option("case", rep_selector, "Case id, group prefix, or all");
  rep_cmd->add_option("--manifest", rep_manifest, "Manifest file");
  rep_cmd->add_flag("-v,--verbose", rep_verbose, "Show actual outcomes");

  // reachable
  auto* reach_cmd = app.add_subcommand("reachable", "Gossip situations reachable from the root");
  AgentFlags reach_agents;
  reach_agents.add(reach_cmd);
  std::string reach_digraph = "complete";
  bool reach_list = false;
  reach_cmd->add_option("--digraph", reach_digraph, "Digraph of allowed calls");
  reach_cmd->add_flag("--list", reach_list, "List situations with shortest witnesses");

  // dump
  auto* dump_cmd = app.add_subcommand("dump", "Print a protocol as JSON or as source");
  std::string dump_ref, dump_format = "json";
  dump_cmd->add_option("protocol", dump_ref, "Protocol file or builtin")->required();
  dump_cmd->add_option("--format", dump_format, "json or source")->check(CLI::IsMember({"json", "source"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*eval_cmd) {
      const AgentNames names = eval_agents.resolve();
      EvalConfig config;
      config.representative_bound = eval_bound;
      config.truth_bound = eval_truth_bound;
      if (!eval_digraph.empty()) config.domain = parse_digraph(eval_digraph, names);
      const EvalResult r = eval(parse_formula(eval_formula, names), parse_sequence(eval_sequence, names),
                                names.size(), config);
      if (json)
        print_json({{"value", r.value}, {"exact", r.exact}});
      else
        std::cout << (r.value ? "true" : "false") << " (" << (r.exact ? "exact" : "bounded") << ")\n";
      return r.value ? kTrue : kFalse;
    }

    if (*truth_cmd) {
      const AgentNames names = truth_agents.resolve();
      const Formula f = parse_formula(truth_formula, names);
      const Digraph g = parse_digraph(truth_digraph, names);
      if (is_propositional(f)) {
        const TruthResult t = is_true_L0(f, names.size(), g);
        if (json) {
          print_json({{"holds", t.holds},
                      {"exact", true},
                      {"counterexample", t.counterexample ? Json(render(*t.counterexample, names)) : Json(nullptr)},
                      {"witness", t.witness ? Json(render(*t.witness, names)) : Json(nullptr)}});
        } else {
          std::cout << (t.holds ? "true" : "false") << " (exact)\n";
          if (!t.holds)
            std::cout << "counterexample: " << render(*t.counterexample, names) << " after "
                      << shown(*t.witness, names) << '\n';
        }
        return t.holds ? kTrue : kFalse;
      }
      EvalConfig config;
      config.representative_bound = truth_rep_bound;
      const BoundedTruth t = holds_for_all_bounded(f, names.size(), g, truth_bound, config);
      if (json) {
        print_json({{"holds", !t.refuted},
                    {"exact", false},
                    {"bound", t.bound},
                    {"checked", t.sequences_checked},
                    {"counterexample", t.counterexample ? Json(render(*t.counterexample, names)) : Json(nullptr)}});
      } else if (t.refuted) {
        std::cout << "false after " << shown(*t.counterexample, names) << '\n';
      } else {
        std::cout << "no counterexample among " << t.sequences_checked << " sequences of length <= " << t.bound
                  << '\n';
      }
      return t.refuted ? kFalse : kBudget;
    }

    if (*eq_cmd) {
      const AgentNames names = eq_agents.resolve();
      const CallSequence lhs = parse_sequence(eq_lhs, names);
      const CallSequence rhs = parse_sequence(eq_rhs, names);
      const auto a = names.find_agent(eq_agent);
      if (!a) throw GossipError("unknown agent '" + eq_agent + "'");
      const bool same = equivalent(lhs, rhs, *a, names.size());
      Json out{{"equivalent", same}};
      if (eq_oracle) {
        const std::size_t bound = std::max({eq_bound, lhs.size(), rhs.size()});
        out["oracle"] = closure_oracle(lhs, rhs, *a, names.size(), bound);
        out["oracle_bound"] = bound;
      }
      if (json) {
        print_json(out);
      } else {
        std::cout << (same ? "indistinguishable" : "distinguishable") << " for " << eq_agent << '\n';
        if (eq_oracle)
          std::cout << "closure construction (length <= " << out["oracle_bound"].get<std::size_t>()
                    << "): " << (out["oracle"].get<bool>() == same ? "agrees" : "DISAGREES") << '\n';
      }
      return same ? kTrue : kFalse;
    }

    if (*check_cmd) {
      ProtocolOptions popts;
      popts.permissive_guards = check_permissive;
      Protocol p = protocol_from_ref(check_ref, popts);
      if (!check_digraph.empty())
        p = Protocol(p.names(), p.programs(), parse_digraph(check_digraph, p.names()), p.options());
      ExploreOptions o;
      check_budget.apply(o);
      o.restrict_knowledge_to_digraph = check_restrict;
      o.representative_bound = check_rep_bound;
      o.mode = check_mode == "tree" ? ExploreMode::Tree
               : check_mode == "graph" ? ExploreMode::SituationGraph
                                       : ExploreMode::Auto;
      std::optional<Formula> phi;
      if (!check_phi.empty()) phi = parse_formula(check_phi, p.names());
      const ProtocolCheck c = check_protocol(p, o, phi);

      int code = outcome_code(c.termination.terminates);
      auto fold = [&](Outcome v) {
        const int k = outcome_code(v);
        if (k == kFalse || code == kFalse) code = kFalse;
        else code = std::max(code, k);
      };
      fold(c.partial_correctness.correct);
      if (c.phi_correctness) fold(c.phi_correctness->correct);

      if (json) {
        Json out = to_json(c, p);
        if (check_leaves) {
          Engine engine(p, o);
          out["exploration"] = to_json(engine.explore(), p, true);
        }
        print_json(out);
        return code;
      }
      for (const std::string& w : p.warnings()) std::cout << "warning: " << w << '\n';
      std::cout << "agents: " << p.agents() << (p.is_propositional() ? " (propositional guards)" : "") << '\n';
      std::cout << "terminates: " << to_string(c.termination.terminates);
      if (c.termination.terminates == Outcome::Unknown)
        std::cout << " (" << c.termination.report.truncation_reason << ")";
      std::cout << '\n';
      if (c.termination.witness) {
        std::cout << "  infinite computation: " << describe(*c.termination.witness, p)
                  << "; agent-fair: " << yes_no(c.witness_fairness->agent_fair)
                  << ", rule-fair: " << yes_no(c.witness_fairness->rule_fair) << '\n';
        std::cout << "  agent-fair lasso: " << (c.agent_fair_lasso ? describe(*c.agent_fair_lasso, p) : "none found")
                  << '\n';
        std::cout << "  rule-fair lasso: " << (c.rule_fair_lasso ? describe(*c.rule_fair_lasso, p) : "none found")
                  << '\n';
      }
      std::cout << "partially correct: " << to_string(c.partial_correctness.correct);
      if (c.partial_correctness.counterexample)
        std::cout << " (leaf " << shown(*c.partial_correctness.counterexample, p.names()) << ')';
      std::cout << '\n';
      if (c.phi_correctness) {
        std::cout << "phi-correct: " << to_string(c.phi_correctness->correct);
        if (c.phi_correctness->counterexample)
          std::cout << " (leaf " << shown(*c.phi_correctness->counterexample, p.names()) << ')';
        if (!c.phi_correctness->exact) std::cout << " [bounded]";
        std::cout << '\n';
      }
      if (c.lengths)
        std::cout << "computation lengths: " << c.lengths->min << ".." << c.lengths->max << " over "
                  << c.lengths->computations << " computations\n";
      return code;
    }

    if (*sim_cmd) {
      const Protocol p = protocol_from_ref(sim_p);
      const Protocol q = protocol_from_ref(sim_q);
      ExploreOptions o;
      sim_budget.apply(o);
      o.depth_budget = sim_bound;
      auto verdict_code = [](const SimulationVerdict& v) {
        if (!v.simulates) return kFalse;
        return v.bound_relative ? kBudget : kTrue;
      };
      auto describe_sim = [&](const std::string& who, const std::string& whom, const SimulationVerdict& v) {
        std::cout << who << " simulates " << whom << ": " << yes_no(v.simulates);
        if (v.counterexample)
          std::cout << " (" << shown(*v.counterexample, q.names()) << " and " << v.minimal_counterexamples.size() - 1
                    << " other shortest witnesses)";
        if (v.bound_relative) std::cout << " [up to length " << v.bound << "]";
        std::cout << '\n';
      };
      if (sim_bisim) {
        const BisimulationVerdict v = bisimilar(p, q, o);
        if (json) {
          print_json(to_json(v, p.names()));
        } else {
          describe_sim("P", "Q", v.forward);
          describe_sim("Q", "P", v.backward);
          std::cout << "bisimilar: " << yes_no(v.bisimilar) << '\n';
        }
        if (!v.bisimilar) return kFalse;
        return std::max(verdict_code(v.forward), verdict_code(v.backward));
      }
      const SimulationVerdict v = simulates(p, q, o);
      if (json)
        print_json(to_json(v, q.names()));
      else
        describe_sim("P", "Q", v);
      return verdict_code(v);
    }

    if (*rep_cmd) {
      const std::vector<ReplicationCase> cases = select_cases(load_manifest(rep_manifest), rep_selector);
      Json results = Json::array();
      std::size_t failed = 0;
      for (const ReplicationCase& c : cases) {
        const ReplicationResult r = run_case(c);
        if (!r.pass) ++failed;
        if (json) {
          results.push_back({{"id", r.id},
                             {"description", r.description},
                             {"pass", r.pass},
                             {"expected", r.expected},
                             {"actual", r.actual},
                             {"error", r.error},
                             {"mismatches", r.mismatches}});
          continue;
        }
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << "  " << r.description << '\n';
        if (!r.error.empty()) std::cout << "     error: " << r.error << '\n';
        for (const std::string& m : r.mismatches) std::cout << "     " << m << '\n';
        if (rep_verbose) std::cout << "     actual: " << r.actual.dump() << '\n';
      }
      if (json)
        print_json({{"cases", results}, {"passed", cases.size() - failed}, {"failed", failed}});
      else
        std::cout << cases.size() - failed << "/" << cases.size() << " cases passed\n";
      return failed == 0 ? kTrue : kFalse;
    }

    if (*reach_cmd) {
      const AgentNames names = reach_agents.resolve();
      const ReachableSet r = explore_reachable(names.size(), parse_digraph(reach_digraph, names));
      if (json) {
        Json list = Json::array();
        if (reach_list)
          for (std::size_t i = 0; i < r.situations.size(); ++i)
            list.push_back({{"situation", render(r.situations[i], names)}, {"witness", render(r.witness(i), names)}});
        print_json({{"count", r.situations.size()}, {"situations", list}});
      } else {
        std::cout << r.situations.size() << " reachable situations\n";
        if (reach_list)
          for (std::size_t i = 0; i < r.situations.size(); ++i) {
            const CallSequence w = r.witness(i);
            std::cout << "  " << render(r.situations[i], names) << "  <- " << (w.empty() ? "(root)" : render(w, names))
                      << '\n';
          }
      }
      return kTrue;
    }

    if (*dump_cmd) {
      const Protocol p = protocol_from_ref(dump_ref);
      if (dump_format == "source")
        std::cout << render_protocol(p);
      else
        print_json(to_json(p));
      return kTrue;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const GossipError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
