#include "gossip/replicate.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>

#ifndef GOSSIP_DEFAULT_MANIFEST
#define GOSSIP_DEFAULT_MANIFEST "data/replication.json"
#endif

namespace gossip {
namespace {

AgentNames names_param(const Json& params) {
  const Json& agents = params.at("agents");
  if (agents.is_number_integer()) return default_names(agents.get<int>());
  return AgentNames(agents.get<std::vector<std::string>>());
}

ExploreOptions options_param(const Json& params) {
  ExploreOptions o;
  if (params.contains("mode")) {
    const std::string mode = params["mode"];
    if (mode == "tree") o.mode = ExploreMode::Tree;
    else if (mode == "graph") o.mode = ExploreMode::SituationGraph;
    else if (mode != "auto") throw GossipError("unknown mode '" + mode + "'");
  }
  if (params.contains("representative_bound")) o.representative_bound = params["representative_bound"];
  return o;
}

Formula formula_param(const Json& params, const AgentNames& names) {
  if (params.contains("axiom")) {
    const std::string which = params["axiom"];
    const int n = names.size();
    if (which == "chain") return build_axiom(n, Axiom::Chain);
    if (which == "reveal") return build_axiom(n, Axiom::Reveal);
    if (which == "only_caller") return build_axiom(n, Axiom::OnlyCaller);
    throw GossipError("unknown axiom '" + which + "'");
  }
  return parse_formula(params.at("formula").get<std::string>(), names);
}

Json rendered(const std::vector<CallSequence>& seqs, const AgentNames& names) {
  Json out = Json::array();
  for (const CallSequence& s : seqs) out.push_back(render(s, names));
  return out;
}

bool has_prefix(const CallSequence& seq, const CallSequence& prefix) {
  return seq.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), seq.begin());
}

using Runner = std::function<Json(const Json&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"apply",
       [](const Json& p) {
         const AgentNames names = names_param(p);
         const CallSequence seq = parse_sequence(p.at("sequence").get<std::string>(), names);
         Json trace = Json::array();
         const std::vector<GossipSituation> states = situation_trace(seq, names.size());
         for (std::size_t i = 1; i < states.size(); ++i) trace.push_back(render(states[i], names));
         return Json{{"trace", trace}, {"final", render(states.back(), names)}, {"all_experts", states.back().all_experts()}};
       }},
      {"equivalent",
       [](const Json& p) {
         const AgentNames names = names_param(p);
         const CallSequence lhs = parse_sequence(p.at("lhs").get<std::string>(), names);
         const CallSequence rhs = parse_sequence(p.at("rhs").get<std::string>(), names);
         const auto a = names.find_agent(p.at("agent").get<std::string>());
         if (!a) throw GossipError("unknown agent");
         return Json{{"equivalent", equivalent(lhs, rhs, *a, names.size())}};
       }},
      {"eval",
       [](const Json& p) {
         const AgentNames names = names_param(p);
         EvalConfig config;
         if (p.contains("representative_bound")) config.representative_bound = p["representative_bound"];
         const EvalResult r = eval(formula_param(p, names), parse_sequence(p.at("sequence").get<std::string>(), names),
                                   names.size(), config);
         return Json{{"value", r.value}, {"exact", r.exact}};
       }},
      {"truth",
       [](const Json& p) {
         const AgentNames names = names_param(p);
         const Formula f = formula_param(p, names);
         const int n = names.size();
         if (p.contains("bound")) {
           const BoundedTruth t = holds_for_all_bounded(f, n, Digraph::complete(n), p["bound"]);
           return Json{{"refuted", t.refuted},
                       {"counterexample", t.counterexample ? Json(render(*t.counterexample, names)) : Json(nullptr)},
                       {"checked", t.sequences_checked}};
         }
         const TruthResult t = is_true_L0(f, n, Digraph::complete(n));
         return Json{{"holds", t.holds},
                     {"counterexample", t.counterexample ? Json(render(*t.counterexample, names)) : Json(nullptr)}};
       }},
      {"explore",
       [](const Json& p) {
         const Protocol proto = protocol_from_ref(p.at("protocol").get<std::string>());
         ExploreOptions o = options_param(p);
         if (!p.contains("mode")) o.mode = ExploreMode::Tree;
         Engine engine(proto, o);
         const ExplorationReport r = engine.explore();
         Json out = to_json(r, proto);
         out["leaf_count"] = r.mode == ExploreMode::Tree ? r.leaves.size() : r.leaf_situations.size();
         bool experts = true;
         for (const CallSequence& leaf : r.leaves)
           experts = experts && apply_sequence(initial_situation(proto.agents()), leaf).all_experts();
         for (const GossipSituation& s : r.leaf_situations) experts = experts && s.all_experts();
         out["all_leaves_expert"] = experts;
         if (p.contains("prefix")) {
           const CallSequence prefix = parse_sequence(p["prefix"].get<std::string>(), proto.names());
           std::vector<CallSequence> picked;
           for (const CallSequence& leaf : r.leaves)
             if (has_prefix(leaf, prefix)) picked.push_back(leaf);
           std::sort(picked.begin(), picked.end(), shortlex_less);
           out["prefix_leaves"] = rendered(picked, proto.names());
         }
         return out;
       }},
      {"check",
       [](const Json& p) {
         const Protocol proto = protocol_from_ref(p.at("protocol").get<std::string>());
         std::optional<Formula> phi;
         if (p.contains("phi")) phi = parse_formula(p["phi"].get<std::string>(), proto.names());
         Json out = to_json(check_protocol(proto, options_param(p), phi), proto);
         out.erase("exploration");
         return out;
       }},
      {"simulates",
       [](const Json& p) {
         const Protocol big = protocol_from_ref(p.at("simulator").get<std::string>());
         const Protocol small = protocol_from_ref(p.at("simulated").get<std::string>());
         return to_json(simulates(big, small, options_param(p)), small.names());
       }},
      {"bisimilar",
       [](const Json& p) {
         const Protocol a = protocol_from_ref(p.at("p").get<std::string>());
         const Protocol b = protocol_from_ref(p.at("q").get<std::string>());
         return Json{{"bisimilar", bisimilar(a, b, options_param(p)).bisimilar}};
       }},
      {"prefixes",
       [](const Json& p) {
         const Protocol proto = protocol_from_ref(p.at("protocol").get<std::string>());
         const PrefixSet s = generated_prefixes(proto, p.at("bound"), options_param(p));
         return Json{{"count", s.sequences.size()},
                     {"sequences", rendered(s.sequences, proto.names())},
                     {"truncated", s.truncated}};
       }},
      {"enabled",
       [](const Json& p) {
         const Protocol proto = protocol_from_ref(p.at("protocol").get<std::string>());
         Engine engine(proto, options_param(p));
         const CallSequence seq = parse_sequence(p.at("sequence").get<std::string>(), proto.names());
         Json calls = Json::array();
         for (Call c : engine.enabled_calls(seq)) calls.push_back(render(c, proto.names()));
         return Json{{"rules", engine.enabled_rules(seq).size()}, {"calls", calls}};
       }},
      {"fair_lasso",
       [](const Json& p) {
         const Protocol proto = protocol_from_ref(p.at("protocol").get<std::string>());
         const std::string kind = p.at("fairness");
         if (kind != "agent" && kind != "rule") throw GossipError("fairness must be agent or rule");
         const ExploreOptions o = options_param(p);
         Engine engine(proto, o);
         const auto l = find_fair_lasso(proto, kind == "agent" ? FairnessKind::Agent : FairnessKind::Rule, o);
         if (!l) return Json{{"found", false}};
         const Fairness f = classify_lasso(engine, *l);
         Json out = to_json(*l, proto);
         out["found"] = true;
         out["stationary"] = engine.verify_lasso(*l);
         out["agent_fair"] = f.agent_fair;
         out["rule_fair"] = f.rule_fair;
         return out;
       }},
      {"centralized",
       [](const Json& p) {
         const int n = p.at("agents");
         const CallSequence seq = centralized_sequence(n);
         const GossipSituation s = apply_sequence(initial_situation(n), seq);
         return Json{{"length", seq.size()}, {"all_experts", s.all_experts()}, {"sequence", render(seq, default_names(n))}};
       }},
      {"parse",
       [](const Json& p) {
         try {
           const Protocol proto = parse_protocol(p.at("source").get<std::string>());
           Json sizes = Json::array();
           for (const Program& prog : proto.programs()) sizes.push_back(prog.rules.size());
           return Json{{"accepted", true}, {"rule_counts", sizes}};
         } catch (const ParseError& e) {
           return Json{{"accepted", false}, {"message", e.what()}};
         }
       }},
      {"builtin_rules",
       [](const Json& p) {
         const Protocol proto = protocol_from_ref(p.at("protocol").get<std::string>());
         const auto a = proto.names().find_agent(p.at("agent").get<std::string>());
         if (!a) throw GossipError("unknown agent");
         Json rules = Json::array();
         for (const Rule& r : proto.program(*a).rules)
           rules.push_back(render(r.guard, proto.names()) + " ~> " + proto.names().agent(r.call.caller) + " " +
                           proto.names().agent(r.call.callee));
         Json counts = Json::array();
         for (const Program& prog : proto.programs()) counts.push_back(prog.rules.size());
         Json edges = Json::array();
         for (Call c : inferred_digraph(proto).calls()) edges.push_back(render(c, proto.names()));
         return Json{{"rules", rules}, {"rule_counts", counts}, {"inferred_edges", edges}};
       }},
  };
  return table;
}

bool match_value(const Json& expect, const Json& actual, std::string& why) {
  if (expect.is_object() && expect.size() == 1) {
    const auto& [op, operand] = *expect.items().begin();
    if (op == "ge" || op == "le") {
      if (!actual.is_number()) {
        why = "expected a number";
        return false;
      }
      const bool ok = op == "ge" ? actual.get<double>() >= operand.get<double>()
                                 : actual.get<double>() <= operand.get<double>();
      if (!ok) why = op + " " + operand.dump();
      return ok;
    }
    if (op == "contains") {
      if (!actual.is_array()) {
        why = "expected a list";
        return false;
      }
      const Json wanted = operand.is_array() ? operand : Json::array({operand});
      for (const Json& w : wanted) {
        if (std::find(actual.begin(), actual.end(), w) == actual.end()) {
          why = "missing " + w.dump();
          return false;
        }
      }
      return true;
    }
  }
  if (expect.is_object() && actual.is_object()) {
    std::vector<std::string> inner;
    if (matches(expect, actual, inner)) return true;
    why = inner.front();
    return false;
  }
  if (expect != actual) {
    why = "expected " + expect.dump();
    return false;
  }
  return true;
}

}  // namespace

std::string default_manifest_path() { return GOSSIP_DEFAULT_MANIFEST; }

std::vector<ReplicationCase> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GossipError("cannot read manifest '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw GossipError("manifest '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_array()) throw GossipError("manifest must be a JSON array");
  std::vector<ReplicationCase> cases;
  for (const Json& item : doc) {
    ReplicationCase c;
    c.id = item.at("id");
    c.description = item.value("description", "");
    c.kind = item.at("kind");
    c.params = item.value("params", Json::object());
    c.expect = item.at("expect");
    if (!runners().contains(c.kind)) throw GossipError("case '" + c.id + "' has unknown kind '" + c.kind + "'");
    for (const ReplicationCase& other : cases)
      if (other.id == c.id) throw GossipError("duplicate case id '" + c.id + "'");
    cases.push_back(std::move(c));
  }
  return cases;
}

std::vector<ReplicationCase> select_cases(const std::vector<ReplicationCase>& cases, std::string_view selector) {
  if (selector == "all") return cases;
  std::vector<ReplicationCase> out;
  for (const ReplicationCase& c : cases)
    if (c.id == selector) return {c};
  for (const ReplicationCase& c : cases)
    if (c.id.size() > selector.size() && c.id.compare(0, selector.size(), selector) == 0 && c.id[selector.size()] == '-')
      out.push_back(c);
  if (out.empty()) throw GossipError("no replication case matches '" + std::string(selector) + "'");
  return out;
}

Json run_case_outcome(const ReplicationCase& c) {
  auto it = runners().find(c.kind);
  if (it == runners().end()) throw GossipError("unknown case kind '" + c.kind + "'");
  return it->second(c.params);
}

ReplicationResult run_case(const ReplicationCase& c) {
  ReplicationResult r;
  r.id = c.id;
  r.description = c.description;
  r.expected = c.expect;
  try {
    r.actual = run_case_outcome(c);
    r.pass = matches(c.expect, r.actual, r.mismatches);
  } catch (const std::exception& e) {
    r.error = e.what();
    r.pass = false;
  }
  return r;
}

bool matches(const Json& expect, const Json& actual, std::vector<std::string>& mismatches) {
  const std::size_t before = mismatches.size();
  for (const auto& [key, wanted] : expect.items()) {
    if (!actual.contains(key)) {
      mismatches.push_back(key + ": missing");
      continue;
    }
    std::string why;
    if (!match_value(wanted, actual[key], why)) mismatches.push_back(key + ": " + why + ", got " + actual[key].dump());
  }
  return mismatches.size() == before;
}

}  // namespace gossip
