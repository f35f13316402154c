// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <deque>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "gossip/analysis.hpp"
#include "gossip/logic.hpp"
#include "support.hpp"

namespace gossip {
namespace {

using test::concat;
using test::seq;

const AgentNames kAbc = AgentNames::letters(3);

struct Check {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << what;
      ok = false;
    }
  }
};

ExploreOptions tree_mode() {
  ExploreOptions o;
  o.mode = ExploreMode::Tree;
  return o;
}

Formula all_know_all(int n, bool experts) {
  std::vector<Formula> parts;
  for (Agent i = 0; i < n; ++i)
    for (Agent j = 0; j < n; ++j)
      parts.push_back(Formula::know(i, experts ? Formula::expert(j, n) : Formula::atom(j, i)));
  return Formula::conjunction(parts);
}

void example_one(Check& c) {
  const auto trace = situation_trace(seq("ac,bc,ac"), 3);
  c.expect(render(trace[1], kAbc) == "AC.B.AC", "first step");
  c.expect(render(trace[2], kAbc) == "AC.ABC.ABC", "second step");
  c.expect(render(trace[3], kAbc) == "ABC.ABC.ABC", "final situation");
}

void equivalence_examples(Check& c) {
  c.expect(equivalent(seq("ab,bc", 4), seq("ab,bd", 4), 0, 4), "ab,bc ~a ab,bd");
  c.expect(!equivalent(seq("bc,ab", 4), seq("bd,ab", 4), 0, 4), "bc,ab !~a bd,ab");
}

void oracle_agreement(Check& c) {
  std::size_t pairs = 0;
  for (Agent a = 0; a < 3; ++a) {
    const auto classes = closure_classes(a, 3, 3);
    for (const auto& x : classes.universe)
      for (const auto& y : classes.universe) {
        ++pairs;
        if (classes.equivalent(x, y) != equivalent(x, y, a, 3)) {
          c.expect(false, "disagreement at " + render(x, kAbc) + " / " + render(y, kAbc));
          return;
        }
      }
  }
  c.note << pairs << " pairs agree";
}

void axioms(Check& c) {
  for (int n : {3, 4})
    for (Axiom which : {Axiom::Chain, Axiom::Reveal, Axiom::OnlyCaller})
      c.expect(is_true_L0(build_axiom(n, which), n, Digraph::complete(n)).holds, "axiom false at n=" + std::to_string(n));
  for (Axiom which : {Axiom::Chain, Axiom::Reveal, Axiom::OnlyCaller}) {
    const auto b = holds_for_all_bounded(build_axiom(3, which), 3, Digraph::complete(3), 6);
    c.expect(!b.refuted, "bounded counterexample");
  }
}

void lns_three(Check& c) {
  Engine e(builtin(Builtin::Lns, 3), tree_mode());
  const auto rep = e.explore();
  c.expect(rep.leaves.size() == 24, "leaf count " + std::to_string(rep.leaves.size()));
  c.expect(rep.lassos.empty() && !rep.truncated, "exploration incomplete");
  std::set<CallSequence> ab;
  for (const auto& leaf : rep.leaves) {
    c.expect(leaf.size() == 3, "leaf length");
    c.expect(apply_sequence(initial_situation(3), leaf).all_experts(), "leaf not all experts");
    if (leaf[0] == test::call("ab")) ab.insert(leaf);
  }
  c.expect(ab == std::set<CallSequence>{seq("ab,bc,ac"), seq("ab,cb,ac"), seq("ab,ac,bc"), seq("ab,ca,bc")},
           "leaves starting with ab");
}

void hms_lns_simulation(Check& c) {
  const Protocol lns = builtin(Builtin::Lns, 3), hms = builtin(Builtin::Hms, 3);
  const auto prefixes = generated_prefixes(hms, 3).sequences;
  c.expect(std::count(prefixes.begin(), prefixes.end(), seq("ab,bc,ca")) == 1, "HMS prefixes lack ab.bc.ca");
  c.expect(simulates(hms, lns).simulates, "HMS does not simulate LNS");
  const auto back = simulates(lns, hms);
  c.expect(!back.simulates, "LNS simulates HMS");
  const auto& minimal = back.minimal_counterexamples;
  c.expect(std::count(minimal.begin(), minimal.end(), seq("ab,bc,ca")) == 1,
           "ab.bc.ca is not a minimal counterexample");
  Engine el(lns), eh(hms);
  c.expect(eh.generable(seq("ab,bc,ca")) && !el.generable(seq("ab,bc,ca")), "ab.bc.ca does not separate");
  c.expect(!bisimilar(lns, hms).bisimilar, "bisimilar");
  if (back.counterexample)
    c.note << "ab.bc.ca is one of " << minimal.size() << " shortest counterexamples; shortlex-least is "
           << render(*back.counterexample, kAbc);
}

void hms_phi(Check& c) {
  const Protocol hms = builtin(Builtin::Hms, 3);
  c.expect(check_phi_correctness(hms, all_know_all(3, false)).correct == Outcome::Yes, "K_i F_j I not correct");
  const auto bad = check_phi_correctness(hms, all_know_all(3, true));
  c.expect(bad.correct == Outcome::No, "K_i Exp_j correct");
  c.expect(bad.counterexample == seq("ab,ac,bc"), "counterexample");
  c.expect(!eval(parse_formula("K(a, Exp(b))", kAbc), seq("ab,ac,bc"), 3).value, "K_a Exp_b holds at ab,ac,bc");
}

void two_phase(Check& c) {
  for (int n : {4, 5, 6}) {
    const Protocol p = builtin(Builtin::TwoPhase, n);
    c.expect(decide_termination(p).terminates == Outcome::Yes, "does not terminate at n=" + std::to_string(n));
    c.expect(check_partial_correctness(p).correct == Outcome::Yes, "incorrect at n=" + std::to_string(n));
    Engine e(p, tree_mode());
    const auto rep = e.explore();
    c.expect(!rep.leaves.empty() && !rep.truncated, "no leaves");
    for (const auto& leaf : rep.leaves)
      c.expect(leaf.size() == static_cast<std::size_t>(2 * n - 3), "leaf length at n=" + std::to_string(n));
  }
}

void lns_four(Check& c) {
  const Protocol p = builtin(Builtin::Lns, 4);
  c.expect(decide_termination(p).terminates == Outcome::Yes, "does not terminate");
  c.expect(check_partial_correctness(p).correct == Outcome::Yes, "incorrect");
  const auto len = computation_length_bounds(p, tree_mode());
  c.expect(len.min == 4, "min length " + std::to_string(len.min));
  c.expect(len.max >= 5, "max length " + std::to_string(len.max));
  c.note << "lengths " << len.min << ".." << len.max << " over " << len.computations << " computations";
}

void lns_path(Check& c) {
  const AgentNames ijk({"i", "j", "k"});
  const auto v = check_partial_correctness(builtin(Builtin::Lns, 3, Digraph::path(3), ijk), tree_mode());
  c.expect(v.correct == Outcome::No, "correct");
  c.expect(v.counterexample == parse_sequence("ij,jk", ijk), "witness");
  c.expect(v.counterexample && !is_expert(apply_sequence(initial_situation(3), *v.counterexample), 0),
           "i is an expert");
}

void exp_path(Check& c) {
  const AgentNames names({"i", "j", "k", "l"});
  const Protocol p = builtin(Builtin::Exp, 4, Digraph::path(4), names);
  c.expect(decide_termination(p).terminates == Outcome::No, "terminates");
  const auto lasso = find_fair_lasso(p, FairnessKind::Agent);
  c.expect(lasso.has_value(), "no agent-fair lasso");
  if (!lasso) return;
  Engine e(p);
  c.expect(e.verify_lasso(*lasso), "lasso not stationary");
  const auto f = classify_lasso(e, *lasso);
  c.expect(f.agent_fair, "not agent-fair");
  c.expect(!f.rule_fair, "rule-fair");
  c.note << "stem " << render(lasso->stem, names) << ", period " << render(period_calls(p, *lasso), names);
}

void centralized(Check& c) {
  for (int n = 4; n <= 8; ++n) {
    const auto s = centralized_sequence(n);
    c.expect(s.size() == static_cast<std::size_t>(2 * n - 4), "length at n=" + std::to_string(n));
    c.expect(apply_sequence(initial_situation(n), s).all_experts(), "not all experts at n=" + std::to_string(n));
  }
}

// Compact re-runs of the property suites; each counts violations.
std::vector<Formula> l1_family(int n) {
  std::vector<Formula> bodies, out;
  for (Agent a = 0; a < n; ++a) {
    bodies.push_back(Formula::expert(a, n));
    for (Agent s = 0; s < n; ++s)
      if (a != s) bodies.push_back(Formula::atom(a, s));
  }
  bodies.push_back(Formula::negation(Formula::atom(1, 2)));
  bodies.push_back(Formula::disjunction(Formula::atom(1, 2), Formula::atom(2, 0)));
  out = bodies;
  for (Agent a = 0; a < n; ++a)
    for (const auto& b : bodies) out.push_back(Formula::know(a, b));
  return out;
}

void properties(Check& c) {
  std::mt19937 rng(0x5eed1234);
  std::map<std::string, std::size_t> violations, checks;
  const auto family3 = l1_family(3);
  Evaluator ev3(3);
  const auto seqs3 = test::all_sequences(3, 4);

  // Stuttering and redundancy removal, exhaustive at n = 3, random at n = 4.
  for (const auto& s : seqs3) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      CallSequence doubled = s;
      doubled.insert(doubled.begin() + static_cast<std::ptrdiff_t>(i), s[i]);
      for (const auto& f : family3) {
        ++checks["stuttering"];
        violations["stuttering"] += ev3.holds(f, s) != ev3.holds(f, doubled);
      }
    }
    if (auto w = find_epistemically_redundant(s, 3)) {
      CallSequence reduced = s;
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(w->second));
      for (const auto& f : family3) {
        ++checks["redundancy removal"];
        violations["redundancy removal"] += ev3.holds(f, s) != ev3.holds(f, reduced);
      }
    }
  }
  {
    Evaluator ev4(4);
    const auto family4 = l1_family(4);
    const auto calls = Digraph::complete(4).calls();
    for (int round = 0; round < 300; ++round) {
      auto s = test::random_sequence(rng, calls, 1 + rng() % 6);
      const std::size_t i = rng() % s.size();
      CallSequence doubled = s;
      doubled.insert(doubled.begin() + static_cast<std::ptrdiff_t>(i), s[i]);
      const auto& f = family4[rng() % family4.size()];
      ++checks["stuttering"];
      violations["stuttering"] += ev4.holds(f, s) != ev4.holds(f, doubled);
      s.push_back(s[rng() % s.size()]);
      if (auto w = find_epistemically_redundant(s, 4)) {
        CallSequence reduced = s;
        reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(w->second));
        ++checks["redundancy removal"];
        violations["redundancy removal"] += ev4.holds(f, s) != ev4.holds(f, reduced);
      }
    }
  }

  // Guards of agent a ignore calls without a.
  for (int n : {3, 4}) {
    const auto calls = Digraph::complete(n).calls();
    const auto seqs = n == 3 ? seqs3 : test::all_sequences(calls, 2);
    for (const auto& p : {builtin(Builtin::Lns, n), builtin(Builtin::Hms, n), builtin(Builtin::Exp, n)}) {
      Evaluator ev(n);
      for (RuleRef r : p.rules())
        for (const auto& s : seqs)
          for (Call call : calls) {
            if (call.involves(r.agent)) continue;
            ++checks["guard stability"];
            violations["guard stability"] +=
                ev.holds(p.rule(r).guard, s) != ev.holds(p.rule(r).guard, concat(s, {call}));
          }
    }
  }

  // Disjoint adjacent calls commute inside computations (n = 4).
  for (const auto& p : {builtin(Builtin::Lns, 4), builtin(Builtin::Hms, 4), builtin(Builtin::Exp, 4)}) {
    Engine e(p);
    for (const auto& s : generated_prefixes(p, 4).sequences)
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i].shares_agent(s[i + 1])) continue;
        CallSequence t = s;
        std::swap(t[i], t[i + 1]);
        ++checks["commutation"];
        violations["commutation"] += !e.generable(t) || e.enabled_rules(t) != e.enabled_rules(s);
      }
  }

  // Productive calls never exceed n^2 - n.
  for (const auto& s : seqs3) {
    ++checks["productive bound"];
    violations["productive bound"] += productive_call_count(s, 3) > 6;
  }
  for (int n = 3; n <= 6; ++n) {
    const auto calls = Digraph::complete(n).calls();
    for (int round = 0; round < 200; ++round) {
      const auto s = test::random_sequence(rng, calls, rng() % (3 * n * n));
      ++checks["productive bound"];
      violations["productive bound"] += productive_call_count(s, n) > static_cast<std::size_t>(n * n - n);
    }
  }

  // Every builtin on a complete digraph has a computation whose first two
  // calls share an agent.
  for (int n : {3, 4})
    for (const auto& p : {builtin(Builtin::Lns, n), builtin(Builtin::Hms, n), builtin(Builtin::Exp, n)}) {
      ++checks["bad computation"];
      bool found = false;
      if (decide_termination(p).terminates == Outcome::Yes) {
        Engine e(p, tree_mode());
        for (const auto& leaf : e.explore().leaves) found |= leaf.size() >= 2 && leaf[0].shares_agent(leaf[1]);
      } else {
        for (const auto& s : generated_prefixes(p, 2).sequences) found |= s.size() == 2 && s[0].shares_agent(s[1]);
      }
      violations["bad computation"] += !found;
    }

  const char* sep = "";
  for (const auto& [name, count] : checks) {
    c.expect(violations[name] == 0, name + " violated");
    c.note << sep << name << " " << violations[name] << " violations in " << count;
    sep = "; ";
  }
}

// C over {a,b} by closure: phi must hold at every sequence of length <= 3
// reachable through ~a and ~b steps inside that universe.
bool bounded_common_pair(const Formula& phi, const CallSequence& s, const std::vector<CallSequence>& universe,
                         const std::vector<std::vector<AgentView>>& views) {
  const auto start = std::find(universe.begin(), universe.end(), s) - universe.begin();
  std::vector<char> seen(universe.size(), 0);
  std::deque<std::size_t> queue{static_cast<std::size_t>(start)};
  seen[static_cast<std::size_t>(start)] = 1;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    if (!holds_in(phi, apply_sequence(initial_situation(3), universe[i]))) return false;
    for (Agent a = 0; a < 2; ++a)
      for (std::size_t j = 0; j < universe.size(); ++j)
        if (!seen[j] && views[a][j] == views[a][i]) {
          seen[j] = 1;
          queue.push_back(j);
        }
  }
  return true;
}

void common_knowledge(Check& c) {
  std::mt19937 rng(20240611);
  const std::vector<Formula> pool = {
      build_axiom(3, Axiom::Chain),
      build_axiom(3, Axiom::Reveal),
      build_axiom(3, Axiom::OnlyCaller),
      parse_formula("F(a,A) & F(b,B)", kAbc),
      parse_formula("F(a,B) => F(b,A)", kAbc),
      parse_formula("F(a,B)", kAbc),
      parse_formula("!Exp(a)", kAbc),
      parse_formula("F(c,A) | !F(a,C)", kAbc),
  };
  const auto calls = Digraph::complete(3).calls();
  Evaluator ev(3);
  std::size_t sampled = 0;
  for (int k = 0; k < 20; ++k) {
    const Formula& phi = pool[rng() % pool.size()];
    const auto s = test::random_sequence(rng, calls, rng() % 5);
    const bool truth = is_true_L0(phi, 3, Digraph::complete(3)).holds;
    c.expect(ev.holds(Formula::common(AgentSet(0b111), phi), s) == truth, "C over three agents disagrees");
    c.expect(ev.holds(Formula::common(AgentSet::single(1), phi), s) == ev.holds(Formula::know(1, phi), s),
             "C over a singleton disagrees with K");
    ++sampled;
  }

  const auto universe = test::all_sequences(3, 3);
  std::vector<std::vector<AgentView>> views(2);
  for (Agent a = 0; a < 2; ++a)
    for (const auto& d : universe) views[a].push_back(agent_view(d, a, 3));
  const std::vector<Formula> negation_free = {
      parse_formula("F(a,A)", kAbc),
      parse_formula("F(a,B)", kAbc),
      parse_formula("F(a,A) & F(b,B) & F(c,C)", kAbc),
      parse_formula("F(c,A) & F(c,B)", kAbc),
      parse_formula("F(b,C)", kAbc),
  };
  EvalConfig bounded;
  bounded.representative_bound = 3;
  Evaluator pair(3, bounded);
  const auto without_ab = test::all_sequences(seq("ac,bc,ca,cb"), 3);
  std::size_t compared = 0;
  for (const auto& phi : negation_free) {
    for (const auto& s : without_ab) {
      const bool surrogate = pair.holds(Formula::common(AgentSet(0b011), phi), s);
      c.expect(surrogate == bounded_common_pair(phi, s, universe, views),
               "pair surrogate disagrees at " + render(s, kAbc));
      ++compared;
    }
  }
  c.note << sampled << " sampled pairs; " << compared << " pair-group comparisons";
}

}  // namespace
}  // namespace gossip

int main() {
  using namespace gossip;
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"call application trace", example_one},
      {"indistinguishability examples", equivalence_examples},
      {"view predicate matches closure construction", oracle_agreement},
      {"familiarity axioms are true", axioms},
      {"LNS on three agents", lns_three},
      {"HMS and LNS simulation", hms_lns_simulation},
      {"HMS knowledge at termination", hms_phi},
      {"two-phase protocol lengths", two_phase},
      {"LNS on four agents", lns_four},
      {"LNS on a path", lns_path},
      {"Exp on a path diverges agent-fairly", exp_path},
      {"centralized 2n-4 sequence", centralized},
      {"property suites", properties},
      {"common knowledge", common_knowledge},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.note << "exception: " << e.what();
    }
    failed += !c.ok;
    std::cout << (c.ok ? "PASS" : "FAIL") << ' ' << i + 1 << ' ' << criteria[i].first;
    const std::string note = c.note.str();
    if (!note.empty()) std::cout << " (" << note << ')';
    std::cout << '\n';
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << '/' << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
