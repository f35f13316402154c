#include <gtest/gtest.h>

#include "gossip/protocol.hpp"
#include "support.hpp"

namespace gossip {
namespace {

using test::seq;

constexpr const char* kLns3 = R"(# learn new secrets
agents: a b c
graph: complete

program a:
  !F(a,B) ~> a b
  !F(a,C) ~> a c
program b:
  !F(b,A) ~> b a
  !F(b,C) ~> b c
program c:
  !F(c,A) ~> c a
  !F(c,B) ~> c b
)";

ParseError parse_error(std::string_view text, ProtocolOptions options = {}) {
  try {
    parse_protocol(text, options);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return ParseError(0, "none");
}

TEST(Parse, LnsSource) {
  const Protocol p = parse_protocol(kLns3);
  EXPECT_EQ(p.agents(), 3);
  for (Agent a = 0; a < 3; ++a) EXPECT_EQ(p.program(a).rules.size(), 2u);
  EXPECT_TRUE(p.is_propositional());
  EXPECT_EQ(p, builtin(Builtin::Lns, 3));
  EXPECT_TRUE(p.warnings().empty());
}

TEST(Parse, ForeignAtomRejected) {
  const auto e = parse_error("agents: a b c\nprogram a:\n  F(b,A) ~> a b\n");
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 3u);
}

TEST(Parse, EmptyProgramAccepted) {
  const Protocol p = parse_protocol("agents: a b c\nprogram a:\nprogram b:\n  !F(b,A) ~> b a\n");
  EXPECT_TRUE(p.program(0).rules.empty());
  EXPECT_TRUE(p.program(2).rules.empty());
  EXPECT_EQ(p.program(1).rules.size(), 1u);
}

TEST(Parse, Diagnostics) {
  EXPECT_EQ(parse_error("agents: a b c\nprogram a:\n  !F(a,B) ~> b a\n").line(), 3u);
  EXPECT_EQ(parse_error("agents: a b c\nprogram a:\n  !F(a,B) ~> a a\n").column(), 14u);
  EXPECT_EQ(parse_error("agents: a b c\nprogram a:\n  !F(a,D) ~> a b\n").column(), 8u);
  EXPECT_EQ(parse_error("agents: a b c\nprogram d:\n").line(), 2u);
  EXPECT_EQ(parse_error("agents: a b c\nprogram a:\nprogram a:\n").line(), 3u);
  EXPECT_EQ(parse_error("agents: a b\nprogram a:\n").line(), 1u);
  EXPECT_EQ(parse_error("agents: a b graph\nprogram a:\n").column(), 13u);
  EXPECT_EQ(parse_error("agents: a b c\ngraph: a->b\nprogram a:\n  !F(a,C) ~> a c\n").line(), 4u);
  EXPECT_EQ(parse_error("agents: a b c\nprogram a:\n  !F(a,B) a b\n").line(), 3u);
  parse_error("agents: a b c\n");
  parse_error("agents: a a c\nprogram a:\n");
}

TEST(Parse, GuardRestriction) {
  // Knowledge of another agent, nested knowledge and common knowledge.
  parse_error("agents: a b c\nprogram a:\n  !K(b, F(a,B)) ~> a b\n");
  parse_error("agents: a b c\nprogram a:\n  !K(a, K(b, F(a,B))) ~> a b\n");
  parse_error("agents: a b c\nprogram a:\n  !C({a,b,c}, F(a,B)) ~> a b\n");
  // Atoms under the owner's own modality may belong to anyone.
  const Protocol hms = parse_protocol("agents: a b c\nprogram a:\n  !K(a, F(b,A)) ~> a b\n");
  EXPECT_FALSE(hms.is_propositional());
  EXPECT_FALSE(hms.outside_guard_restriction());
}

TEST(Parse, PermissiveGuards) {
  ProtocolOptions loose;
  loose.permissive_guards = true;
  const Protocol p = parse_protocol("agents: a b c\nprogram a:\n  !F(b,A) ~> a b\n", loose);
  EXPECT_TRUE(p.outside_guard_restriction());
  EXPECT_FALSE(p.warnings().empty());
  // Nested knowledge stays out even then.
  parse_error("agents: a b c\nprogram a:\n  !K(a, K(b, F(a,B))) ~> a b\n", loose);
}

TEST(Parse, CommentsAndDeclaredGraph) {
  const Protocol p = parse_protocol(
      "agents: i j k  # a path\n"
      "graph: i->j, j->i, j->k, k->j\n"
      "program i:\n  !F(i,J) ~> i j   # only neighbour\n"
      "program j:\n  !F(j,I) ~> j i\n  !F(j,K) ~> j k\n"
      "program k:\n  !F(k,J) ~> k j\n");
  EXPECT_EQ(p.digraph(), Digraph::path(3));
  EXPECT_EQ(p, builtin(Builtin::Lns, 3, Digraph::path(3), AgentNames({"i", "j", "k"})));
}

TEST(Parse, TwoAgentsOnRequest) {
  ProtocolOptions two;
  two.allow_two_agents = true;
  EXPECT_EQ(parse_protocol("agents: a b\nprogram a:\n  !F(a,B) ~> a b\n", two).agents(), 2);
}

TEST(Render, RoundTripsBuiltins) {
  const std::vector<Protocol> all = {
      builtin(Builtin::Lns, 3),
      builtin(Builtin::Hms, 3),
      builtin(Builtin::Exp, 4, Digraph::path(4), AgentNames({"i", "j", "k", "l"})),
      builtin(Builtin::Lns, 4, Digraph::star(4)),
      builtin(Builtin::TwoPhase, 4),
      builtin(Builtin::TwoPhase, 5),
      builtin(Builtin::Exp, 30),
  };
  for (const auto& p : all) {
    const std::string text = render_protocol(p);
    EXPECT_EQ(parse_protocol(text), p) << text;
  }
}

TEST(Builtins, LnsRules) {
  const Protocol p = builtin(Builtin::Lns, 3);
  const auto& rules = p.program(0).rules;
  ASSERT_EQ(rules.size(), 2u);
  const AgentNames names = AgentNames::letters(3);
  EXPECT_EQ(rules[0].guard, parse_formula("!F(a,B)", names));
  EXPECT_EQ(rules[0].call, test::call("ab"));
  EXPECT_EQ(rules[1].guard, parse_formula("!F(a,C)", names));
  EXPECT_EQ(rules[1].call, test::call("ac"));
  EXPECT_EQ(builtin(Builtin::Lns, 3, Digraph::complete(3)), p);
}

TEST(Builtins, HmsRules) {
  const Protocol p = builtin(Builtin::Hms, 3);
  EXPECT_FALSE(p.is_propositional());
  EXPECT_EQ(p.program(1).rules[1].guard, parse_formula("!K(b, F(c,B))", AgentNames::letters(3)));
}

TEST(Builtins, TwoPhase) {
  const Protocol p = builtin(Builtin::TwoPhase, 4);
  EXPECT_EQ(p.program(0).rules.size(), 6u);
  for (Agent a = 1; a < 4; ++a) EXPECT_TRUE(p.program(a).rules.empty());
  const AgentNames names = AgentNames::letters(4);
  EXPECT_EQ(p.program(0).rules[3].guard, parse_formula("Exp(a) & !K(a, Exp(b))", names));
  EXPECT_EQ(p.digraph().edge_count(), 3u);
  for (Agent a = 1; a < 4; ++a) EXPECT_TRUE(p.digraph().has_edge(0, a));
  EXPECT_THROW(builtin(Builtin::TwoPhase, 3), GossipError);
  EXPECT_THROW(builtin(Builtin::TwoPhase, 4, Digraph::complete(4)), GossipError);
}

TEST(Builtins, ExpOnPath) {
  const AgentNames names({"i", "j", "k", "l"});
  const Protocol p = builtin(Builtin::Exp, 4, Digraph::path(4), names);
  const auto& j = p.program(1).rules;
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0].call, (Call{1, 0}));
  EXPECT_EQ(j[1].call, (Call{1, 2}));
  for (const auto& r : j) EXPECT_EQ(r.guard, Formula::negation(Formula::expert(1, 4)));
}

TEST(Builtins, Names) {
  EXPECT_EQ(builtin_from_string("lns"), Builtin::Lns);
  EXPECT_EQ(builtin_from_string("two_phase"), Builtin::TwoPhase);
  EXPECT_FALSE(builtin_from_string("gossip"));
  EXPECT_STREQ(to_string(Builtin::Hms), "hms");
  EXPECT_EQ(default_names(3).agent(2), "c");
  EXPECT_EQ(default_names(30).agent(29), "x29");
}

TEST(Digraphs, Inferred) {
  EXPECT_EQ(inferred_digraph(builtin(Builtin::Lns, 3)), Digraph::complete(3));
  const Protocol empty = parse_protocol("agents: a b c\nprogram a:\n");
  EXPECT_TRUE(empty.digraph().empty());
  ASSERT_EQ(empty.warnings().size(), 1u);
  const Protocol split = builtin(Builtin::Exp, 4, [] {
    Digraph g(4);
    g.add_edge(0, 1);
    g.add_edge(2, 3);
    return g;
  }());
  EXPECT_FALSE(split.warnings().empty());
}

TEST(Refs, Forms) {
  EXPECT_EQ(protocol_from_ref("lns:3"), builtin(Builtin::Lns, 3));
  EXPECT_EQ(protocol_from_ref("exp:4:path"), builtin(Builtin::Exp, 4, Digraph::path(4)));
  EXPECT_EQ(protocol_from_ref("lns:3:path:i,j,k"),
            builtin(Builtin::Lns, 3, Digraph::path(3), AgentNames({"i", "j", "k"})));
  EXPECT_EQ(protocol_from_ref("hms:4:ring"), builtin(Builtin::Hms, 4, Digraph::ring(4)));
  EXPECT_EQ(protocol_from_ref("lns:4:star"), builtin(Builtin::Lns, 4, Digraph::star(4)));
  EXPECT_THROW(protocol_from_ref("lns:x"), GossipError);
  EXPECT_THROW(protocol_from_ref("lns:3:blob"), GossipError);
  EXPECT_THROW(protocol_from_ref("/nonexistent/file.gsp"), GossipError);
}

TEST(Protocol, ConstructorValidates) {
  const AgentNames names = AgentNames::letters(3);
  const Formula guard = parse_formula("!F(a,B)", names);
  std::vector<Program> programs(3);
  for (Agent a = 0; a < 3; ++a) programs[a].owner = a;
  programs[0].rules.push_back({guard, Call{1, 0}});
  EXPECT_THROW(Protocol(names, programs), GossipError);
  programs[0].rules[0].call = Call{0, 1};
  EXPECT_NO_THROW(Protocol(names, programs));
  // ab is not an edge of an empty digraph.
  EXPECT_THROW(Protocol(names, programs, Digraph(3)), GossipError);
}

TEST(Protocol, CanonicalRuleOrder) {
  const Protocol p = builtin(Builtin::Lns, 3);
  const auto& refs = p.rules();
  ASSERT_EQ(refs.size(), 6u);
  EXPECT_TRUE(std::is_sorted(refs.begin(), refs.end()));
  EXPECT_EQ(p.rule(refs[3]).call, test::call("bc"));
}

}  // namespace
}  // namespace gossip
