#include <gtest/gtest.h>

#include <random>

#include "gossip/formula.hpp"

namespace gossip {
namespace {

const AgentNames kAbc = AgentNames::letters(3);

Formula parse(std::string_view text) { return parse_formula(text, kAbc); }

TEST(Parse, Atom) {
  EXPECT_EQ(parse("F(a,B)"), Formula::atom(0, 1));
  EXPECT_EQ(parse(" F ( a , B ) "), Formula::atom(0, 1));
}

TEST(Parse, ExpertAndKnowledge) {
  const Formula expected = Formula::conjunction(Formula::expert(0, 3),
                                                Formula::negation(Formula::know(0, Formula::expert(1, 3))));
  EXPECT_EQ(parse("Exp(a) & !K(a, Exp(b))"), expected);
  EXPECT_EQ(Formula::expert(1, 3),
            Formula::conjunction({Formula::atom(1, 0), Formula::atom(1, 1), Formula::atom(1, 2)}));
}

TEST(Parse, Common) {
  const Formula f = parse("C({a,b,c}, F(a,B))");
  EXPECT_EQ(f.kind(), FormulaKind::Common);
  EXPECT_EQ(f.group(), AgentSet(0b111));
  EXPECT_EQ(f.body(), Formula::atom(0, 1));
}

TEST(Parse, Precedence) {
  // ! binds tighter than &, & tighter than |, | tighter than =>.
  const Formula a = Formula::atom(0, 1), b = Formula::atom(1, 2), c = Formula::atom(2, 0);
  EXPECT_EQ(parse("!F(a,B) & F(b,C)"), Formula::conjunction(Formula::negation(a), b));
  EXPECT_EQ(parse("F(a,B) | F(b,C) & F(c,A)"), Formula::disjunction(a, Formula::conjunction(b, c)));
  EXPECT_EQ(parse("F(a,B) & F(b,C) => F(c,A)"), Formula::implication(Formula::conjunction(a, b), c));
  EXPECT_EQ(parse("!(F(a,B) & F(b,C))"), Formula::negation(Formula::conjunction(a, b)));
}

TEST(Parse, DerivedConnectivesDesugar) {
  const Formula a = Formula::atom(0, 1), b = Formula::atom(1, 2);
  EXPECT_EQ(Formula::disjunction(a, b),
            Formula::negation(Formula::conjunction(Formula::negation(a), Formula::negation(b))));
  EXPECT_EQ(Formula::implication(a, b), Formula::negation(Formula::conjunction(a, Formula::negation(b))));
}

TEST(Parse, ErrorsCarryPositions) {
  try {
    parse("F(a,B) & F(d,A)");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 11u);
  }
  EXPECT_THROW(parse("F(a,b)"), ParseError);
  EXPECT_THROW(parse("F(a,B"), ParseError);
  EXPECT_THROW(parse("F(a,B) F(b,A)"), ParseError);
  EXPECT_THROW(parse("K(a F(b,A))"), ParseError);
  EXPECT_THROW(parse("C({}, F(a,B))"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(Fragment, Classification) {
  EXPECT_EQ(fragment_of(parse("F(a,B)")), Fragment::L0);
  EXPECT_EQ(fragment_of(parse("K(a, K(b, F(a,B)))")), Fragment::L);
  EXPECT_EQ(fragment_of(parse("K(a, F(b,A))")), Fragment::L1);
  EXPECT_EQ(fragment_of(parse("!K(a, F(b,A)) & F(a,C)")), Fragment::L1);
  EXPECT_EQ(fragment_of(parse("C({a,b}, F(a,B))")), Fragment::Lck);
  EXPECT_EQ(knowledge_depth(parse("K(a, K(b, F(a,B))) & K(c, F(a,A))")), 2);
}

TEST(Fragment, Queries) {
  const Formula f = parse("!F(a,B) & K(b, F(c,A))");
  EXPECT_TRUE(has_negation(f));
  EXPECT_FALSE(has_negation(parse("K(b, F(c,A)) & F(a,B)")));
  EXPECT_FALSE(is_propositional(f));
  EXPECT_TRUE(is_propositional(parse("!F(a,B)")));
  EXPECT_EQ(knowledge_agents(f), AgentSet::single(1));
  EXPECT_EQ(top_level_atom_owners(f), AgentSet::single(0));
  EXPECT_EQ(max_index(f), 2);
}

TEST(HoldsIn, Situations) {
  const auto s = parse_situation("AC.B.AC", kAbc);
  EXPECT_TRUE(holds_in(parse("F(a,C) & !F(b,A)"), s));
  EXPECT_FALSE(holds_in(parse("Exp(a)"), s));
  EXPECT_THROW(holds_in(parse("K(a, F(a,A))"), s), GossipError);
}

Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> agent(0, 2);
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 6 : 0);
  switch (kind(rng)) {
    case 1: return Formula::negation(random_formula(rng, depth - 1));
    case 2: return Formula::conjunction(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 3: return Formula::disjunction(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4: return Formula::implication(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 5: return Formula::know(agent(rng), random_formula(rng, depth - 1));
    case 6: {
      AgentSet g(std::uniform_int_distribution<std::uint32_t>(1, 7)(rng));
      return Formula::common(g, random_formula(rng, depth - 1));
    }
    default: return Formula::atom(agent(rng), agent(rng));
  }
}

TEST(Render, RoundTripsRandomFormulas) {
  std::mt19937 rng(20240611);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = random_formula(rng, 4);
    const std::string text = render(f, kAbc);
    EXPECT_EQ(parse(text), f) << text;
  }
}

TEST(Render, Expert) {
  EXPECT_EQ(render(Formula::expert(1, 3), kAbc), "Exp(b)");
  EXPECT_EQ(render(parse("!K(a, F(b,A))"), kAbc), "!K(a, F(b,A))");
}

}  // namespace
}  // namespace gossip
