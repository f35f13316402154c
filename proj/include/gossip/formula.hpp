#pragma once

// Formulas of the gossip logic: atoms F_a S, negation, conjunction, K_a and
// common knowledge C_G. Disjunction, implication and Exp_a are built from
// these when constructed or parsed.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gossip/model.hpp"

namespace gossip {

enum class FormulaKind { Atom, Not, And, Know, Common };

class Formula {
 public:
  static Formula atom(Agent a, Agent secret);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula know(Agent a, Formula f);
  static Formula common(AgentSet group, Formula f);

  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  // Left-nested fold; the list must be nonempty.
  static Formula conjunction(const std::vector<Formula>& parts);
  static Formula disjunction(const std::vector<Formula>& parts);
  static Formula expert(Agent a, int n);

  FormulaKind kind() const;
  Agent agent() const;   // Atom owner or Know agent
  Agent secret() const;  // Atom only
  AgentSet group() const;
  const Formula& lhs() const;  // And
  const Formula& rhs() const;  // And
  const Formula& body() const;  // Not, Know, Common

  // Identity of the shared node, stable for the lifetime of any copy.
  const void* id() const { return node_.get(); }

  bool operator==(const Formula& other) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  FormulaKind kind;
  Agent agent = 0;
  Agent secret = 0;
  AgentSet group;
  std::vector<Formula> children;
};

enum class Fragment { L0, L1, L, Lck };

const char* to_string(Fragment f);

// Least sublanguage containing the formula.
Fragment fragment_of(const Formula& f);
int knowledge_depth(const Formula& f);
bool is_propositional(const Formula& f);
bool has_negation(const Formula& f);
// Agents indexing a K modality anywhere in the formula.
AgentSet knowledge_agents(const Formula& f);
// Owners of atoms that do not occur under a modality.
AgentSet top_level_atom_owners(const Formula& f);
// Largest agent or secret index mentioned, or -1.
int max_index(const Formula& f);

bool holds_in(const Formula& propositional, const GossipSituation& s);

Formula parse_formula(std::string_view text, const AgentNames& names);
std::string render(const Formula& f, const AgentNames& names);

}  // namespace gossip
