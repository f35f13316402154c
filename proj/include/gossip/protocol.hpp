#pragma once

// Guarded-command gossip protocols: one program per agent, each a repeated
// nondeterministic choice among rules `guard ~> caller callee`.
//
// A guard must lie in L1, may use only its owner's knowledge modality, and
// every atom outside that modality must belong to the owner. Protocols built
// with permissive guards accept any L1 guard and are flagged accordingly.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gossip/formula.hpp"
#include "gossip/model.hpp"

namespace gossip {

struct Rule {
  Formula guard;
  Call call;

  bool operator==(const Rule&) const = default;
};

struct Program {
  Agent owner = 0;
  std::vector<Rule> rules;

  bool operator==(const Program&) const = default;
};

struct RuleRef {
  Agent agent = 0;
  std::size_t index = 0;

  auto operator<=>(const RuleRef&) const = default;
};

struct ProtocolOptions {
  bool permissive_guards = false;
  bool allow_two_agents = false;
};

class Protocol {
 public:
  // Throws GossipError when a program or rule is malformed. A missing
  // digraph defaults to the inferred one.
  Protocol(AgentNames names, std::vector<Program> programs, std::optional<Digraph> digraph = std::nullopt,
           ProtocolOptions options = {});

  int agents() const { return names_.size(); }
  const AgentNames& names() const { return names_; }
  const std::vector<Program>& programs() const { return programs_; }
  const Program& program(Agent a) const { return programs_[static_cast<std::size_t>(a)]; }
  const Rule& rule(RuleRef r) const { return program(r.agent).rules[r.index]; }
  // Every rule, by owner and then by position in its program.
  const std::vector<RuleRef>& rules() const { return refs_; }
  const Digraph& digraph() const { return digraph_; }
  const ProtocolOptions& options() const { return options_; }

  bool is_propositional() const { return propositional_; }
  // true when some guard needed the permissive flag.
  bool outside_guard_restriction() const { return outside_restriction_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool operator==(const Protocol& other) const {
    return names_ == other.names_ && programs_ == other.programs_ && digraph_ == other.digraph_;
  }

 private:
  AgentNames names_;
  std::vector<Program> programs_;
  Digraph digraph_;
  ProtocolOptions options_;
  std::vector<RuleRef> refs_;
  bool propositional_ = true;
  bool outside_restriction_ = false;
  std::vector<std::string> warnings_;
};

// Why `guard` cannot guard a call by `owner`, or nullopt when it can.
std::optional<std::string> guard_violation(const Formula& guard, Agent owner, bool permissive);

Digraph inferred_digraph(const std::vector<Program>& programs, int n);
Digraph inferred_digraph(const Protocol& p);

Protocol parse_protocol(std::string_view text, ProtocolOptions options = {});
std::string render_protocol(const Protocol& p);

enum class Builtin { Lns, Hms, Exp, TwoPhase };

const char* to_string(Builtin b);
std::optional<Builtin> builtin_from_string(std::string_view name);

// Named protocols. Lns, Hms and Exp let agent i call j for every edge i->j of
// g (complete when omitted); TwoPhase needs n >= 4 and no digraph.
Protocol builtin(Builtin which, int n, std::optional<Digraph> g = std::nullopt,
                 std::optional<AgentNames> names = std::nullopt);

AgentNames default_names(int n);

// "lns:3", "exp:4:path", "lns:3:path:i,j,k", "two_phase:5", or a path to a
// protocol source file. Shapes: complete, path, ring, star (hub first).
Protocol protocol_from_ref(std::string_view ref, ProtocolOptions options = {});

}  // namespace gossip
