#pragma once

// Agents, secrets, calls and gossip situations.
//
// Agents are indices in [0, n). The secret of agent a shares its index, so a
// single bitset type serves for sets of agents and sets of secrets.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gossip {

inline constexpr int kMaxAgents = 32;

using Agent = int;

class GossipError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public GossipError {
 public:
  ParseError(std::size_t position, const std::string& message)
      : GossipError("at " + std::to_string(position) + ": " + message), position_(position), message_(message) {}

  // Diagnostic for multi-line sources; position is still the byte offset.
  ParseError(std::size_t position, std::size_t line, std::size_t column, const std::string& message)
      : GossipError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        position_(position),
        message_(message),
        line_(line),
        column_(column) {}

  std::size_t position() const { return position_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  // The message without location.
  const std::string& message() const { return message_; }

 private:
  std::size_t position_;
  std::string message_;
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

class BudgetExceeded : public GossipError {
 public:
  using GossipError::GossipError;
};

class AgentSet {
 public:
  constexpr AgentSet() = default;
  constexpr explicit AgentSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr AgentSet single(Agent a) { return AgentSet(std::uint32_t{1} << a); }
  static constexpr AgentSet all(int n) {
    return AgentSet(n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1);
  }

  constexpr bool contains(Agent a) const { return (bits_ >> a) & 1u; }
  constexpr void insert(Agent a) { bits_ |= std::uint32_t{1} << a; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const { return __builtin_popcount(bits_); }
  constexpr bool subset_of(AgentSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr std::uint32_t bits() const { return bits_; }

  constexpr AgentSet operator|(AgentSet o) const { return AgentSet(bits_ | o.bits_); }
  constexpr AgentSet operator&(AgentSet o) const { return AgentSet(bits_ & o.bits_); }
  constexpr AgentSet minus(AgentSet o) const { return AgentSet(bits_ & ~o.bits_); }

  std::vector<Agent> members() const;

  constexpr auto operator<=>(const AgentSet&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

using SecretSet = AgentSet;

struct Call {
  Agent caller = 0;
  Agent callee = 0;

  constexpr bool involves(Agent a) const { return caller == a || callee == a; }
  constexpr bool shares_agent(const Call& o) const { return involves(o.caller) || involves(o.callee); }
  constexpr auto operator<=>(const Call&) const = default;
};

using CallSequence = std::vector<Call>;

// Shortlex order: shorter sequences first, then lexicographic by call.
bool shortlex_less(const CallSequence& lhs, const CallSequence& rhs);

class GossipSituation {
 public:
  GossipSituation() = default;
  explicit GossipSituation(std::vector<SecretSet> sets) : sets_(std::move(sets)) {}

  int agents() const { return static_cast<int>(sets_.size()); }
  SecretSet operator[](Agent a) const { return sets_[static_cast<std::size_t>(a)]; }
  const std::vector<SecretSet>& sets() const { return sets_; }

  // Total number of (agent, secret) familiarity pairs.
  int weight() const;
  bool all_experts() const;
  // Pointwise inclusion of secret sets.
  bool below(const GossipSituation& other) const;

  void apply(Call c);

  bool operator==(const GossipSituation&) const = default;
  auto operator<=>(const GossipSituation&) const = default;

 private:
  std::vector<SecretSet> sets_;
};

struct SituationHash {
  std::size_t operator()(const GossipSituation& s) const;
};

class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n) : out_(static_cast<std::size_t>(n)) {}

  static Digraph complete(int n);
  // Undirected shapes, both directions present.
  static Digraph path(int n);
  static Digraph ring(int n);
  static Digraph star(int n, Agent hub = 0);

  int agents() const { return static_cast<int>(out_.size()); }
  void add_edge(Agent from, Agent to);
  bool has_edge(Agent from, Agent to) const { return out_[static_cast<std::size_t>(from)].contains(to); }
  AgentSet successors(Agent a) const { return out_[static_cast<std::size_t>(a)]; }
  std::size_t edge_count() const;
  bool empty() const { return edge_count() == 0; }
  bool is_complete() const;
  // Connectivity of the underlying undirected graph.
  bool is_weakly_connected() const;
  // Every edge as a call, ordered by (caller, callee).
  std::vector<Call> calls() const;

  bool operator==(const Digraph&) const = default;

 private:
  std::vector<AgentSet> out_;
};

// Display names. The secret of an agent is its name in upper case.
class AgentNames {
 public:
  AgentNames() = default;
  explicit AgentNames(std::vector<std::string> names);
  // a, b, c, ... for n <= 26.
  static AgentNames letters(int n);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& agent(Agent a) const { return names_[static_cast<std::size_t>(a)]; }
  std::string secret(Agent s) const;
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Agent> find_agent(std::string_view name) const;
  std::optional<Agent> find_secret(std::string_view name) const;
  bool single_letters() const;

  bool operator==(const AgentNames&) const = default;

 private:
  std::vector<std::string> names_;
};

GossipSituation initial_situation(int n);
GossipSituation apply_call(const GossipSituation& s, Call c);
GossipSituation apply_sequence(const GossipSituation& s, const CallSequence& seq);
// Situations after each prefix: element i is the situation after seq[0..i).
std::vector<GossipSituation> situation_trace(const CallSequence& seq, int n);
bool is_expert(const GossipSituation& s, Agent a);
bool is_productive(const CallSequence& prefix, Call c, int n);
std::size_t productive_call_count(const CallSequence& seq, int n);

// 2n-4 calls making everyone an expert (n >= 4): agent 0 first collects from
// agents 4..n-1, then 01, 23, 03, 12, then 0 calls 4..n-1 again.
CallSequence centralized_sequence(int n);

struct RedundancyWitness {
  std::size_t first = 0;
  std::size_t second = 0;
  bool operator==(const RedundancyWitness&) const = default;
};

// Earliest (by second occurrence, then first) pair of positions holding the
// same call c with C1.c(root) = C1.c.C2.c(root).
std::optional<RedundancyWitness> find_epistemically_redundant(const CallSequence& seq, int n);

struct ReachableSet {
  std::vector<GossipSituation> situations;  // breadth-first discovery order
  std::vector<std::ptrdiff_t> parent;       // -1 for root
  std::vector<Call> via;                    // call from parent; unused for root

  CallSequence witness(std::size_t index) const;
};

ReachableSet explore_reachable(int n, const Digraph& g);
std::vector<GossipSituation> reachable_situations(int n, const Digraph& g);

std::string render(const GossipSituation& s, const AgentNames& names);
std::string render(Call c, const AgentNames& names);
std::string render(const CallSequence& seq, const AgentNames& names);
std::string render_secrets(SecretSet s, const AgentNames& names);

Call parse_call(std::string_view text, const AgentNames& names);
// Accepts calls separated by ',', '.', or whitespace; empty text is epsilon.
CallSequence parse_sequence(std::string_view text, const AgentNames& names);
GossipSituation parse_situation(std::string_view text, const AgentNames& names);

}  // namespace gossip
