#include "gossip/protocol.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace gossip {

std::optional<std::string> guard_violation(const Formula& guard, Agent owner, bool permissive) {
  const Fragment fragment = fragment_of(guard);
  if (fragment == Fragment::Lck) return "common knowledge is not allowed in guards";
  if (fragment == Fragment::L) return "nested knowledge is not allowed in guards";
  if (permissive) return std::nullopt;
  if (!knowledge_agents(guard).subset_of(AgentSet::single(owner)))
    return "a guard may only use the knowledge of the calling agent";
  if (!top_level_atom_owners(guard).subset_of(AgentSet::single(owner)))
    return "atoms outside K must describe the calling agent";
  return std::nullopt;
}

Digraph inferred_digraph(const std::vector<Program>& programs, int n) {
  Digraph g(n);
  for (const Program& p : programs)
    for (const Rule& r : p.rules) g.add_edge(r.call.caller, r.call.callee);
  return g;
}

Digraph inferred_digraph(const Protocol& p) { return inferred_digraph(p.programs(), p.agents()); }

Protocol::Protocol(AgentNames names, std::vector<Program> programs, std::optional<Digraph> digraph,
                   ProtocolOptions options)
    : names_(std::move(names)), programs_(std::move(programs)), options_(options) {
  const int n = names_.size();
  if (n < 2 || (n < 3 && !options_.allow_two_agents))
    throw GossipError("a protocol needs at least " + std::string(options_.allow_two_agents ? "two" : "three") +
                      " agents");
  if (programs_.size() != static_cast<std::size_t>(n)) throw GossipError("expected one program per agent");
  for (Agent a = 0; a < n; ++a) {
    const Program& p = programs_[static_cast<std::size_t>(a)];
    if (p.owner != a) throw GossipError("programs must be listed by owner");
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
      const Rule& r = p.rules[i];
      const std::string where = "rule " + std::to_string(i + 1) + " of " + names_.agent(a) + ": ";
      if (r.call.caller != a) throw GossipError(where + "the call must be made by the program owner");
      if (r.call.callee < 0 || r.call.callee >= n || r.call.callee == a) throw GossipError(where + "invalid callee");
      if (max_index(r.guard) >= n) throw GossipError(where + "guard mentions an unknown agent");
      if (auto why = guard_violation(r.guard, a, options_.permissive_guards)) throw GossipError(where + *why);
      if (guard_violation(r.guard, a, false)) outside_restriction_ = true;
      if (!gossip::is_propositional(r.guard)) propositional_ = false;
      refs_.push_back({a, i});
    }
  }
  const Digraph inferred = inferred_digraph(programs_, n);
  digraph_ = digraph.value_or(inferred);
  if (digraph_.agents() != n) throw GossipError("digraph size does not match agent count");
  for (Call c : inferred.calls())
    if (!digraph_.has_edge(c.caller, c.callee))
      throw GossipError("call " + render(c, names_) + " is not an edge of the digraph");
  if (digraph_.empty())
    warnings_.push_back("the protocol makes no calls");
  else if (!digraph_.is_weakly_connected())
    warnings_.push_back("the digraph is not connected; not every agent can become an expert");
  if (outside_restriction_)
    warnings_.push_back("some guard is outside the guard restriction; verdicts are outside its guarantees");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool ident_start(char ch) { return std::islower(static_cast<unsigned char>(ch)) != 0; }
bool ident_char(char ch) {
  return std::islower(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch)) || ch == '_';
}

class ProtocolParser {
 public:
  ProtocolParser(std::string_view text, ProtocolOptions options) : source_(text), text_(text), options_(options) {
    // Comments become blanks so offsets stay valid.
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (text_[i] != '#') continue;
      for (; i < text_.size() && text_[i] != '\n'; ++i) text_[i] = ' ';
    }
  }

  Protocol parse() {
    keyword("agents");
    expect(":");
    std::vector<std::string> list;
    std::vector<std::size_t> where;
    while (!at_end() && !at_keyword("graph") && !at_keyword("program")) {
      where.push_back(pos_);
      list.push_back(ident());
    }
    if (list.empty()) fail("expected agent names");
    for (std::string_view reserved : {"graph", "program", "agents", "complete"})
      for (std::size_t i = 0; i < list.size(); ++i)
        if (list[i] == reserved) fail_at(where[i], "'" + std::string(reserved) + "' cannot name an agent");
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (list[i] == list[j]) fail_at(where[i], "duplicate agent '" + list[i] + "'");
    if (list.size() > static_cast<std::size_t>(kMaxAgents)) fail_at(where.back(), "too many agents");
    const std::size_t min_agents = options_.allow_two_agents ? 2 : 3;
    if (list.size() < min_agents) fail_at(where.front(), "at least " + std::to_string(min_agents) + " agents needed");
    names_ = AgentNames(list);
    const int n = names_.size();

    std::optional<Digraph> graph;
    if (at_keyword("graph")) {
      keyword("graph");
      expect(":");
      skip_space();
      if (peek_ident() == "complete") {
        ident();
        graph = Digraph::complete(n);
      } else {
        graph = Digraph(n);
        do {
          const std::size_t at = (skip_space(), pos_);
          const Agent from = agent();
          expect("->");
          const Agent to = agent();
          if (from == to) fail_at(at, "an edge needs two distinct agents");
          graph->add_edge(from, to);
        } while (accept(","));
      }
    }

    std::vector<Program> programs(static_cast<std::size_t>(n));
    for (Agent a = 0; a < n; ++a) programs[static_cast<std::size_t>(a)].owner = a;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    if (at_end()) fail("expected at least one program");
    while (!at_end()) {
      keyword("program");
      const std::size_t owner_at = (skip_space(), pos_);
      const Agent owner = agent();
      if (seen[static_cast<std::size_t>(owner)]) fail_at(owner_at, "second program for '" + names_.agent(owner) + "'");
      seen[static_cast<std::size_t>(owner)] = true;
      expect(":");
      while (!at_end() && !at_keyword("program"))
        programs[static_cast<std::size_t>(owner)].rules.push_back(rule(owner, graph));
    }

    try {
      return Protocol(names_, std::move(programs), std::move(graph), options_);
    } catch (const ParseError&) {
      throw;
    } catch (const GossipError& e) {
      fail_at(0, e.what());
    }
  }

 private:
  Rule rule(Agent owner, const std::optional<Digraph>& graph) {
    const std::size_t start = (skip_space(), pos_);
    const std::size_t arrow = text_.find("~>", start);
    if (arrow == std::string::npos) fail_at(start, "expected a rule 'guard ~> caller callee'");
    Formula guard = [&] {
      try {
        return parse_formula(std::string_view(text_).substr(start, arrow - start), names_);
      } catch (const ParseError& e) {
        fail_at(start + e.position(), e.message());
      }
    }();
    pos_ = arrow + 2;
    const std::size_t call_at = (skip_space(), pos_);
    const Agent caller = agent();
    const Agent callee = agent();
    if (caller != owner)
      fail_at(call_at, "rules in the program of '" + names_.agent(owner) + "' must be calls by '" +
                           names_.agent(owner) + "'");
    if (callee == caller) fail_at(call_at, "an agent cannot call itself");
    if (auto why = guard_violation(guard, owner, options_.permissive_guards)) fail_at(start, *why);
    if (graph && !graph->has_edge(caller, callee))
      fail_at(call_at, "call " + render(Call{caller, callee}, names_) + " is not an edge of the declared graph");
    return Rule{std::move(guard), Call{caller, callee}};
  }

  [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }

  [[noreturn]] void fail_at(std::size_t offset, const std::string& message) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < source_.size(); ++i) {
      if (source_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(offset, line, column, message);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ == text_.size();
  }

  std::string_view peek_ident() const {
    std::size_t end = pos_;
    if (end < text_.size() && ident_start(text_[end]))
      while (end < text_.size() && ident_char(text_[end])) ++end;
    return std::string_view(text_).substr(pos_, end - pos_);
  }

  // A keyword is recognised only when followed by its usual continuation so
  // that rules cannot be mistaken for one.
  bool at_keyword(std::string_view word) {
    skip_space();
    if (peek_ident() != word) return false;
    std::size_t after = pos_ + word.size();
    while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) ++after;
    if (word == "program") return after < text_.size() && ident_start(text_[after]);
    return after < text_.size() && text_[after] == ':';
  }

  void keyword(std::string_view word) {
    skip_space();
    if (peek_ident() != word) fail("expected '" + std::string(word) + "'");
    pos_ += word.size();
  }

  bool accept(std::string_view token) {
    skip_space();
    if (std::string_view(text_).substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string ident() {
    skip_space();
    const std::string_view word = peek_ident();
    if (word.empty()) fail("expected a name");
    pos_ += word.size();
    return std::string(word);
  }

  Agent agent() {
    const std::size_t at = (skip_space(), pos_);
    const std::string name = ident();
    auto a = names_.find_agent(name);
    if (!a) fail_at(at, "unknown agent '" + name + "'");
    return *a;
  }

  std::string_view source_;
  std::string text_;
  ProtocolOptions options_;
  AgentNames names_;
  std::size_t pos_ = 0;
};

}  // namespace

Protocol parse_protocol(std::string_view text, ProtocolOptions options) {
  return ProtocolParser(text, options).parse();
}

std::string render_protocol(const Protocol& p) {
  const AgentNames& names = p.names();
  std::ostringstream out;
  out << "agents:";
  for (const std::string& name : names.names()) out << ' ' << name;
  out << '\n';
  const Digraph& g = p.digraph();
  if (g.is_complete()) {
    out << "graph: complete\n";
  } else if (!(g == inferred_digraph(p))) {
    out << "graph:";
    bool first = true;
    for (Call c : g.calls()) {
      out << (first ? " " : ", ") << names.agent(c.caller) << "->" << names.agent(c.callee);
      first = false;
    }
    out << '\n';
  }
  for (const Program& prog : p.programs()) {
    out << "\nprogram " << names.agent(prog.owner) << ":\n";
    for (const Rule& r : prog.rules)
      out << "  " << render(r.guard, names) << " ~> " << names.agent(r.call.caller) << ' '
          << names.agent(r.call.callee) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Builtins

const char* to_string(Builtin b) {
  switch (b) {
    case Builtin::Lns: return "lns";
    case Builtin::Hms: return "hms";
    case Builtin::Exp: return "exp";
    case Builtin::TwoPhase: return "two_phase";
  }
  return "?";
}

std::optional<Builtin> builtin_from_string(std::string_view name) {
  for (Builtin b : {Builtin::Lns, Builtin::Hms, Builtin::Exp, Builtin::TwoPhase})
    if (name == to_string(b)) return b;
  return std::nullopt;
}

AgentNames default_names(int n) {
  if (n <= 26) return AgentNames::letters(n);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return AgentNames(std::move(names));
}

Protocol builtin(Builtin which, int n, std::optional<Digraph> g, std::optional<AgentNames> names) {
  if (n < 2 || n > kMaxAgents) throw GossipError("unsupported agent count " + std::to_string(n));
  AgentNames agent_names = names.value_or(default_names(n));
  if (agent_names.size() != n) throw GossipError("expected " + std::to_string(n) + " agent names");
  if (g && g->agents() != n) throw GossipError("digraph size does not match agent count");

  std::vector<Program> programs(static_cast<std::size_t>(n));
  for (Agent a = 0; a < n; ++a) programs[static_cast<std::size_t>(a)].owner = a;
  ProtocolOptions options;
  options.allow_two_agents = n == 2;

  if (which == Builtin::TwoPhase) {
    if (n < 4) throw GossipError("two_phase needs at least four agents");
    if (g) throw GossipError("two_phase fixes its own digraph");
    auto& hub = programs[0].rules;
    for (Agent i = 1; i < n; ++i) hub.push_back({Formula::negation(Formula::atom(0, i)), Call{0, i}});
    for (Agent i = 1; i < n; ++i)
      hub.push_back({Formula::conjunction(Formula::expert(0, n),
                                          Formula::negation(Formula::know(0, Formula::expert(i, n)))),
                     Call{0, i}});
    return Protocol(std::move(agent_names), std::move(programs), std::nullopt, options);
  }

  const Digraph graph = g.value_or(Digraph::complete(n));
  for (Agent i = 0; i < n; ++i) {
    for (Agent j : graph.successors(i).members()) {
      Formula guard = [&] {
        switch (which) {
          case Builtin::Lns: return Formula::negation(Formula::atom(i, j));
          case Builtin::Hms: return Formula::negation(Formula::know(i, Formula::atom(j, i)));
          default: return Formula::negation(Formula::expert(i, n));
        }
      }();
      programs[static_cast<std::size_t>(i)].rules.push_back({std::move(guard), Call{i, j}});
    }
  }
  return Protocol(std::move(agent_names), std::move(programs), graph, options);
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    parts.emplace_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

Digraph shape(std::string_view name, int n) {
  if (name == "complete") return Digraph::complete(n);
  if (name == "path") return Digraph::path(n);
  if (name == "ring") return Digraph::ring(n);
  if (name == "star") return Digraph::star(n, 0);
  throw GossipError("unknown digraph shape '" + std::string(name) + "'");
}

}  // namespace

Protocol protocol_from_ref(std::string_view ref, ProtocolOptions options) {
  const std::vector<std::string> parts = split(ref, ':');
  if (parts.size() >= 2 && builtin_from_string(parts[0])) {
    const Builtin which = *builtin_from_string(parts[0]);
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(parts[1], &used);
      if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    } catch (const std::exception&) {
      throw GossipError("bad agent count in '" + std::string(ref) + "'");
    }
    if (parts.size() > 4) throw GossipError("too many fields in '" + std::string(ref) + "'");
    std::optional<AgentNames> names;
    if (parts.size() == 4) names = AgentNames(split(parts[3], ','));
    std::optional<Digraph> g;
    if (parts.size() >= 3) g = shape(parts[2], n);
    if (which == Builtin::TwoPhase && g && g->is_complete()) g.reset();
    return builtin(which, n, std::move(g), std::move(names));
  }
  std::ifstream in{std::string(ref)};
  if (!in) throw GossipError("cannot read protocol '" + std::string(ref) + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_protocol(buffer.str(), options);
}

}  // namespace gossip
