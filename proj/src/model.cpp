#include "gossip/model.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <unordered_map>

namespace gossip {

std::vector<Agent> AgentSet::members() const {
  std::vector<Agent> out;
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(__builtin_ctz(b));
  return out;
}

bool shortlex_less(const CallSequence& lhs, const CallSequence& rhs) {
  if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
  return lhs < rhs;
}

int GossipSituation::weight() const {
  int w = 0;
  for (SecretSet s : sets_) w += s.size();
  return w;
}

bool GossipSituation::all_experts() const {
  const SecretSet full = SecretSet::all(agents());
  return std::all_of(sets_.begin(), sets_.end(), [&](SecretSet s) { return s == full; });
}

bool GossipSituation::below(const GossipSituation& other) const {
  for (std::size_t i = 0; i < sets_.size(); ++i)
    if (!sets_[i].subset_of(other.sets_[i])) return false;
  return true;
}

void GossipSituation::apply(Call c) {
  const SecretSet merged = sets_[static_cast<std::size_t>(c.caller)] | sets_[static_cast<std::size_t>(c.callee)];
  sets_[static_cast<std::size_t>(c.caller)] = merged;
  sets_[static_cast<std::size_t>(c.callee)] = merged;
}

std::size_t SituationHash::operator()(const GossipSituation& s) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (SecretSet set : s.sets()) {
    h ^= set.bits();
    h *= 0x100000001b3ull;
  }
  return h;
}

Digraph Digraph::complete(int n) {
  Digraph g(n);
  for (Agent a = 0; a < n; ++a)
    for (Agent b = 0; b < n; ++b)
      if (a != b) g.add_edge(a, b);
  return g;
}

Digraph Digraph::path(int n) {
  Digraph g(n);
  for (Agent a = 0; a + 1 < n; ++a) {
    g.add_edge(a, a + 1);
    g.add_edge(a + 1, a);
  }
  return g;
}

Digraph Digraph::ring(int n) {
  Digraph g = path(n);
  if (n >= 3) {
    g.add_edge(n - 1, 0);
    g.add_edge(0, n - 1);
  }
  return g;
}

Digraph Digraph::star(int n, Agent hub) {
  Digraph g(n);
  for (Agent a = 0; a < n; ++a) {
    if (a == hub) continue;
    g.add_edge(hub, a);
    g.add_edge(a, hub);
  }
  return g;
}

void Digraph::add_edge(Agent from, Agent to) {
  if (from == to) throw GossipError("digraph edges must join distinct agents");
  if (from < 0 || to < 0 || from >= agents() || to >= agents()) throw GossipError("digraph edge out of range");
  out_[static_cast<std::size_t>(from)].insert(to);
}

std::size_t Digraph::edge_count() const {
  std::size_t count = 0;
  for (AgentSet s : out_) count += static_cast<std::size_t>(s.size());
  return count;
}

bool Digraph::is_complete() const {
  const int n = agents();
  return edge_count() == static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1);
}

bool Digraph::is_weakly_connected() const {
  const int n = agents();
  if (n == 0) return true;
  std::vector<AgentSet> undirected(out_.begin(), out_.end());
  for (Agent a = 0; a < n; ++a)
    for (Agent b : out_[static_cast<std::size_t>(a)].members()) undirected[static_cast<std::size_t>(b)].insert(a);
  AgentSet seen = AgentSet::single(0);
  std::vector<Agent> stack{0};
  while (!stack.empty()) {
    const Agent a = stack.back();
    stack.pop_back();
    for (Agent b : undirected[static_cast<std::size_t>(a)].members()) {
      if (seen.contains(b)) continue;
      seen.insert(b);
      stack.push_back(b);
    }
  }
  return seen == AgentSet::all(n);
}

std::vector<Call> Digraph::calls() const {
  std::vector<Call> out;
  for (Agent a = 0; a < agents(); ++a)
    for (Agent b : out_[static_cast<std::size_t>(a)].members()) out.push_back({a, b});
  return out;
}

AgentNames::AgentNames(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > static_cast<std::size_t>(kMaxAgents)) throw GossipError("too many agents");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const std::string& name = names_[i];
    if (name.empty() || !std::islower(static_cast<unsigned char>(name[0])))
      throw GossipError("agent names must start with a lowercase letter: '" + name + "'");
    for (char ch : name)
      if (!(std::islower(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch)) || ch == '_'))
        throw GossipError("invalid agent name '" + name + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (names_[j] == name) throw GossipError("duplicate agent name '" + name + "'");
  }
}

AgentNames AgentNames::letters(int n) {
  if (n < 0 || n > 26) throw GossipError("letter names support at most 26 agents");
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.emplace_back(1, static_cast<char>('a' + i));
  return AgentNames(std::move(names));
}

std::string AgentNames::secret(Agent s) const {
  std::string out = agent(s);
  for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

std::optional<Agent> AgentNames::find_agent(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Agent>(i);
  return std::nullopt;
}

std::optional<Agent> AgentNames::find_secret(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (secret(static_cast<Agent>(i)) == name) return static_cast<Agent>(i);
  return std::nullopt;
}

bool AgentNames::single_letters() const {
  return std::all_of(names_.begin(), names_.end(), [](const std::string& s) { return s.size() == 1; });
}

GossipSituation initial_situation(int n) {
  if (n < 2) throw GossipError("a gossip situation needs at least two agents");
  if (n > kMaxAgents) throw GossipError("at most " + std::to_string(kMaxAgents) + " agents are supported");
  std::vector<SecretSet> sets;
  sets.reserve(static_cast<std::size_t>(n));
  for (Agent a = 0; a < n; ++a) sets.push_back(SecretSet::single(a));
  return GossipSituation(std::move(sets));
}

GossipSituation apply_call(const GossipSituation& s, Call c) {
  if (c.caller == c.callee) throw GossipError("a call needs two distinct agents");
  GossipSituation out = s;
  out.apply(c);
  return out;
}

GossipSituation apply_sequence(const GossipSituation& s, const CallSequence& seq) {
  GossipSituation out = s;
  for (Call c : seq) out.apply(c);
  return out;
}

std::vector<GossipSituation> situation_trace(const CallSequence& seq, int n) {
  std::vector<GossipSituation> trace;
  trace.reserve(seq.size() + 1);
  trace.push_back(initial_situation(n));
  for (Call c : seq) trace.push_back(apply_call(trace.back(), c));
  return trace;
}

bool is_expert(const GossipSituation& s, Agent a) { return s[a] == SecretSet::all(s.agents()); }

bool is_productive(const CallSequence& prefix, Call c, int n) {
  const GossipSituation s = apply_sequence(initial_situation(n), prefix);
  return s[c.caller] != s[c.callee];
}

std::size_t productive_call_count(const CallSequence& seq, int n) {
  GossipSituation s = initial_situation(n);
  std::size_t count = 0;
  for (Call c : seq) {
    if (s[c.caller] != s[c.callee]) ++count;
    s.apply(c);
  }
  return count;
}

std::optional<RedundancyWitness> find_epistemically_redundant(const CallSequence& seq, int n) {
  const std::vector<GossipSituation> trace = situation_trace(seq, n);
  for (std::size_t second = 1; second < seq.size(); ++second)
    for (std::size_t first = 0; first < second; ++first)
      if (seq[first] == seq[second] && trace[first + 1] == trace[second + 1]) return RedundancyWitness{first, second};
  return std::nullopt;
}

CallSequence centralized_sequence(int n) {
  if (n < 4 || n > kMaxAgents) throw GossipError("the centralized sequence needs at least four agents");
  CallSequence seq;
  for (Agent i = 4; i < n; ++i) seq.push_back({0, i});
  seq.insert(seq.end(), {{0, 1}, {2, 3}, {0, 3}, {1, 2}});
  for (Agent i = 4; i < n; ++i) seq.push_back({0, i});
  return seq;
}

CallSequence ReachableSet::witness(std::size_t index) const {
  CallSequence seq;
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(index); parent[static_cast<std::size_t>(i)] >= 0;
       i = parent[static_cast<std::size_t>(i)])
    seq.push_back(via[static_cast<std::size_t>(i)]);
  std::reverse(seq.begin(), seq.end());
  return seq;
}

ReachableSet explore_reachable(int n, const Digraph& g) {
  if (g.agents() != n) throw GossipError("digraph size does not match agent count");
  ReachableSet out;
  std::unordered_map<GossipSituation, std::size_t, SituationHash> index;
  out.situations.push_back(initial_situation(n));
  out.parent.push_back(-1);
  out.via.push_back({});
  index.emplace(out.situations.front(), 0);
  const std::vector<Call> calls = g.calls();
  for (std::size_t i = 0; i < out.situations.size(); ++i) {
    for (Call c : calls) {
      GossipSituation next = apply_call(out.situations[i], c);
      if (index.contains(next)) continue;
      index.emplace(next, out.situations.size());
      out.situations.push_back(std::move(next));
      out.parent.push_back(static_cast<std::ptrdiff_t>(i));
      out.via.push_back(c);
    }
  }
  return out;
}

std::vector<GossipSituation> reachable_situations(int n, const Digraph& g) {
  return explore_reachable(n, g).situations;
}

std::string render_secrets(SecretSet s, const AgentNames& names) {
  std::string out;
  for (Agent a : s.members()) out += names.secret(a);
  return out;
}

std::string render(const GossipSituation& s, const AgentNames& names) {
  std::string out;
  for (Agent a = 0; a < s.agents(); ++a) {
    if (a > 0) out += '.';
    out += render_secrets(s[a], names);
  }
  return out;
}

std::string render(Call c, const AgentNames& names) { return names.agent(c.caller) + names.agent(c.callee); }

std::string render(const CallSequence& seq, const AgentNames& names) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i > 0) out += ',';
    out += render(seq[i], names);
  }
  return out;
}

Call parse_call(std::string_view text, const AgentNames& names) {
  std::optional<Call> found;
  for (std::size_t split = 1; split < text.size(); ++split) {
    auto a = names.find_agent(text.substr(0, split));
    auto b = names.find_agent(text.substr(split));
    if (!a || !b) continue;
    if (found) throw GossipError("ambiguous call token '" + std::string(text) + "'");
    found = Call{*a, *b};
  }
  if (!found) throw GossipError("unknown call '" + std::string(text) + "'");
  if (found->caller == found->callee) throw GossipError("call '" + std::string(text) + "' joins an agent to itself");
  return *found;
}

CallSequence parse_sequence(std::string_view text, const AgentNames& names) {
  CallSequence seq;
  std::size_t i = 0;
  auto separator = [](char ch) { return ch == ',' || ch == '.' || std::isspace(static_cast<unsigned char>(ch)); };
  while (i < text.size()) {
    while (i < text.size() && separator(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !separator(text[j])) ++j;
    if (j > i) {
      std::string_view token = text.substr(i, j - i);
      if (token != "eps" && token != "ε") seq.push_back(parse_call(token, names));
    }
    i = j;
  }
  return seq;
}

GossipSituation parse_situation(std::string_view text, const AgentNames& names) {
  std::vector<SecretSet> sets;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('.', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view part = text.substr(start, end - start);
    SecretSet set;
    std::size_t i = 0;
    while (i < part.size()) {
      bool matched = false;
      for (std::size_t len = part.size() - i; len > 0; --len) {
        if (auto s = names.find_secret(part.substr(i, len))) {
          set.insert(*s);
          i += len;
          matched = true;
          break;
        }
      }
      if (!matched) throw GossipError("unknown secret in '" + std::string(part) + "'");
    }
    sets.push_back(set);
    start = end + 1;
  }
  if (static_cast<int>(sets.size()) != names.size()) throw GossipError("situation has the wrong number of agents");
  for (Agent a = 0; a < names.size(); ++a)
    if (!sets[static_cast<std::size_t>(a)].contains(a))
      throw GossipError("agent '" + names.agent(a) + "' must hold its own secret");
  return GossipSituation(std::move(sets));
}

}  // namespace gossip
