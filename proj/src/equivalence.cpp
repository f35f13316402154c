#include "gossip/equivalence.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace gossip {
namespace {

struct SearchState {
  GossipSituation situation;
  std::size_t step = 0;

  bool operator==(const SearchState&) const = default;
};

struct SearchStateHash {
  std::size_t operator()(const SearchState& s) const { return SituationHash{}(s.situation) * 31 + s.step; }
};

std::vector<Call> calls_avoiding(const Digraph& domain, Agent a) {
  std::vector<Call> out;
  for (Call c : domain.calls())
    if (!c.involves(a)) out.push_back(c);
  return out;
}

// A future view step with partner p can only reproduce the recorded secrets if
// p currently holds no secret outside them; sets never shrink.
bool viable(const AgentView& view, const GossipSituation& s, std::size_t step) {
  for (std::size_t j = step; j < view.steps.size(); ++j) {
    const ViewStep& v = view.steps[j];
    const Agent partner = v.call.caller == view.owner ? v.call.callee : v.call.caller;
    if (!s[partner].subset_of(v.secrets)) return false;
  }
  return true;
}

std::optional<GossipSituation> advance(const AgentView& view, const GossipSituation& s, std::size_t step) {
  const ViewStep& v = view.steps[step];
  GossipSituation next = apply_call(s, v.call);
  if (next[view.owner] != v.secrets) return std::nullopt;
  return next;
}

template <class Visit>
void search_class(const AgentView& view, int n, const Digraph& domain, Visit&& visit) {
  if (domain.agents() != n) throw GossipError("digraph size does not match agent count");
  const std::vector<Call> others = calls_avoiding(domain, view.owner);
  std::unordered_set<SearchState, SearchStateHash> seen;
  std::vector<SearchState> stack;
  SearchState start{initial_situation(n), 0};
  if (!viable(view, start.situation, 0)) return;
  seen.insert(start);
  stack.push_back(std::move(start));
  while (!stack.empty()) {
    SearchState cur = std::move(stack.back());
    stack.pop_back();
    if (cur.step == view.steps.size() && !visit(cur.situation)) return;
    // Pushed in reverse so that the view step is expanded first.
    for (auto it = others.rbegin(); it != others.rend(); ++it) {
      SearchState next{apply_call(cur.situation, *it), cur.step};
      if (!viable(view, next.situation, next.step) || seen.contains(next)) continue;
      seen.insert(next);
      stack.push_back(std::move(next));
    }
    if (cur.step < view.steps.size()) {
      if (auto s = advance(view, cur.situation, cur.step)) {
        SearchState next{std::move(*s), cur.step + 1};
        if (viable(view, next.situation, next.step) && !seen.contains(next)) {
          seen.insert(next);
          stack.push_back(std::move(next));
        }
      }
    }
  }
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t size) : parent_(size) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    parent_[std::max(x, y)] = std::min(x, y);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

SecretSet AgentView::final_secrets() const {
  return steps.empty() ? SecretSet::single(owner) : steps.back().secrets;
}

AgentView agent_view(const CallSequence& seq, Agent a, int n) {
  AgentView view{a, {}};
  GossipSituation s = initial_situation(n);
  for (Call c : seq) {
    s.apply(c);
    if (c.involves(a)) view.steps.push_back({c, s[a]});
  }
  return view;
}

bool equivalent(const CallSequence& s1, const CallSequence& s2, Agent a, int n) {
  return agent_view(s1, a, n) == agent_view(s2, a, n);
}

ClosureClasses closure_classes(Agent a, int n, std::size_t len_bound, std::size_t budget) {
  ClosureClasses out;
  out.agent = a;
  out.agents = n;
  out.calls = Digraph::complete(n).calls();
  const std::size_t m = out.calls.size();

  // Universe in shortlex order; children[i * m + k] is the index of seq_i.calls[k].
  std::size_t universe = 0;
  for (std::size_t len = 0, layer = 1; len <= len_bound; ++len, layer *= m) {
    universe += layer;
    if (universe > budget) throw BudgetExceeded("closure_oracle universe exceeds budget");
  }
  out.universe.reserve(universe);
  out.universe.emplace_back();
  for (std::size_t i = 0; out.universe.size() < universe; ++i)
    for (Call c : out.calls) {
      CallSequence next = out.universe[i];
      next.push_back(c);
      out.universe.push_back(std::move(next));
    }
  const std::size_t npos = ClosureClasses::npos;
  out.children.assign(universe * m, npos);
  for (std::size_t i = 0, child = 1; child < universe; ++i)
    for (std::size_t k = 0; k < m && child < universe; ++k) out.children[i * m + k] = child++;
  std::vector<SecretSet> secrets_of_a(universe);
  for (std::size_t i = 0; i < universe; ++i) secrets_of_a[i] = apply_sequence(initial_situation(n), out.universe[i])[a];

  UnionFind classes(universe);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<std::size_t>> members(universe);
    for (std::size_t i = 0; i < universe; ++i) members[classes.find(i)].push_back(i);
    for (const auto& group : members) {
      for (std::size_t x : group) {
        for (std::size_t k = 0; k < m; ++k) {
          const std::size_t xc = out.children[x * m + k];
          if (xc == npos) continue;
          if (!out.calls[k].involves(a)) {
            // Step (i): x ~ y gives x.c ~ y, and x ~ x covers the rest by transitivity.
            changed |= classes.unite(xc, x);
            continue;
          }
          for (std::size_t y : group) {
            const std::size_t yc = out.children[y * m + k];
            if (yc != npos && secrets_of_a[xc] == secrets_of_a[yc]) changed |= classes.unite(xc, yc);
          }
        }
      }
    }
  }
  out.class_of.resize(universe);
  for (std::size_t i = 0; i < universe; ++i) out.class_of[i] = classes.find(i);
  return out;
}

std::size_t ClosureClasses::index_of(const CallSequence& seq) const {
  const std::size_t m = calls.size();
  std::size_t idx = 0;
  for (Call c : seq) {
    const auto it = std::find(calls.begin(), calls.end(), c);
    if (it == calls.end()) throw GossipError("call outside the complete digraph");
    idx = children[idx * m + static_cast<std::size_t>(it - calls.begin())];
    if (idx == npos) throw GossipError("sequence longer than the closure universe");
  }
  return idx;
}

bool ClosureClasses::equivalent(const CallSequence& s1, const CallSequence& s2) const {
  return class_of[index_of(s1)] == class_of[index_of(s2)];
}

bool closure_oracle(const CallSequence& s1, const CallSequence& s2, Agent a, int n, std::size_t len_bound,
                    std::size_t budget) {
  if (len_bound < std::max(s1.size(), s2.size())) throw GossipError("closure_oracle bound is shorter than its inputs");
  return closure_classes(a, n, len_bound, budget).equivalent(s1, s2);
}

std::vector<GossipSituation> class_situations(const AgentView& view, int n, const Digraph& domain) {
  std::vector<GossipSituation> out;
  search_class(view, n, domain, [&](const GossipSituation& s) {
    out.push_back(s);
    return true;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<GossipSituation> class_situations(const CallSequence& seq, Agent a, int n, const Digraph& domain) {
  return class_situations(agent_view(seq, a, n), n, domain);
}

std::optional<GossipSituation> find_class_situation(const AgentView& view, int n, const Digraph& domain,
                                                    const std::function<bool(const GossipSituation&)>& pred) {
  std::optional<GossipSituation> hit;
  search_class(view, n, domain, [&](const GossipSituation& s) {
    if (!pred(s)) return true;
    hit = s;
    return false;
  });
  return hit;
}

GossipSituation knowledge_lower_bound(const AgentView& view, int n) {
  GossipSituation s = initial_situation(n);
  std::vector<SecretSet> sets = s.sets();
  for (const ViewStep& v : view.steps) {
    sets[static_cast<std::size_t>(v.call.caller)] = sets[static_cast<std::size_t>(v.call.caller)] | v.secrets;
    sets[static_cast<std::size_t>(v.call.callee)] = sets[static_cast<std::size_t>(v.call.callee)] | v.secrets;
  }
  return GossipSituation(std::move(sets));
}

std::vector<CallSequence> class_representatives(const CallSequence& seq, Agent a, int n, const Digraph& domain,
                                                std::size_t len_bound, std::size_t budget) {
  if (len_bound < seq.size()) throw GossipError("representative bound is shorter than the sequence");
  if (domain.agents() != n) throw GossipError("digraph size does not match agent count");
  const AgentView view = agent_view(seq, a, n);
  const std::vector<Call> others = calls_avoiding(domain, a);
  std::vector<CallSequence> out;
  CallSequence current;
  std::size_t visited = 0;

  auto dfs = [&](auto&& self, const GossipSituation& s, std::size_t step) -> void {
    if (++visited > budget) throw BudgetExceeded("class_representatives exceeds budget");
    if (step == view.steps.size()) out.push_back(current);
    if (current.size() == len_bound) return;
    if (len_bound - current.size() < view.steps.size() - step) return;
    if (step < view.steps.size()) {
      if (auto next = advance(view, s, step); next && viable(view, *next, step + 1)) {
        current.push_back(view.steps[step].call);
        self(self, *next, step + 1);
        current.pop_back();
      }
    }
    for (Call c : others) {
      GossipSituation next = apply_call(s, c);
      if (!viable(view, next, step)) continue;
      current.push_back(c);
      self(self, next, step);
      current.pop_back();
    }
  };
  const GossipSituation root = initial_situation(n);
  if (viable(view, root, 0)) dfs(dfs, root, 0);
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

}  // namespace gossip
