#include "gossip/logic.hpp"

#include <algorithm>

namespace gossip {

Evaluator::Evaluator(int n, EvalConfig config)
    : n_(n), config_(std::move(config)), domain_(config_.domain.value_or(Digraph::complete(n))) {
  if (n < 2 || n > kMaxAgents) throw GossipError("unsupported agent count " + std::to_string(n));
  if (domain_.agents() != n) throw GossipError("quantification digraph has the wrong size");
}

EvalResult Evaluator::eval(const Formula& f, const CallSequence& seq) {
  if (max_index(f) >= n_) throw GossipError("formula mentions an agent outside the model");
  for (Call c : seq)
    if (c.caller >= n_ || c.callee >= n_ || c.caller == c.callee) throw GossipError("malformed call in sequence");
  const Point at{seq, apply_sequence(initial_situation(n_), seq)};
  return eval_at(f, at);
}

EvalResult Evaluator::eval_at(const Formula& f, const Point& at) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return {at.situation[f.agent()].contains(f.secret()), true};
    case FormulaKind::Not: {
      EvalResult r = eval_at(f.body(), at);
      r.value = !r.value;
      return r;
    }
    case FormulaKind::And: {
      EvalResult l = eval_at(f.lhs(), at);
      if (!l.value) return l;
      EvalResult r = eval_at(f.rhs(), at);
      return {r.value, l.exact && r.exact};
    }
    case FormulaKind::Know:
      return know(f.agent(), f.body(), at);
    case FormulaKind::Common:
      return common(f, at);
  }
  return {};
}

bool Evaluator::know_propositional(const AgentView& view, const Formula& body) {
  // Negation-free bodies are upward closed, so the pointwise lower bound of
  // the class settles the positive case without a search.
  if (!has_negation(body) && holds_in(body, knowledge_lower_bound(view, n_))) return true;
  auto falsifier = find_class_situation(view, n_, domain_, [&](const GossipSituation& s) { return !holds_in(body, s); });
  return !falsifier.has_value();
}

EvalResult Evaluator::know(Agent a, const Formula& body, const Point& at) {
  ++queries_;
  AgentView view = agent_view(at.seq, a, n_);
  const bool propositional = is_propositional(body);
  if (!propositional && config_.representative_bound == 0)
    throw FragmentError("nested knowledge needs a representative bound");
  const std::size_t bound = propositional ? 0 : std::max(config_.representative_bound, at.seq.size());
  KnowKey key{body.id(), view, bound};
  if (auto it = know_cache_.find(key); it != know_cache_.end()) {
    ++hits_;
    return it->second;
  }
  pinned_.emplace(body.id(), body);

  EvalResult result{true, propositional};
  if (propositional) {
    result.value = know_propositional(view, body);
  } else {
    for (const CallSequence& rep : class_representatives(at.seq, a, n_, domain_, bound, config_.budget)) {
      const Point p{rep, apply_sequence(initial_situation(n_), rep)};
      if (!eval_at(body, p).value) {
        result.value = false;
        break;
      }
    }
  }
  know_cache_.emplace(std::move(key), result);
  return result;
}

EvalResult Evaluator::common(const Formula& f, const Point& at) {
  const std::vector<Agent> group = f.group().members();
  const Formula& body = f.body();
  if (group.size() == 1) return know(group.front(), body, at);

  if (group.size() >= 3) {
    if (is_propositional(body)) return {truth_L0(body).holds, true};
    const BoundedTruth t = holds_for_all_bounded(body, n_, domain_, config_.truth_bound, config_);
    return {!t.refuted, t.refuted && t.exact};
  }

  const Agent a = group[0];
  const Agent b = group[1];
  if (has_negation(body))
    throw UnsupportedCommon("common knowledge of a two-agent group is supported only for negation-free bodies");
  for (Call c : at.seq)
    if (c.involves(a) && c.involves(b))
      throw UnsupportedCommon("common knowledge of a two-agent group is unsupported after a call between its members");
  auto it = surrogates_.find(f.id());
  if (it == surrogates_.end()) {
    pinned_.emplace(f.id(), f);
    Formula alternation = Formula::know(a, Formula::know(b, Formula::know(a, Formula::know(b, body))));
    it = surrogates_.emplace(f.id(), std::move(alternation)).first;
  }
  return eval_at(it->second, at);
}

TruthResult Evaluator::truth_L0(const Formula& f) {
  if (auto it = truth_cache_.find(f.id()); it != truth_cache_.end()) return it->second;
  pinned_.emplace(f.id(), f);
  TruthResult r = is_true_L0(f, n_, domain_);
  truth_cache_.emplace(f.id(), r);
  return r;
}

EvalResult eval(const Formula& f, const CallSequence& seq, int n, const EvalConfig& config) {
  Evaluator ev(n, config);
  return ev.eval(f, seq);
}

TruthResult is_true_L0(const Formula& f, int n, const Digraph& g) {
  if (!is_propositional(f)) throw FragmentError("is_true_L0 needs a propositional formula");
  if (max_index(f) >= n) throw GossipError("formula mentions an agent outside the model");
  const ReachableSet reach = explore_reachable(n, g);
  for (std::size_t i = 0; i < reach.situations.size(); ++i) {
    if (holds_in(f, reach.situations[i])) continue;
    return TruthResult{false, reach.situations[i], reach.witness(i)};
  }
  return TruthResult{};
}

BoundedTruth holds_for_all_bounded(const Formula& f, int n, const Digraph& g, std::size_t len_bound,
                                   const EvalConfig& config) {
  const std::vector<Call> calls = g.calls();
  const std::size_t m = calls.size();
  std::size_t total = 0;
  for (std::size_t len = 0, layer = 1; len <= len_bound; ++len) {
    total += layer;
    if (total > config.budget) throw BudgetExceeded("bounded truth check exceeds budget");
    if (m > 0) layer *= m;
    else layer = 0;
  }
  Evaluator ev(n, config);
  BoundedTruth out;
  out.bound = len_bound;
  for (std::size_t len = 0; len <= len_bound; ++len) {
    if (len > 0 && m == 0) break;
    std::vector<std::size_t> digits(len, 0);
    CallSequence seq(len);
    while (true) {
      for (std::size_t i = 0; i < len; ++i) seq[i] = calls[digits[i]];
      const EvalResult r = ev.eval(f, seq);
      ++out.sequences_checked;
      out.exact = out.exact && r.exact;
      if (!r.value) {
        out.refuted = true;
        out.counterexample = seq;
        out.exact = r.exact;
        return out;
      }
      std::size_t pos = len;
      while (pos > 0 && ++digits[pos - 1] == m) digits[--pos] = 0;
      if (pos == 0) break;
    }
  }
  return out;
}

namespace {

// Injective agent tuples starting at `from` and ending at `to`, of every
// length 2..n, in order of length and then lexicographically.
void chains(int n, Agent from, Agent to, std::vector<std::vector<Agent>>& out) {
  std::vector<Agent> middle;
  for (Agent x = 0; x < n; ++x)
    if (x != from && x != to) middle.push_back(x);
  for (std::size_t inner = 0; inner <= middle.size(); ++inner) {
    std::vector<Agent> path{from};
    std::vector<bool> used(middle.size(), false);
    auto extend = [&](auto&& self) -> void {
      if (path.size() == inner + 1) {
        std::vector<Agent> full = path;
        full.push_back(to);
        out.push_back(std::move(full));
        return;
      }
      for (std::size_t i = 0; i < middle.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        path.push_back(middle[i]);
        self(self);
        path.pop_back();
        used[i] = false;
      }
    };
    extend(extend);
  }
}

}  // namespace

Formula build_axiom(int n, Axiom which) {
  if (n < 3) throw GossipError("axiom instances need at least three agents");
  std::vector<Formula> clauses;
  for (Agent a = 0; a < n; ++a) {
    for (Agent b = 0; b < n; ++b) {
      if (a == b) continue;
      const Formula knows = Formula::atom(a, b);
      switch (which) {
        case Axiom::Chain: {
          std::vector<std::vector<Agent>> paths;
          chains(n, b, a, paths);
          std::vector<Formula> disjuncts;
          for (const auto& path : paths) {
            std::vector<Formula> links;
            for (std::size_t h = 0; h + 1 < path.size(); ++h) {
              links.push_back(Formula::atom(path[h], path[h + 1]));
              links.push_back(Formula::atom(path[h + 1], path[h]));
            }
            disjuncts.push_back(Formula::conjunction(links));
          }
          clauses.push_back(Formula::implication(knows, Formula::disjunction(disjuncts)));
          break;
        }
        case Axiom::Reveal: {
          std::vector<Formula> holders;
          for (Agent c = 0; c < n; ++c)
            if (c != a) holders.push_back(Formula::atom(c, a));
          clauses.push_back(Formula::implication(knows, Formula::disjunction(holders)));
          break;
        }
        case Axiom::OnlyCaller: {
          std::vector<Formula> only{knows};
          for (Agent i = 0; i < n; ++i)
            if (i != a && i != b) only.push_back(Formula::negation(Formula::atom(i, b)));
          clauses.push_back(Formula::implication(Formula::conjunction(only), Formula::atom(b, a)));
          break;
        }
      }
    }
  }
  return Formula::conjunction(clauses);
}

}  // namespace gossip
