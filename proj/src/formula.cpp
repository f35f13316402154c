#include "gossip/formula.hpp"

#include <cctype>

namespace gossip {

Formula Formula::atom(Agent a, Agent secret) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Atom, a, secret, {}, {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Not, 0, 0, {}, {std::move(f)}}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::And, 0, 0, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::know(Agent a, Formula f) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Know, a, 0, {}, {std::move(f)}}));
}

Formula Formula::common(AgentSet group, Formula f) {
  if (group.empty()) throw GossipError("common knowledge needs a nonempty group");
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Common, 0, 0, group, {std::move(f)}}));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return negation(conjunction(negation(std::move(lhs)), negation(std::move(rhs))));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return negation(conjunction(std::move(lhs), negation(std::move(rhs))));
}

Formula Formula::conjunction(const std::vector<Formula>& parts) {
  if (parts.empty()) throw GossipError("empty conjunction");
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = conjunction(out, parts[i]);
  return out;
}

Formula Formula::disjunction(const std::vector<Formula>& parts) {
  if (parts.empty()) throw GossipError("empty disjunction");
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = disjunction(out, parts[i]);
  return out;
}

Formula Formula::expert(Agent a, int n) {
  std::vector<Formula> atoms;
  for (Agent s = 0; s < n; ++s) atoms.push_back(atom(a, s));
  return conjunction(atoms);
}

FormulaKind Formula::kind() const { return node_->kind; }
Agent Formula::agent() const { return node_->agent; }
Agent Formula::secret() const { return node_->secret; }
AgentSet Formula::group() const { return node_->group; }
const Formula& Formula::lhs() const { return node_->children[0]; }
const Formula& Formula::rhs() const { return node_->children[1]; }
const Formula& Formula::body() const { return node_->children[0]; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  const Node& x = *node_;
  const Node& y = *other.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case FormulaKind::Atom:
      return x.agent == y.agent && x.secret == y.secret;
    case FormulaKind::Not:
      return x.children[0] == y.children[0];
    case FormulaKind::And:
      return x.children[0] == y.children[0] && x.children[1] == y.children[1];
    case FormulaKind::Know:
      return x.agent == y.agent && x.children[0] == y.children[0];
    case FormulaKind::Common:
      return x.group == y.group && x.children[0] == y.children[0];
  }
  return false;
}

const char* to_string(Fragment f) {
  switch (f) {
    case Fragment::L0: return "L0";
    case Fragment::L1: return "L1";
    case Fragment::L: return "L";
    case Fragment::Lck: return "Lck";
  }
  return "?";
}

namespace {

bool contains_common(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return false;
    case FormulaKind::Not:
    case FormulaKind::Know: return contains_common(f.body());
    case FormulaKind::And: return contains_common(f.lhs()) || contains_common(f.rhs());
    case FormulaKind::Common: return true;
  }
  return false;
}

}  // namespace

int knowledge_depth(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return 0;
    case FormulaKind::Not: return knowledge_depth(f.body());
    case FormulaKind::And: return std::max(knowledge_depth(f.lhs()), knowledge_depth(f.rhs()));
    case FormulaKind::Know:
    case FormulaKind::Common: return 1 + knowledge_depth(f.body());
  }
  return 0;
}

Fragment fragment_of(const Formula& f) {
  if (contains_common(f)) return Fragment::Lck;
  const int depth = knowledge_depth(f);
  if (depth == 0) return Fragment::L0;
  if (depth == 1) return Fragment::L1;
  return Fragment::L;
}

bool is_propositional(const Formula& f) { return knowledge_depth(f) == 0; }

bool has_negation(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return false;
    case FormulaKind::Not: return true;
    case FormulaKind::And: return has_negation(f.lhs()) || has_negation(f.rhs());
    case FormulaKind::Know:
    case FormulaKind::Common: return has_negation(f.body());
  }
  return false;
}

AgentSet knowledge_agents(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return {};
    case FormulaKind::Not: return knowledge_agents(f.body());
    case FormulaKind::And: return knowledge_agents(f.lhs()) | knowledge_agents(f.rhs());
    case FormulaKind::Know: return AgentSet::single(f.agent()) | knowledge_agents(f.body());
    case FormulaKind::Common: return f.group() | knowledge_agents(f.body());
  }
  return {};
}

AgentSet top_level_atom_owners(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return AgentSet::single(f.agent());
    case FormulaKind::Not: return top_level_atom_owners(f.body());
    case FormulaKind::And: return top_level_atom_owners(f.lhs()) | top_level_atom_owners(f.rhs());
    case FormulaKind::Know:
    case FormulaKind::Common: return {};
  }
  return {};
}

int max_index(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return std::max(f.agent(), f.secret());
    case FormulaKind::Not: return max_index(f.body());
    case FormulaKind::And: return std::max(max_index(f.lhs()), max_index(f.rhs()));
    case FormulaKind::Know: return std::max(f.agent(), max_index(f.body()));
    case FormulaKind::Common: {
      int top = max_index(f.body());
      for (Agent a : f.group().members()) top = std::max(top, a);
      return top;
    }
  }
  return -1;
}

bool holds_in(const Formula& f, const GossipSituation& s) {
  switch (f.kind()) {
    case FormulaKind::Atom: return s[f.agent()].contains(f.secret());
    case FormulaKind::Not: return !holds_in(f.body(), s);
    case FormulaKind::And: return holds_in(f.lhs(), s) && holds_in(f.rhs(), s);
    case FormulaKind::Know:
    case FormulaKind::Common: break;
  }
  throw GossipError("modal formula evaluated on a bare situation");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const AgentNames& names) : text_(text), names_(names) {}

  Formula parse() {
    Formula f = implication();
    skip_space();
    if (pos_ != text_.size()) fail("expected end of formula");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  Agent agent() {
    const std::size_t at = (skip_space(), pos_);
    const std::string name = identifier();
    auto a = names_.find_agent(name);
    if (!a) {
      pos_ = at;
      fail("unknown agent '" + name + "'");
    }
    return *a;
  }

  Agent secret() {
    const std::size_t at = (skip_space(), pos_);
    const std::string name = identifier();
    auto s = names_.find_secret(name);
    if (!s) {
      pos_ = at;
      fail("unknown secret '" + name + "'");
    }
    return *s;
  }

  Formula implication() {
    Formula f = disjunction();
    while (accept("=>")) f = Formula::implication(f, disjunction());
    return f;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept("|")) f = Formula::disjunction(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (accept("&")) f = Formula::conjunction(f, unary());
    return f;
  }

  Formula unary() {
    if (accept("!")) return Formula::negation(unary());
    return primary();
  }

  Formula primary() {
    if (accept("(")) {
      Formula f = implication();
      expect(")");
      return f;
    }
    skip_space();
    const std::size_t at = pos_;
    if (pos_ == text_.size()) fail("expected formula");
    const std::string keyword = identifier();
    if (keyword == "F") {
      expect("(");
      const Agent a = agent();
      expect(",");
      const Agent s = secret();
      expect(")");
      return Formula::atom(a, s);
    }
    if (keyword == "Exp") {
      expect("(");
      const Agent a = agent();
      expect(")");
      return Formula::expert(a, names_.size());
    }
    if (keyword == "K") {
      expect("(");
      const Agent a = agent();
      expect(",");
      Formula body = implication();
      expect(")");
      return Formula::know(a, std::move(body));
    }
    if (keyword == "C") {
      expect("(");
      expect("{");
      AgentSet group = AgentSet::single(agent());
      while (accept(",")) group.insert(agent());
      expect("}");
      expect(",");
      Formula body = implication();
      expect(")");
      return Formula::common(group, std::move(body));
    }
    pos_ = at;
    fail("expected F, Exp, K, C, '!' or '('");
  }

  std::string_view text_;
  const AgentNames& names_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Rendering

enum Precedence { kImplies = 1, kOr = 2, kAnd = 3, kNot = 4, kPrimary = 5 };

bool is_expert_chain(const Formula& f, int n, Agent& owner) {
  // ((F(a,0) & F(a,1)) & ...) & F(a,n-1)
  const Formula* cur = &f;
  for (Agent s = n - 1; s > 0; --s) {
    if (cur->kind() != FormulaKind::And) return false;
    const Formula& last = cur->rhs();
    if (last.kind() != FormulaKind::Atom || last.secret() != s) return false;
    if (s == n - 1) owner = last.agent();
    if (last.agent() != owner) return false;
    cur = &cur->lhs();
  }
  return n > 1 && cur->kind() == FormulaKind::Atom && cur->secret() == 0 && cur->agent() == owner;
}

class FormulaRenderer {
 public:
  explicit FormulaRenderer(const AgentNames& names) : names_(names) {}

  std::string render(const Formula& f, int context) const {
    int own = kPrimary;
    std::string out = body(f, own);
    return own < context ? "(" + out + ")" : out;
  }

 private:
  std::string body(const Formula& f, int& own) const {
    switch (f.kind()) {
      case FormulaKind::Atom:
        return "F(" + names_.agent(f.agent()) + "," + names_.secret(f.secret()) + ")";
      case FormulaKind::Not: {
        const Formula& inner = f.body();
        if (inner.kind() == FormulaKind::And) {
          const Formula& l = inner.lhs();
          const Formula& r = inner.rhs();
          if (l.kind() == FormulaKind::Not && r.kind() == FormulaKind::Not) {
            own = kOr;
            return render(l.body(), kOr) + " | " + render(r.body(), kAnd);
          }
          if (r.kind() == FormulaKind::Not) {
            own = kImplies;
            return render(l, kImplies) + " => " + render(r.body(), kOr);
          }
        }
        own = kNot;
        return "!" + render(inner, kNot);
      }
      case FormulaKind::And: {
        Agent owner = 0;
        if (is_expert_chain(f, names_.size(), owner)) return "Exp(" + names_.agent(owner) + ")";
        own = kAnd;
        return render(f.lhs(), kAnd) + " & " + render(f.rhs(), kNot);
      }
      case FormulaKind::Know:
        return "K(" + names_.agent(f.agent()) + ", " + render(f.body(), kImplies) + ")";
      case FormulaKind::Common: {
        std::string out = "C({";
        bool first = true;
        for (Agent a : f.group().members()) {
          if (!first) out += ",";
          out += names_.agent(a);
          first = false;
        }
        return out + "}, " + render(f.body(), kImplies) + ")";
      }
    }
    return {};
  }

  const AgentNames& names_;
};

}  // namespace

Formula parse_formula(std::string_view text, const AgentNames& names) { return FormulaParser(text, names).parse(); }

std::string render(const Formula& f, const AgentNames& names) { return FormulaRenderer(names).render(f, kImplies); }

}  // namespace gossip
