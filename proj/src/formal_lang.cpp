#include "pmodel/formal_lang.hpp"

#include <algorithm>
#include <unordered_map>

namespace pmodel {

EvalError::EvalError(Kind kind, std::string name)
    : std::runtime_error(std::string(kind == Kind::uninterpreted_symbol ? "uninterpreted symbol"
                                                                        : "unbound variable") +
                         " '" + name + "'"),
      kind_(kind),
      name_(std::move(name)) {}

RewriteError::RewriteError(Kind kind, std::string node)
    : std::runtime_error("unsupported node in rewrite: " + node), kind_(kind) {}

// ---------------------------------------------------------------------------
// Models

void Model::validate() const {
  auto check = [&](const Entity& e, const std::string& where) {
    if (!domain.count(e))
      throw std::invalid_argument("entity '" + e + "' in " + where + " is not in the domain");
  };
  for (const auto& [name, ext] : predicates)
    for (const auto& e : ext) check(e, "predicate " + name);
  for (const auto& [name, ext] : relations)
    for (const auto& [a, b] : ext) {
      check(a, "relation " + name);
      check(b, "relation " + name);
    }
  for (const auto& [name, e] : constants) check(e, "constant " + name);
}

Model model_from_json(const nlohmann::json& j) {
  Model m;
  for (const auto& e : j.at("domain")) m.domain.insert(e.get<std::string>());
  if (j.contains("predicates"))
    for (const auto& [name, ext] : j.at("predicates").items())
      for (const auto& e : ext) m.predicates[name].insert(e.get<std::string>());
  if (j.contains("relations"))
    for (const auto& [name, ext] : j.at("relations").items()) {
      auto& rel = m.relations[name];
      for (const auto& pair : ext) rel.emplace(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    }
  if (j.contains("constants"))
    for (const auto& [name, e] : j.at("constants").items()) m.constants[name] = e.get<std::string>();
  if (j.contains("events"))
    for (const auto& [name, p] : j.at("events").items())
      m.events.emplace(name, Probability::parse(p.get<std::string>()));
  if (j.contains("propositions"))
    for (const auto& [name, v] : j.at("propositions").items()) m.propositions[name] = v.get<bool>();
  m.validate();
  return m;
}

nlohmann::json model_to_json(const Model& m) {
  nlohmann::json j;
  j["domain"] = m.domain;
  j["predicates"] = nlohmann::json::object();
  for (const auto& [name, ext] : m.predicates) j["predicates"][name] = ext;
  j["relations"] = nlohmann::json::object();
  for (const auto& [name, ext] : m.relations) {
    auto& arr = j["relations"][name] = nlohmann::json::array();
    for (const auto& [a, b] : ext) arr.push_back(nlohmann::json::array({a, b}));
  }
  j["constants"] = m.constants;
  j["events"] = nlohmann::json::object();
  for (const auto& [name, p] : m.events) j["events"][name] = p.str();
  j["propositions"] = m.propositions;
  return j;
}

namespace {

const Entity& denote(const Term& t, const Model& m, const Assignment& a) {
  if (t.is_variable()) {
    auto it = a.find(t.name);
    if (it == a.end()) throw EvalError(EvalError::Kind::unbound_variable, t.name);
    return it->second;
  }
  auto it = m.constants.find(t.name);
  if (it == m.constants.end()) throw EvalError(EvalError::Kind::uninterpreted_symbol, t.name);
  return it->second;
}

bool eval(const Formula& f, const Model& m, Assignment& a) {
  if (auto mem = f.as<Formula::Membership>()) {
    const Entity& s = denote(mem->subject, m, a);
    if (mem->object) {
      auto rel = m.relations.find(mem->predicate);
      if (rel == m.relations.end())
        throw EvalError(EvalError::Kind::uninterpreted_symbol, mem->predicate);
      return rel->second.count({s, denote(*mem->object, m, a)}) > 0;
    }
    auto pred = m.predicates.find(mem->predicate);
    if (pred == m.predicates.end())
      throw EvalError(EvalError::Kind::uninterpreted_symbol, mem->predicate);
    return pred->second.count(s) > 0;
  }
  if (auto p = f.as<Formula::Proposition>()) {
    auto it = m.propositions.find(p->symbol);
    if (it == m.propositions.end()) throw EvalError(EvalError::Kind::uninterpreted_symbol, p->symbol);
    return it->second;
  }
  if (auto n = f.as<Formula::Negation>()) return !eval(n->operand, m, a);
  if (auto b = f.as<Formula::Binary>()) {
    bool l = eval(b->lhs, m, a);
    bool r = eval(b->rhs, m, a);
    switch (b->op) {
      case Connective::conj: return l && r;
      case Connective::disj: return l || r;
      case Connective::implies: return !l || r;
      case Connective::sheffer: return !(l && r);
      case Connective::pierce: return !(l || r);
    }
  }
  // Quantifiers rebind the variable for the duration of the body and
  // restore whatever binding (if any) was there before.
  auto with_binding = [&](const std::string& var, auto&& body) {
    auto saved = a.find(var) == a.end() ? std::nullopt : std::optional<Entity>(a[var]);
    bool result = body();
    if (saved) a[var] = *saved;
    else a.erase(var);
    return result;
  };
  if (auto q = f.as<Formula::Quantified>()) {
    return with_binding(q->var, [&] {
      for (const Entity& e : m.domain) {
        a[q->var] = e;
        bool v = eval(q->body, m, a);
        if (q->q == Quantifier::forall && !v) return false;
        if (q->q == Quantifier::exists && v) return true;
      }
      return q->q == Quantifier::forall;
    });
  }
  if (auto w = f.as<Formula::WhQuery>()) {
    return with_binding(w->var, [&] {
      for (const Entity& e : m.domain) {
        a[w->var] = e;
        if (eval(w->restrictor, m, a) && eval(w->body, m, a)) return true;
      }
      return false;
    });
  }
  auto pa = f.as<Formula::ProbAssertion>();
  auto it = m.events.find(pa->event);
  if (it == m.events.end()) throw EvalError(EvalError::Kind::uninterpreted_symbol, pa->event);
  return it->second == pa->p;
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  auto term = [&](const Term& t) {
    if (t.is_variable() && !bound.count(t.name)) out.insert(t.name);
  };
  if (auto m = f.as<Formula::Membership>()) {
    term(m->subject);
    if (m->object) term(*m->object);
  } else if (auto n = f.as<Formula::Negation>()) {
    collect_free(n->operand, bound, out);
  } else if (auto b = f.as<Formula::Binary>()) {
    collect_free(b->lhs, bound, out);
    collect_free(b->rhs, bound, out);
  } else if (auto q = f.as<Formula::Quantified>()) {
    bool fresh = bound.insert(q->var).second;
    collect_free(q->body, bound, out);
    if (fresh) bound.erase(q->var);
  } else if (auto w = f.as<Formula::WhQuery>()) {
    bool fresh = bound.insert(w->var).second;
    collect_free(w->restrictor, bound, out);
    collect_free(w->body, bound, out);
    if (fresh) bound.erase(w->var);
  }
}

template <class Fn>
void for_each_child(const Formula& f, Fn&& fn) {
  if (auto n = f.as<Formula::Negation>()) {
    fn(n->operand);
  } else if (auto b = f.as<Formula::Binary>()) {
    fn(b->lhs);
    fn(b->rhs);
  } else if (auto q = f.as<Formula::Quantified>()) {
    fn(q->body);
  } else if (auto w = f.as<Formula::WhQuery>()) {
    fn(w->restrictor);
    fn(w->body);
  }
}

struct AlphaCtx {
  std::vector<std::pair<std::string, std::string>> binders;

  bool same_term(const Term& x, const Term& y) const {
    if (x.kind != y.kind) return false;
    if (!x.is_variable()) return x.name == y.name;
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      bool lx = it->first == x.name;
      bool ry = it->second == y.name;
      if (lx || ry) return lx && ry;
    }
    return x.name == y.name;
  }

  bool eq(const Formula& a, const Formula& b) {
    if (a.node().index() != b.node().index()) return false;
    if (auto x = a.as<Formula::Membership>()) {
      auto y = b.as<Formula::Membership>();
      if (x->predicate != y->predicate || !same_term(x->subject, y->subject)) return false;
      if (x->object.has_value() != y->object.has_value()) return false;
      return !x->object || same_term(*x->object, *y->object);
    }
    if (auto x = a.as<Formula::Quantified>()) {
      auto y = b.as<Formula::Quantified>();
      if (x->q != y->q) return false;
      binders.emplace_back(x->var, y->var);
      bool r = eq(x->body, y->body);
      binders.pop_back();
      return r;
    }
    if (auto x = a.as<Formula::WhQuery>()) {
      auto y = b.as<Formula::WhQuery>();
      binders.emplace_back(x->var, y->var);
      bool r = eq(x->restrictor, y->restrictor) && eq(x->body, y->body);
      binders.pop_back();
      return r;
    }
    if (auto x = a.as<Formula::Negation>()) return eq(x->operand, b.as<Formula::Negation>()->operand);
    if (auto x = a.as<Formula::Binary>()) {
      auto y = b.as<Formula::Binary>();
      return x->op == y->op && eq(x->lhs, y->lhs) && eq(x->rhs, y->rhs);
    }
    return a == b;
  }
};

}  // namespace

bool evaluate(const Formula& f, const Model& m, const Assignment& a) {
  Assignment scratch = a;
  return eval(f, m, scratch);
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    if (auto m = g.as<Formula::Membership>()) {
      if (m->subject.is_variable()) out.insert(m->subject.name);
      if (m->object && m->object->is_variable()) out.insert(m->object->name);
    } else if (auto q = g.as<Formula::Quantified>()) {
      out.insert(q->var);
    } else if (auto w = g.as<Formula::WhQuery>()) {
      out.insert(w->var);
    }
    for_each_child(g, [&](const Formula& c) { self(self, c); });
  };
  rec(rec, f);
  return out;
}

std::set<std::string> symbols(const Formula& f) {
  std::set<std::string> out;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    if (auto m = g.as<Formula::Membership>()) {
      out.insert(m->predicate);
      if (!m->subject.is_variable()) out.insert(m->subject.name);
      if (m->object && !m->object->is_variable()) out.insert(m->object->name);
    } else if (auto p = g.as<Formula::Proposition>()) {
      out.insert(p->symbol);
    } else if (auto pa = g.as<Formula::ProbAssertion>()) {
      out.insert(pa->event);
    }
    for_each_child(g, [&](const Formula& c) { self(self, c); });
  };
  rec(rec, f);
  return out;
}

std::size_t quantifier_depth(const Formula& f) {
  std::size_t deepest = 0;
  for_each_child(f, [&](const Formula& c) { deepest = std::max(deepest, quantifier_depth(c)); });
  if (f.as<Formula::Quantified>() || f.as<Formula::WhQuery>()) ++deepest;
  return deepest;
}

bool alpha_equivalent(const Formula& a, const Formula& b) { return AlphaCtx{}.eq(a, b); }

namespace {

// Rewrites of shared subtrees already seen on this thread, keyed by node identity.
// Formulas are immutable and the key is held, so an address cannot be reused
// while its entry lives. Bounded; cleared wholesale when full.
class ShefferCache {
 public:
  const Formula* find(const Formula& f) const {
    auto it = map_.find(f.id());
    return it == map_.end() ? nullptr : &it->second.second;
  }
  void put(const Formula& f, const Formula& rewritten) {
    if (map_.size() >= kLimit) map_.clear();
    map_.emplace(f.id(), std::make_pair(f, rewritten));
  }

 private:
  static constexpr std::size_t kLimit = 1 << 16;
  std::unordered_map<const void*, std::pair<Formula, Formula>> map_;
};

Formula sheffer_rewrite(const Formula& f, ShefferCache& cache) {
  if (is_atomic(f)) return f;
  if (const Formula* hit = cache.find(f)) return *hit;
  auto rewrite = [&]() -> Formula {
    if (auto n = f.as<Formula::Negation>()) {
      Formula p = sheffer_rewrite(n->operand, cache);
      return Formula::sheffer(p, p);
    }
    if (auto b = f.as<Formula::Binary>()) {
      if (b->op == Connective::pierce) throw RewriteError(RewriteError::Kind::unsupported_node, "pierce");
      Formula p = sheffer_rewrite(b->lhs, cache);
      Formula q = sheffer_rewrite(b->rhs, cache);
      switch (b->op) {
        case Connective::conj: {
          Formula s = Formula::sheffer(p, q);
          return Formula::sheffer(s, s);
        }
        case Connective::disj:
          return Formula::sheffer(Formula::sheffer(p, p), Formula::sheffer(q, q));
        case Connective::implies:
          return Formula::sheffer(p, Formula::sheffer(q, q));
        case Connective::sheffer:
          return Formula::sheffer(p, q);
        case Connective::pierce:
          break;
      }
    }
    if (auto q = f.as<Formula::Quantified>())
      return Formula::quantified(q->q, q->var, sheffer_rewrite(q->body, cache));
    auto w = f.as<Formula::WhQuery>();
    return Formula::wh(w->var, sheffer_rewrite(w->restrictor, cache), sheffer_rewrite(w->body, cache));
  };
  Formula out = rewrite();
  // A node nobody else holds cannot be met again through another formula.
  if (f.shared()) cache.put(f, out);
  return out;
}

}  // namespace

Formula to_sheffer(const Formula& f) {
  thread_local ShefferCache cache;
  return sheffer_rewrite(f, cache);
}

// ---------------------------------------------------------------------------
// Declarants

std::optional<std::string> FormalDeclarants::sort_of(std::string_view variable) const {
  for (const auto& [var, sort] : parameters)
    if (var == variable) return sort;
  return std::nullopt;
}

const char* calculus_name(Calculus c) { return c == Calculus::predicate ? "predicate" : "probability"; }

std::optional<Calculus> calculus_from_name(std::string_view name) {
  if (name == "predicate") return Calculus::predicate;
  if (name == "probability") return Calculus::probability;
  return std::nullopt;
}

std::string WellFormedDiagnostic::message() const {
  switch (kind) {
    case Kind::shadowing: return "variable '" + subject + "' is bound twice on one path";
    case Kind::undeclared_free_variable: return "free variable '" + subject + "' is not declared";
    case Kind::undeclared_symbol: return "symbol '" + subject + "' has no declaration or referent";
    case Kind::calculus_mismatch: return "'" + subject + "' is not part of the declared calculus";
  }
  return subject;
}

WellFormedness well_formed(const Formula& f, const FormalDeclarants& d,
                           const std::set<std::string>* lexical_symbols) {
  WellFormedness out;
  auto add = [&](WellFormedDiagnostic::Kind kind, const std::string& subject) {
    WellFormedDiagnostic diag{kind, subject};
    if (std::find(out.diagnostics.begin(), out.diagnostics.end(), diag) == out.diagnostics.end())
      out.diagnostics.push_back(std::move(diag));
    out.ok = false;
  };

  std::vector<std::string> path;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    const std::string* binder = nullptr;
    if (auto q = g.as<Formula::Quantified>()) binder = &q->var;
    if (auto w = g.as<Formula::WhQuery>()) binder = &w->var;
    if (binder) {
      if (std::find(path.begin(), path.end(), *binder) != path.end())
        add(WellFormedDiagnostic::Kind::shadowing, *binder);
      path.push_back(*binder);
    }
    if (auto pa = g.as<Formula::ProbAssertion>(); pa && d.calculus != Calculus::probability)
      add(WellFormedDiagnostic::Kind::calculus_mismatch, "prob(" + pa->event + ")");
    for_each_child(g, [&](const Formula& c) { self(self, c); });
    if (binder) path.pop_back();
  };
  rec(rec, f);

  for (const auto& v : free_vars(f))
    if (!d.sort_of(v)) add(WellFormedDiagnostic::Kind::undeclared_free_variable, v);

  if (lexical_symbols) {
    std::set<std::string> sorts;
    for (const auto& [var, sort] : d.parameters) sorts.insert(sort);
    for (const auto& s : symbols(f))
      if (!sorts.count(s) && !lexical_symbols->count(s))
        add(WellFormedDiagnostic::Kind::undeclared_symbol, s);
  }
  return out;
}

}  // namespace pmodel
