#include "pmodel/frep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace pmodel {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

const char* category_name(Category c) {
  switch (c) {
    case Category::N: return "N";
    case Category::V: return "V";
    case Category::Q: return "Q";
    case Category::WH: return "WH";
    case Category::DET: return "DET";
    case Category::P: return "P";
  }
  return "?";
}

std::optional<Category> category_from_name(std::string_view name) {
  for (Category c : {Category::N, Category::V, Category::Q, Category::WH, Category::DET, Category::P})
    if (name == category_name(c)) return c;
  return std::nullopt;
}

const char* mood_name(Mood m) { return m == Mood::declarative ? "declarative" : "interrogative"; }

std::optional<Mood> mood_from_name(std::string_view name) {
  if (name == "declarative") return Mood::declarative;
  if (name == "interrogative") return Mood::interrogative;
  return std::nullopt;
}

const char* binder_name(Binder b) {
  switch (b) {
    case Binder::forall: return "forall";
    case Binder::exists: return "exists";
    case Binder::wh: return "wh";
  }
  return "?";
}

const LexicalReferent* FRepresentation::by_symbol(std::string_view symbol) const {
  for (const auto& r : lexical)
    if (r.symbol == symbol) return &r;
  return nullptr;
}

const LexicalReferent* FRepresentation::by_word(std::string_view word) const {
  std::string w = lower(word);
  for (const auto& r : lexical)
    if (lower(r.word) == w) return &r;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Errors

const char* frep_diagnostic_name(FrepDiagnostic::Kind k) {
  switch (k) {
    case FrepDiagnostic::Kind::missing_lexical_referent: return "MissingLexicalReferent";
    case FrepDiagnostic::Kind::ill_formed_string: return "IllFormedString";
    case FrepDiagnostic::Kind::dangling_external_referent: return "DanglingExternalReferent";
    case FrepDiagnostic::Kind::duplicate_lexical_referent: return "DuplicateLexicalReferent";
    case FrepDiagnostic::Kind::invalid_lexical_referent: return "InvalidLexicalReferent";
    case FrepDiagnostic::Kind::invalid_scope_order: return "InvalidScopeOrder";
    case FrepDiagnostic::Kind::emphasis_without_referent: return "EmphasisWithoutReferent";
  }
  return "?";
}

std::string FrepDiagnostic::message() const {
  std::string out = std::string(frep_diagnostic_name(kind)) + "(" + subject + ")";
  if (!detail.empty()) out += ": " + detail;
  return out;
}

namespace {

std::string join_messages(const std::vector<FrepDiagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "; ";
    out += d.message();
  }
  return out;
}

}  // namespace

FrepError::FrepError(std::vector<FrepDiagnostic> diagnostics)
    : std::runtime_error(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

bool FrepError::has(FrepDiagnostic::Kind k) const {
  return std::any_of(diagnostics_.begin(), diagnostics_.end(),
                     [&](const FrepDiagnostic& d) { return d.kind == k; });
}

ScopeError::ScopeError(Kind kind, std::string name)
    : std::runtime_error("ScopeOrderUnknownVariable(" + name + ")"), kind_(kind), name_(std::move(name)) {}

CanonicalizeError::CanonicalizeError(Kind kind, std::string detail)
    : std::runtime_error("NotCanonicalizable: " + detail), kind_(kind) {}

// ---------------------------------------------------------------------------
// Quantifier words

const std::vector<QuantifierWord>& quantifier_words() {
  static const std::vector<QuantifierWord> table{
      {"everyone", Binder::forall, true}, {"everything", Binder::forall, false},
      {"someone", Binder::exists, true},  {"something", Binder::exists, false},
      {"who", Binder::wh, true},          {"what", Binder::wh, false},
  };
  return table;
}

const QuantifierWord* find_quantifier_word(std::string_view word) {
  std::string w = lower(word);
  for (const auto& q : quantifier_words())
    if (q.word == w) return &q;
  return nullptr;
}

bool is_person_sort_word(std::string_view word) {
  std::string w = lower(word);
  return w == "human" || w == "person";
}

bool is_thing_sort_word(std::string_view word) {
  std::string w = lower(word);
  return w == "thing" || w == "object";
}

std::optional<std::string> quantifier_word_for(const FRepresentation& f, const ChainLink& link) {
  if (const auto* r = f.by_symbol(link.var)) return r->word;
  bool animate = false;
  if (link.restrictor) {
    auto m = link.restrictor->as<Formula::Membership>();
    if (!m || m->object || !m->subject.is_variable() || m->subject.name != link.var) return std::nullopt;
    const auto* sort = f.by_symbol(m->predicate);
    if (!sort) return std::nullopt;
    if (is_person_sort_word(sort->word)) animate = true;
    else if (!is_thing_sort_word(sort->word)) return std::nullopt;
  }
  for (const auto& q : quantifier_words())
    if (q.binder == link.binder && q.animate == animate) return q.word;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Chains

namespace {

bool quantifier_free(const Formula& f) { return quantifier_depth(f) == 0; }

bool restricts(const Formula& r, const std::string& var) {
  return quantifier_free(r) && free_vars(r).count(var) > 0;
}

}  // namespace

QuantifierChain decompose_chain(const Formula& f) {
  QuantifierChain chain{{}, f};
  Formula cur = f;
  while (true) {
    if (auto q = cur.as<Formula::Quantified>()) {
      auto b = q->body.as<Formula::Binary>();
      Connective restricted_op = q->q == Quantifier::forall ? Connective::implies : Connective::conj;
      Binder binder = q->q == Quantifier::forall ? Binder::forall : Binder::exists;
      if (b && b->op == restricted_op && restricts(b->lhs, q->var)) {
        chain.links.push_back({binder, q->var, b->lhs});
        cur = b->rhs;
      } else {
        chain.links.push_back({binder, q->var, std::nullopt});
        cur = q->body;
      }
    } else if (auto w = cur.as<Formula::WhQuery>()) {
      chain.links.push_back({Binder::wh, w->var, w->restrictor});
      cur = w->body;
    } else {
      break;
    }
  }
  chain.matrix = cur;
  return chain;
}

Formula assemble_chain(const std::vector<ChainLink>& links, const Formula& matrix) {
  Formula out = matrix;
  for (auto it = links.rbegin(); it != links.rend(); ++it) {
    const ChainLink& l = *it;
    switch (l.binder) {
      case Binder::forall:
        out = Formula::forall(l.var, l.restrictor ? Formula::implies(*l.restrictor, out) : out);
        break;
      case Binder::exists:
        out = Formula::exists(l.var, l.restrictor ? Formula::conj(*l.restrictor, out) : out);
        break;
      case Binder::wh:
        out = Formula::wh(l.var, l.restrictor ? *l.restrictor : Formula::proposition("T"), out);
        break;
    }
  }
  return out;
}

namespace {

std::set<std::string> bound_vars(const Formula& f) {
  std::set<std::string> out;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    if (auto q = g.as<Formula::Quantified>()) {
      out.insert(q->var);
      self(self, q->body);
    } else if (auto w = g.as<Formula::WhQuery>()) {
      out.insert(w->var);
      self(self, w->restrictor);
      self(self, w->body);
    } else if (auto n = g.as<Formula::Negation>()) {
      self(self, n->operand);
    } else if (auto b = g.as<Formula::Binary>()) {
      self(self, b->lhs);
      self(self, b->rhs);
    }
  };
  rec(rec, f);
  return out;
}

}  // namespace

std::vector<Formula> resolve_scope(const FRepresentation& f) {
  QuantifierChain chain = decompose_chain(f.string);
  std::vector<std::string> order;
  if (f.declarants.scope_order) {
    std::set<std::string> bound = bound_vars(f.string);
    for (const auto& v : *f.declarants.scope_order)
      if (!bound.count(v)) throw ScopeError(ScopeError::Kind::unknown_variable, v);
    order = *f.declarants.scope_order;
  }

  const std::size_t n = chain.links.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  auto admissible = [&](const std::vector<std::size_t>& p) {
    std::set<std::string> outer;
    for (std::size_t i : p) {
      const ChainLink& l = chain.links[i];
      if (l.restrictor) {
        std::set<std::string> chain_vars;
        for (const auto& other : chain.links) chain_vars.insert(other.var);
        for (const auto& v : free_vars(*l.restrictor))
          if (v != l.var && chain_vars.count(v) && !outer.count(v)) return false;
      }
      outer.insert(l.var);
    }
    // Variables named in scope_order keep their declared relative order.
    std::size_t next = 0;
    for (std::size_t i : p) {
      auto it = std::find(order.begin(), order.end(), chain.links[i].var);
      if (it == order.end()) continue;
      auto at = static_cast<std::size_t>(it - order.begin());
      if (at < next) return false;
      next = at;
    }
    return true;
  };

  std::vector<std::vector<std::size_t>> accepted;
  std::vector<std::size_t> p = perm;
  do {
    if (admissible(p)) accepted.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  auto var_seq = [&](const std::vector<std::size_t>& q) {
    std::vector<std::string> out;
    for (std::size_t i : q) out.push_back(chain.links[i].var);
    return out;
  };
  std::stable_sort(accepted.begin(), accepted.end(), [&](const auto& a, const auto& b) {
    bool ai = a == perm, bi = b == perm;
    if (ai != bi) return ai;
    return var_seq(a) < var_seq(b);
  });

  std::vector<Formula> readings;
  for (const auto& q : accepted) {
    std::vector<ChainLink> links;
    for (std::size_t i : q) links.push_back(chain.links[i]);
    readings.push_back(assemble_chain(links, chain.matrix));
  }
  return readings;
}

// ---------------------------------------------------------------------------
// Canonical (prenex) form

namespace {

struct Prenex {
  std::vector<std::pair<Quantifier, std::string>> prefix;
  Formula matrix;
};

Quantifier flip(Quantifier q) { return q == Quantifier::forall ? Quantifier::exists : Quantifier::forall; }

void flip_all(Prenex& p) {
  for (auto& [q, v] : p.prefix) q = flip(q);
}

Prenex prenex(const Formula& f) {
  if (auto q = f.as<Formula::Quantified>()) {
    Prenex inner = prenex(q->body);
    for (const auto& [k, v] : inner.prefix)
      if (v == q->var) throw CanonicalizeError(CanonicalizeError::Kind::not_canonicalizable,
                                               "variable '" + v + "' is bound twice");
    inner.prefix.insert(inner.prefix.begin(), {q->q, q->var});
    return inner;
  }
  if (f.as<Formula::WhQuery>())
    throw CanonicalizeError(CanonicalizeError::Kind::not_canonicalizable,
                            "a wh operator cannot move out of its clause");
  if (auto n = f.as<Formula::Negation>()) {
    Prenex inner = prenex(n->operand);
    flip_all(inner);
    inner.matrix = Formula::negation(inner.matrix);
    return inner;
  }
  if (auto b = f.as<Formula::Binary>()) {
    Prenex l = prenex(b->lhs);
    Prenex r = prenex(b->rhs);
    auto check = [](const Prenex& side, const Formula& other) {
      std::set<std::string> vars = all_vars(other);
      for (const auto& [k, v] : side.prefix)
        if (vars.count(v))
          throw CanonicalizeError(CanonicalizeError::Kind::not_canonicalizable,
                                  "moving '" + v + "' would capture or shadow");
    };
    check(l, b->rhs);
    check(r, b->lhs);
    switch (b->op) {
      case Connective::conj:
      case Connective::disj:
        break;
      case Connective::implies:
        flip_all(l);
        break;
      case Connective::sheffer:
      case Connective::pierce:
        flip_all(l);
        flip_all(r);
        break;
    }
    Prenex out{l.prefix, Formula::binary(b->op, l.matrix, r.matrix)};
    out.prefix.insert(out.prefix.end(), r.prefix.begin(), r.prefix.end());
    return out;
  }
  return {{}, f};
}

}  // namespace

Formula canonicalize(const Formula& f) {
  if (auto w = f.as<Formula::WhQuery>())
    return Formula::wh(w->var, canonicalize(w->restrictor), canonicalize(w->body));
  Prenex p = prenex(f);
  Formula out = p.matrix;
  for (auto it = p.prefix.rbegin(); it != p.prefix.rend(); ++it)
    out = Formula::quantified(it->first, it->second, out);
  return out;
}

Formula parse_formal_string(std::string_view text) {
  std::vector<std::pair<Quantifier, std::string>> trailing;
  std::string_view rest = text;
  auto trim_right = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  while (true) {
    rest = trim_right(rest);
    std::size_t end = rest.size();
    std::size_t start = end;
    while (start > 0 && std::isalnum(static_cast<unsigned char>(rest[start - 1]))) --start;
    std::string_view var = rest.substr(start, end - start);
    if (var.empty() || !is_variable_name(var)) break;
    std::string_view head = trim_right(rest.substr(0, start));
    if (head.size() == start) break;  // no space between keyword and variable
    std::optional<Quantifier> q;
    for (Quantifier k : {Quantifier::forall, Quantifier::exists}) {
      std::string_view kw = quantifier_keyword(k);
      if (head.size() >= kw.size() && head.substr(head.size() - kw.size()) == kw &&
          (head.size() == kw.size() ||
           !std::isalnum(static_cast<unsigned char>(head[head.size() - kw.size() - 1]))))
        q = k;
    }
    if (!q) break;
    trailing.insert(trailing.begin(), {*q, std::string(var)});
    rest = head.substr(0, head.size() - std::string_view(quantifier_keyword(*q)).size());
  }
  if (trailing.empty()) return parse_formula(text);
  Formula out = parse_formula(rest);
  for (auto it = trailing.rbegin(); it != trailing.rend(); ++it)
    out = Formula::quantified(it->first, it->second, out);
  return out;
}

// ---------------------------------------------------------------------------
// Construction and validation

std::vector<FrepDiagnostic> validate_frep(const FRepresentation& f) {
  using K = FrepDiagnostic::Kind;
  std::vector<FrepDiagnostic> out;
  auto add = [&](K kind, std::string subject, std::string detail = {}) {
    FrepDiagnostic d{kind, std::move(subject), std::move(detail)};
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(std::move(d));
  };

  std::set<std::string> symbols_seen, words_seen;
  for (const auto& r : f.lexical) {
    if (!is_identifier(r.symbol)) add(K::invalid_lexical_referent, r.symbol, "symbol is not an identifier");
    bool bad_word = r.word.empty() || std::any_of(r.word.begin(), r.word.end(), [](char c) {
                      return std::isspace(static_cast<unsigned char>(c));
                    });
    if (bad_word) add(K::invalid_lexical_referent, r.symbol, "word must be one nonempty token");
    if (!symbols_seen.insert(r.symbol).second) add(K::duplicate_lexical_referent, r.symbol);
    if (!words_seen.insert(lower(r.word)).second) add(K::duplicate_lexical_referent, r.word);
  }

  for (const auto& [word, id] : f.external)
    if (!f.by_word(word)) add(K::dangling_external_referent, word);

  WellFormedness wf = well_formed(f.string, f.declarants);
  for (const auto& d : wf.diagnostics) add(K::ill_formed_string, d.subject, d.message());

  for (const auto& s : symbols(f.string))
    if (!f.by_symbol(s)) add(K::missing_lexical_referent, s);

  if (f.declarants.scope_order) {
    std::set<std::string> bound = bound_vars(f.string);
    std::set<std::string> seen;
    for (const auto& v : *f.declarants.scope_order) {
      if (!seen.insert(v).second) add(K::invalid_scope_order, v, "listed twice");
      if (!bound.count(v)) add(K::invalid_scope_order, v, "not quantified in the string");
    }
  }

  if (f.force.emphasis) {
    const std::string& e = *f.force.emphasis;
    bool found = f.by_symbol(e) || f.by_word(e);
    if (!found)
      for (const auto& link : decompose_chain(f.string).links) {
        auto w = quantifier_word_for(f, link);
        if (w && lower(*w) == lower(e)) found = true;
      }
    if (!found) add(K::emphasis_without_referent, e);
  }
  return out;
}

FRepresentation build_frep(ExternalReferents external, std::vector<LexicalReferent> lexical,
                           FormalDeclarants declarants, Formula string, Force force) {
  FRepresentation f{std::move(external), std::move(lexical), std::move(declarants), std::move(string),
                    std::move(force)};
  auto diags = validate_frep(f);
  if (!diags.empty()) throw FrepError(std::move(diags));
  return f;
}

BindingConstraints binding_referents(const FRepresentation& f) {
  BindingConstraints out;
  for (const auto& [word, id] : f.external) out.emplace(word, id);
  return out;
}

// ---------------------------------------------------------------------------
// JSON

FRepresentation frep_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("F-representation must be a JSON object");
  if (j.value("frep_version", 0) != 1) throw std::invalid_argument("unsupported frep_version (expected 1)");

  ExternalReferents external;
  if (j.contains("external"))
    for (const auto& [word, id] : j.at("external").items()) external[word] = id.get<EntityId>();

  std::vector<LexicalReferent> lexical;
  for (const auto& r : j.at("lexical")) {
    auto cat = category_from_name(r.at("category").get<std::string>());
    if (!cat) throw std::invalid_argument("unknown category '" + r.at("category").get<std::string>() + "'");
    lexical.push_back({r.at("symbol").get<std::string>(), r.at("word").get<std::string>(), *cat});
  }

  FormalDeclarants d;
  const auto& jd = j.at("declarants");
  auto calc = calculus_from_name(jd.value("calculus", "predicate"));
  if (!calc) throw std::invalid_argument("unknown calculus '" + jd.value("calculus", "") + "'");
  d.calculus = *calc;
  if (jd.contains("parameters"))
    for (const auto& p : jd.at("parameters"))
      d.parameters.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  if (jd.contains("scope_order") && !jd.at("scope_order").is_null())
    d.scope_order = jd.at("scope_order").get<std::vector<std::string>>();
  if (jd.contains("locality"))
    for (const auto& [var, loc] : jd.at("locality").items()) {
      std::string l = loc.get<std::string>();
      if (l != "local" && l != "global") throw std::invalid_argument("locality must be local or global");
      d.locality[var] = l == "local" ? Locality::local : Locality::global;
    }

  Formula string = parse_formal_string(j.at("string").get<std::string>());

  Force force;
  if (j.contains("force")) {
    const auto& jf = j.at("force");
    auto mood = mood_from_name(jf.value("mood", "declarative"));
    if (!mood) throw std::invalid_argument("unknown mood '" + jf.value("mood", "") + "'");
    force.mood = *mood;
    if (jf.contains("emphasis") && !jf.at("emphasis").is_null())
      force.emphasis = jf.at("emphasis").get<std::string>();
  }
  return build_frep(std::move(external), std::move(lexical), std::move(d), std::move(string),
                    std::move(force));
}

nlohmann::json frep_to_json(const FRepresentation& f) {
  nlohmann::json j;
  j["frep_version"] = 1;
  j["external"] = nlohmann::json::object();
  for (const auto& [word, id] : f.external) j["external"][word] = id;
  j["lexical"] = nlohmann::json::array();
  for (const auto& r : f.lexical)
    j["lexical"].push_back({{"symbol", r.symbol}, {"word", r.word}, {"category", category_name(r.category)}});
  nlohmann::json d;
  d["calculus"] = calculus_name(f.declarants.calculus);
  d["parameters"] = nlohmann::json::array();
  for (const auto& [v, s] : f.declarants.parameters) d["parameters"].push_back(nlohmann::json::array({v, s}));
  d["scope_order"] = f.declarants.scope_order ? nlohmann::json(*f.declarants.scope_order) : nlohmann::json();
  d["locality"] = nlohmann::json::object();
  for (const auto& [v, l] : f.declarants.locality) d["locality"][v] = l == Locality::local ? "local" : "global";
  j["declarants"] = d;
  j["string"] = render_formula(f.string);
  j["force"] = {{"mood", mood_name(f.force.mood)},
                {"emphasis", f.force.emphasis ? nlohmann::json(*f.force.emphasis) : nlohmann::json()}};
  return j;
}

FRepresentation load_frep(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return frep_from_json(j);
}

}  // namespace pmodel
