#include "pmodel/formula.hpp"

#include <cctype>
#include <numeric>

namespace pmodel {

namespace {

bool is_reserved(std::string_view name) {
  return name == "forall" || name == "exists" || name == "wh" || name == "in" || name == "v" ||
         name == "prob";
}

}  // namespace

bool is_identifier(std::string_view name) {
  if (is_reserved(name)) return false;
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  return true;
}

bool is_variable_name(std::string_view name) {
  return is_identifier(name) && std::islower(static_cast<unsigned char>(name.front()));
}

Term Term::constant(std::string name) {
  if (!is_identifier(name) || is_variable_name(name)) throw std::invalid_argument("bad term name '" + name + "'");
  return Term{TermKind::constant, std::move(name)};
}

Term Term::variable(std::string name) {
  if (!is_variable_name(name)) throw std::invalid_argument("bad term name '" + name + "'");
  return Term{TermKind::variable, std::move(name)};
}

Term Term::from_name(std::string name) {
  return is_variable_name(name) ? variable(std::move(name)) : constant(std::move(name));
}

Probability::Probability(std::int64_t numerator, std::int64_t denominator) {
  if (denominator <= 0) throw std::invalid_argument("probability denominator must be positive");
  if (numerator < 0 || numerator > denominator)
    throw std::invalid_argument("probability outside [0,1]");
  std::int64_t g = std::gcd(numerator, denominator);
  if (g == 0) g = 1;
  num_ = numerator / g;
  den_ = denominator / g;
}

std::string Probability::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

namespace {

std::int64_t parse_digits(std::string_view s) {
  if (s.empty() || s.size() > 17) throw std::invalid_argument("bad probability number");
  std::int64_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad probability number");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

Probability Probability::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return Probability(parse_digits(text.substr(0, slash)), parse_digits(text.substr(slash + 1)));
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty()) throw std::invalid_argument("bad probability number");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    std::int64_t num = parse_digits(whole.empty() ? std::string_view("0") : whole) * den +
                       parse_digits(frac);
    return Probability(num, den);
  }
  return Probability(parse_digits(text), 1);
}

const char* connective_glyph(Connective c) {
  switch (c) {
    case Connective::conj: return "&";
    case Connective::disj: return "v";
    case Connective::implies: return "->";
    case Connective::sheffer: return "|/";
    case Connective::pierce: return "!v";
  }
  return "?";
}

const char* connective_name(Connective c) {
  switch (c) {
    case Connective::conj: return "and";
    case Connective::disj: return "or";
    case Connective::implies: return "implies";
    case Connective::sheffer: return "sheffer";
    case Connective::pierce: return "pierce";
  }
  return "?";
}

const char* quantifier_keyword(Quantifier q) { return q == Quantifier::forall ? "forall" : "exists"; }

Formula Formula::membership(Term subject, std::string predicate, std::optional<Term> object) {
  if (!is_identifier(predicate)) throw std::invalid_argument("bad predicate '" + predicate + "'");
  return Formula(std::make_shared<const FormulaNode>(
      Membership{std::move(subject), std::move(predicate), std::move(object)}));
}

Formula Formula::proposition(std::string symbol) {
  if (!is_identifier(symbol)) throw std::invalid_argument("bad proposition '" + symbol + "'");
  return Formula(std::make_shared<const FormulaNode>(Proposition{std::move(symbol)}));
}

Formula Formula::negation(Formula operand) {
  return Formula(std::make_shared<const FormulaNode>(Negation{std::move(operand)}));
}

Formula Formula::binary(Connective op, Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const FormulaNode>(Binary{op, std::move(lhs), std::move(rhs)}));
}

Formula Formula::conj(Formula lhs, Formula rhs) { return binary(Connective::conj, std::move(lhs), std::move(rhs)); }
Formula Formula::disj(Formula lhs, Formula rhs) { return binary(Connective::disj, std::move(lhs), std::move(rhs)); }
Formula Formula::implies(Formula lhs, Formula rhs) { return binary(Connective::implies, std::move(lhs), std::move(rhs)); }
Formula Formula::sheffer(Formula lhs, Formula rhs) { return binary(Connective::sheffer, std::move(lhs), std::move(rhs)); }
Formula Formula::pierce(Formula lhs, Formula rhs) { return binary(Connective::pierce, std::move(lhs), std::move(rhs)); }

Formula Formula::quantified(Quantifier q, std::string var, Formula body) {
  if (!is_variable_name(var)) throw std::invalid_argument("bad bound variable '" + var + "'");
  return Formula(std::make_shared<const FormulaNode>(Quantified{q, std::move(var), std::move(body)}));
}

Formula Formula::forall(std::string var, Formula body) { return quantified(Quantifier::forall, std::move(var), std::move(body)); }
Formula Formula::exists(std::string var, Formula body) { return quantified(Quantifier::exists, std::move(var), std::move(body)); }

Formula Formula::wh(std::string var, Formula restrictor, Formula body) {
  if (!is_variable_name(var)) throw std::invalid_argument("bad bound variable '" + var + "'");
  return Formula(std::make_shared<const FormulaNode>(
      WhQuery{std::move(var), std::move(restrictor), std::move(body)}));
}

Formula Formula::prob(std::string event, Probability p) {
  if (!is_identifier(event)) throw std::invalid_argument("bad event '" + event + "'");
  return Formula(std::make_shared<const FormulaNode>(ProbAssertion{std::move(event), p}));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  if (auto x = a.as<Formula::Membership>()) {
    auto y = b.as<Formula::Membership>();
    return x->subject == y->subject && x->predicate == y->predicate && x->object == y->object;
  }
  if (auto x = a.as<Formula::Proposition>()) return x->symbol == b.as<Formula::Proposition>()->symbol;
  if (auto x = a.as<Formula::Negation>()) return x->operand == b.as<Formula::Negation>()->operand;
  if (auto x = a.as<Formula::Binary>()) {
    auto y = b.as<Formula::Binary>();
    return x->op == y->op && x->lhs == y->lhs && x->rhs == y->rhs;
  }
  if (auto x = a.as<Formula::Quantified>()) {
    auto y = b.as<Formula::Quantified>();
    return x->q == y->q && x->var == y->var && x->body == y->body;
  }
  if (auto x = a.as<Formula::WhQuery>()) {
    auto y = b.as<Formula::WhQuery>();
    return x->var == y->var && x->restrictor == y->restrictor && x->body == y->body;
  }
  auto x = a.as<Formula::ProbAssertion>();
  auto y = b.as<Formula::ProbAssertion>();
  return x->event == y->event && x->p == y->p;
}

std::string kind_name(const Formula& f) {
  if (f.as<Formula::Membership>()) return "membership";
  if (f.as<Formula::Proposition>()) return "proposition";
  if (f.as<Formula::Negation>()) return "not";
  if (auto b = f.as<Formula::Binary>()) return connective_name(b->op);
  if (auto q = f.as<Formula::Quantified>()) return quantifier_keyword(q->q);
  if (f.as<Formula::WhQuery>()) return "wh";
  return "prob";
}

bool is_atomic(const Formula& f) {
  return f.as<Formula::Membership>() || f.as<Formula::Proposition>() ||
         f.as<Formula::ProbAssertion>();
}

}  // namespace pmodel
