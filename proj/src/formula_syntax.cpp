#include <cctype>
#include <sstream>

#include "pmodel/formal_lang.hpp"

namespace pmodel {

namespace {

std::string describe_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, std::string found)
    : std::runtime_error("syntax error at byte " + std::to_string(offset) + ": expected " +
                         describe_expected(expected) + ", found " + found),
      offset_(offset),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

enum class Tok {
  ident, number, kw_forall, kw_exists, kw_wh, kw_in, kw_prob,
  dot, comma, lparen, rparen, bang, amp, vee, arrow, stroke, dagger, eq, end
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::string tok_name(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::number: return "number";
    case Tok::kw_forall: return "'forall'";
    case Tok::kw_exists: return "'exists'";
    case Tok::kw_wh: return "'wh'";
    case Tok::kw_in: return "'in'";
    case Tok::kw_prob: return "'prob'";
    case Tok::dot: return "'.'";
    case Tok::comma: return "','";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::bang: return "'!'";
    case Tok::amp: return "'&'";
    case Tok::vee: return "'v'";
    case Tok::arrow: return "'->'";
    case Tok::stroke: return "'|/'";
    case Tok::dagger: return "'!v'";
    case Tok::eq: return "'='";
    case Tok::end: return "end of input";
  }
  return "?";
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    auto push = [&](Tok t, std::size_t len) {
      out.push_back({t, std::string(text.substr(start, len)), start});
      i = start + len;
    };
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      Tok t = Tok::ident;
      if (word == "forall") t = Tok::kw_forall;
      else if (word == "exists") t = Tok::kw_exists;
      else if (word == "wh") t = Tok::kw_wh;
      else if (word == "in") t = Tok::kw_in;
      else if (word == "prob") t = Tok::kw_prob;
      else if (word == "v") t = Tok::vee;
      push(t, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j + 1 < text.size() && (text[j] == '/' || text[j] == '.') &&
          std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      push(Tok::number, j - i);
      continue;
    }
    switch (c) {
      case '.': push(Tok::dot, 1); continue;
      case ',': push(Tok::comma, 1); continue;
      case '(': push(Tok::lparen, 1); continue;
      case ')': push(Tok::rparen, 1); continue;
      case '&': push(Tok::amp, 1); continue;
      case '=': push(Tok::eq, 1); continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          push(Tok::arrow, 2);
          continue;
        }
        break;
      case '|':
        if (i + 1 < text.size() && text[i + 1] == '/') {
          push(Tok::stroke, 2);
          continue;
        }
        break;
      case '!':
        // "!v" is the Pierce arrow only when the v is not the start of a name.
        if (i + 1 < text.size() && text[i + 1] == 'v' &&
            (i + 2 >= text.size() || !ident_char(text[i + 2]))) {
          push(Tok::dagger, 2);
          continue;
        }
        push(Tok::bang, 1);
        continue;
      default:
        break;
    }
    throw SyntaxError(i, {"formula"}, "'" + std::string(1, c) + "'");
  }
  out.push_back({Tok::end, "", text.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Formula parse_all() {
    Formula f = unary();
    expect(Tok::end);
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    throw SyntaxError(t.offset, std::move(expected),
                      t.kind == Tok::end ? "end of input" : "'" + t.text + "'");
  }

  const Token& expect(Tok t) {
    if (peek().kind != t) fail({tok_name(t)});
    return next();
  }

  std::string bound_variable() {
    const Token& t = peek();
    if (t.kind != Tok::ident || !is_variable_name(t.text)) fail({"variable"});
    return next().text;
  }

  Formula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kw_forall:
      case Tok::kw_exists: {
        Quantifier q = t.kind == Tok::kw_forall ? Quantifier::forall : Quantifier::exists;
        next();
        std::string var = bound_variable();
        expect(Tok::dot);
        return Formula::quantified(q, std::move(var), unary());
      }
      case Tok::kw_wh: {
        next();
        std::string var = bound_variable();
        expect(Tok::dot);
        Formula restrictor = unary();
        expect(Tok::comma);
        return Formula::wh(std::move(var), std::move(restrictor), unary());
      }
      case Tok::bang:
        next();
        return Formula::negation(unary());
      case Tok::lparen: {
        next();
        Formula lhs = unary();
        std::optional<Connective> op;
        switch (peek().kind) {
          case Tok::amp: op = Connective::conj; break;
          case Tok::vee: op = Connective::disj; break;
          case Tok::arrow: op = Connective::implies; break;
          case Tok::stroke: op = Connective::sheffer; break;
          case Tok::dagger: op = Connective::pierce; break;
          case Tok::rparen: next(); return lhs;
          default: fail({"'&'", "'v'", "'->'", "'|/'", "'!v'", "')'"});
        }
        next();
        Formula rhs = unary();
        expect(Tok::rparen);
        return Formula::binary(*op, std::move(lhs), std::move(rhs));
      }
      case Tok::kw_prob: {
        next();
        expect(Tok::lparen);
        std::string event = expect(Tok::ident).text;
        expect(Tok::rparen);
        expect(Tok::eq);
        const Token& num = peek();
        if (num.kind != Tok::number) fail({"number"});
        try {
          Probability p = Probability::parse(num.text);
          next();
          return Formula::prob(std::move(event), p);
        } catch (const std::invalid_argument&) {
          fail({"probability in [0,1]"});
        }
      }
      case Tok::ident:
        return atom();
      default:
        fail({"'forall'", "'exists'", "'wh'", "'!'", "'('", "'prob'", "identifier"});
    }
  }

  Formula atom() {
    std::string first = next().text;
    if (peek().kind == Tok::kw_in) {
      next();
      std::string pred = expect(Tok::ident).text;
      return Formula::membership(Term::from_name(std::move(first)), std::move(pred));
    }
    if (peek().kind == Tok::ident) {
      std::string rel = next().text;
      std::string obj = expect(Tok::ident).text;
      return Formula::membership(Term::from_name(std::move(first)), std::move(rel),
                                 Term::from_name(std::move(obj)));
    }
    return Formula::proposition(std::move(first));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void render_to(std::ostream& os, const Formula& f) {
  if (auto m = f.as<Formula::Membership>()) {
    if (m->object)
      os << m->subject.name << ' ' << m->predicate << ' ' << m->object->name;
    else
      os << m->subject.name << " in " << m->predicate;
  } else if (auto p = f.as<Formula::Proposition>()) {
    os << p->symbol;
  } else if (auto n = f.as<Formula::Negation>()) {
    os << '!';
    if (n->operand.as<Formula::Binary>()) {
      render_to(os, n->operand);
    } else {
      os << '(';
      render_to(os, n->operand);
      os << ')';
    }
  } else if (auto b = f.as<Formula::Binary>()) {
    os << '(';
    render_to(os, b->lhs);
    os << ' ' << connective_glyph(b->op) << ' ';
    render_to(os, b->rhs);
    os << ')';
  } else if (auto q = f.as<Formula::Quantified>()) {
    os << quantifier_keyword(q->q) << ' ' << q->var << ". ";
    render_to(os, q->body);
  } else if (auto w = f.as<Formula::WhQuery>()) {
    os << "wh " << w->var << ". ";
    render_to(os, w->restrictor);
    os << ", ";
    render_to(os, w->body);
  } else if (auto pa = f.as<Formula::ProbAssertion>()) {
    os << "prob(" << pa->event << ") = " << pa->p.str();
  }
}

nlohmann::json term_to_json(const Term& t) {
  return {{"kind", t.is_variable() ? "variable" : "constant"}, {"name", t.name}};
}

Term term_from_json(const nlohmann::json& j) {
  std::string name = j.at("name").get<std::string>();
  return j.at("kind").get<std::string>() == "variable" ? Term::variable(std::move(name))
                                                       : Term::constant(std::move(name));
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse_all(); }

std::string render_formula(const Formula& f) {
  std::ostringstream os;
  render_to(os, f);
  return os.str();
}

nlohmann::json formula_to_json(const Formula& f) {
  using nlohmann::json;
  if (auto m = f.as<Formula::Membership>()) {
    json j{{"kind", "membership"}, {"subject", term_to_json(m->subject)}, {"predicate", m->predicate}};
    if (m->object) j["object"] = term_to_json(*m->object);
    return j;
  }
  if (auto p = f.as<Formula::Proposition>()) return {{"kind", "proposition"}, {"symbol", p->symbol}};
  if (auto n = f.as<Formula::Negation>()) return {{"kind", "not"}, {"operand", formula_to_json(n->operand)}};
  if (auto b = f.as<Formula::Binary>())
    return {{"kind", connective_name(b->op)},
            {"lhs", formula_to_json(b->lhs)},
            {"rhs", formula_to_json(b->rhs)}};
  if (auto q = f.as<Formula::Quantified>())
    return {{"kind", quantifier_keyword(q->q)}, {"var", q->var}, {"body", formula_to_json(q->body)}};
  if (auto w = f.as<Formula::WhQuery>())
    return {{"kind", "wh"},
            {"var", w->var},
            {"restrictor", formula_to_json(w->restrictor)},
            {"body", formula_to_json(w->body)}};
  auto pa = f.as<Formula::ProbAssertion>();
  return {{"kind", "prob"}, {"event", pa->event}, {"p", pa->p.str()}};
}

Formula formula_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "membership") {
    std::optional<Term> object;
    if (j.contains("object")) object = term_from_json(j.at("object"));
    return Formula::membership(term_from_json(j.at("subject")), j.at("predicate").get<std::string>(),
                               std::move(object));
  }
  if (kind == "proposition") return Formula::proposition(j.at("symbol").get<std::string>());
  if (kind == "not") return Formula::negation(formula_from_json(j.at("operand")));
  for (Connective c : {Connective::conj, Connective::disj, Connective::implies, Connective::sheffer,
                       Connective::pierce})
    if (kind == connective_name(c))
      return Formula::binary(c, formula_from_json(j.at("lhs")), formula_from_json(j.at("rhs")));
  if (kind == "forall" || kind == "exists")
    return Formula::quantified(kind == "forall" ? Quantifier::forall : Quantifier::exists,
                               j.at("var").get<std::string>(), formula_from_json(j.at("body")));
  if (kind == "wh")
    return Formula::wh(j.at("var").get<std::string>(), formula_from_json(j.at("restrictor")),
                       formula_from_json(j.at("body")));
  if (kind == "prob")
    return Formula::prob(j.at("event").get<std::string>(),
                         Probability::parse(j.at("p").get<std::string>()));
  throw std::invalid_argument("unknown formula kind '" + kind + "'");
}

}  // namespace pmodel
