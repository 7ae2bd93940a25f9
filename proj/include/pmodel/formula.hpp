#pragma once

// Predicate-calculus formulas with the probability extension.
//
// A Formula is an immutable handle onto a shared node; copying is cheap and
// subtrees are shared freely between formulas.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace pmodel {

enum class TermKind { constant, variable };

/// A constant ("J") or a variable ("x").
///
/// The concrete syntax distinguishes the two by the first character:
/// lowercase-initial names are variables, everything else is a constant.
struct Term {
  TermKind kind = TermKind::constant;
  std::string name;

  static Term constant(std::string name);
  static Term variable(std::string name);
  static Term from_name(std::string name);

  bool is_variable() const { return kind == TermKind::variable; }
  bool operator==(const Term&) const = default;
};

/// True for names drawn from the identifier alphabet: a letter followed by
/// letters or digits.
bool is_identifier(std::string_view name);
bool is_variable_name(std::string_view name);

/// Exact rational in [0,1], always stored in lowest terms.
class Probability {
 public:
  Probability(std::int64_t numerator, std::int64_t denominator);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  std::string str() const;

  /// Accepts "N/D" or a decimal such as "0.8".
  static Probability parse(std::string_view text);

  bool operator==(const Probability&) const = default;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

enum class Connective { conj, disj, implies, sheffer, pierce };
enum class Quantifier { forall, exists };

const char* connective_glyph(Connective c);
const char* connective_name(Connective c);
const char* quantifier_keyword(Quantifier q);

struct FormulaNode;

class Formula {
 public:
  /// "x in H" (unary) or "J S x" (binary, object present).
  struct Membership {
    Term subject;
    std::string predicate;
    std::optional<Term> object;
  };
  /// Propositional atom "p".
  struct Proposition {
    std::string symbol;
  };
  struct Negation;
  struct Binary;
  struct Quantified;
  struct WhQuery;
  struct ProbAssertion {
    std::string event;
    Probability p;
  };

  static Formula membership(Term subject, std::string predicate,
                            std::optional<Term> object = std::nullopt);
  static Formula proposition(std::string symbol);
  static Formula negation(Formula operand);
  static Formula binary(Connective op, Formula lhs, Formula rhs);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula sheffer(Formula lhs, Formula rhs);
  static Formula pierce(Formula lhs, Formula rhs);
  static Formula quantified(Quantifier q, std::string var, Formula body);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula wh(std::string var, Formula restrictor, Formula body);
  static Formula prob(std::string event, Probability p);

  const FormulaNode& node() const { return *node_; }

  template <class T>
  const T* as() const;

  /// Identity of the shared node, for memoization.
  const void* id() const { return node_.get(); }
  /// True when some other formula or handle also holds this node.
  bool shared() const { return node_.use_count() > 1; }

  /// Structural equality.
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const FormulaNode> node_;
};

struct Formula::Negation {
  Formula operand;
};
struct Formula::Binary {
  Connective op;
  Formula lhs;
  Formula rhs;
};
struct Formula::Quantified {
  Quantifier q;
  std::string var;
  Formula body;
};
struct Formula::WhQuery {
  std::string var;
  Formula restrictor;
  Formula body;
};

struct FormulaNode
    : std::variant<Formula::Membership, Formula::Proposition, Formula::Negation,
                   Formula::Binary, Formula::Quantified, Formula::WhQuery,
                   Formula::ProbAssertion> {
  using variant::variant;
};

template <class T>
const T* Formula::as() const {
  return std::get_if<T>(static_cast<const FormulaNode::variant*>(node_.get()));
}

/// Short tag naming the node kind ("membership", "forall", "sheffer", ...).
std::string kind_name(const Formula& f);

bool is_atomic(const Formula& f);

}  // namespace pmodel
