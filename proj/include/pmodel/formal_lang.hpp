#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmodel/formula.hpp"

namespace pmodel {

// ---------------------------------------------------------------------------
// Errors

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, std::string found);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
  std::string found_;
};

class EvalError : public std::runtime_error {
 public:
  enum class Kind { uninterpreted_symbol, unbound_variable };
  EvalError(Kind kind, std::string name);
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  Kind kind_;
  std::string name_;
};

class RewriteError : public std::runtime_error {
 public:
  enum class Kind { unsupported_node };
  RewriteError(Kind kind, std::string node);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Concrete syntax

/// Parses the prefix-quantifier concrete syntax:
///
///   forall x. F    exists x. F    wh x. R, B
///   (F & G)  (F v G)  (F -> G)  (F |/ G)  (F !v G)  !F
///   x in H     J S x     p     prob(snow) = 4/5
Formula parse_formula(std::string_view text);

/// Canonical text; parse_formula(render_formula(f)) == f.
std::string render_formula(const Formula& f);

nlohmann::json formula_to_json(const Formula& f);
Formula formula_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Finite models

using Entity = std::string;
using Assignment = std::map<std::string, Entity>;

struct Model {
  std::set<Entity> domain;
  std::map<std::string, std::set<Entity>> predicates;
  std::map<std::string, std::set<std::pair<Entity, Entity>>> relations;
  std::map<std::string, Entity> constants;
  std::map<std::string, Probability> events;
  std::map<std::string, bool> propositions;

  /// Throws std::invalid_argument if an interpretation mentions an entity
  /// outside the domain.
  void validate() const;
};

Model model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const Model& m);

/// Tarskian truth over a finite model. WhQuery is true iff the question has
/// at least one answer in the model.
bool evaluate(const Formula& f, const Model& m, const Assignment& a = {});

// ---------------------------------------------------------------------------
// Syntactic utilities

std::set<std::string> free_vars(const Formula& f);

/// Every variable name occurring in f, bound or free.
std::set<std::string> all_vars(const Formula& f);

/// Predicate, relation, constant, proposition and event symbols of f.
std::set<std::string> symbols(const Formula& f);

/// Quantifier nesting depth.
std::size_t quantifier_depth(const Formula& f);

/// Structural equality up to consistent renaming of bound variables.
bool alpha_equivalent(const Formula& a, const Formula& b);

/// Rewrites {and, or, not, implies} into the Sheffer stroke alone.
/// Quantifier structure is kept as is. Throws RewriteError on Pierce input.
Formula to_sheffer(const Formula& f);

// ---------------------------------------------------------------------------
// Declarants and well-formedness

enum class Calculus { predicate, probability };
enum class Locality { local, global };

/// Declarations heading a formal string: which calculus, which typed
/// parameters ("x in H"), and how scope ambiguity is resolved.
struct FormalDeclarants {
  Calculus calculus = Calculus::predicate;
  std::vector<std::pair<std::string, std::string>> parameters;  // (variable, sort)
  std::optional<std::vector<std::string>> scope_order;          // outermost first
  std::map<std::string, Locality> locality;

  std::optional<std::string> sort_of(std::string_view variable) const;
};

const char* calculus_name(Calculus c);
std::optional<Calculus> calculus_from_name(std::string_view name);

struct WellFormedDiagnostic {
  enum class Kind { shadowing, undeclared_free_variable, undeclared_symbol, calculus_mismatch };
  Kind kind;
  std::string subject;
  std::string message() const;
  bool operator==(const WellFormedDiagnostic&) const = default;
};

struct WellFormedness {
  bool ok = true;
  std::vector<WellFormedDiagnostic> diagnostics;
  explicit operator bool() const { return ok; }
};

/// Checks shadowing, declaration of free variables and calculus membership.
/// When `lexical_symbols` is given, every non-logical symbol must also be
/// declared as a sort or appear among them.
WellFormedness well_formed(const Formula& f, const FormalDeclarants& d,
                           const std::set<std::string>* lexical_symbols = nullptr);

}  // namespace pmodel
