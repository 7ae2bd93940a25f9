#pragma once

// The five-quality F-representation: external referents, lexical referents,
// formal declarants, formal string and force.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmodel/formal_lang.hpp"

namespace pmodel {

enum class Category { N, V, Q, WH, DET, P };

const char* category_name(Category c);
std::optional<Category> category_from_name(std::string_view name);

struct LexicalReferent {
  std::string symbol;
  std::string word;
  Category category = Category::N;
  bool operator==(const LexicalReferent&) const = default;
};

using EntityId = std::int64_t;
using ExternalReferents = std::map<std::string, EntityId>;  // word -> entity

enum class Mood { declarative, interrogative };

const char* mood_name(Mood m);
std::optional<Mood> mood_from_name(std::string_view name);

struct Force {
  Mood mood = Mood::declarative;
  /// Symbol (or surface word) of the constituent to topicalize.
  std::optional<std::string> emphasis;
  bool operator==(const Force&) const = default;
};

/// Words that movement may reorder but never delete or duplicate.
using BindingConstraints = std::set<std::pair<std::string, EntityId>>;

struct FRepresentation {
  ExternalReferents external;
  std::vector<LexicalReferent> lexical;
  FormalDeclarants declarants;
  Formula string;
  Force force;

  const LexicalReferent* by_symbol(std::string_view symbol) const;
  /// Case-insensitive lookup by surface word.
  const LexicalReferent* by_word(std::string_view word) const;
};

struct FrepDiagnostic {
  enum class Kind {
    missing_lexical_referent,
    ill_formed_string,
    dangling_external_referent,
    duplicate_lexical_referent,
    invalid_lexical_referent,
    invalid_scope_order,
    emphasis_without_referent,
  };
  Kind kind;
  std::string subject;
  std::string detail;

  std::string message() const;
  bool operator==(const FrepDiagnostic&) const = default;
};

const char* frep_diagnostic_name(FrepDiagnostic::Kind k);

/// Carries every problem found, never just the first.
class FrepError : public std::runtime_error {
 public:
  explicit FrepError(std::vector<FrepDiagnostic> diagnostics);
  const std::vector<FrepDiagnostic>& diagnostics() const { return diagnostics_; }
  bool has(FrepDiagnostic::Kind k) const;

 private:
  std::vector<FrepDiagnostic> diagnostics_;
};

class ScopeError : public std::runtime_error {
 public:
  enum class Kind { unknown_variable };
  ScopeError(Kind kind, std::string name);
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  Kind kind_;
  std::string name_;
};

class CanonicalizeError : public std::runtime_error {
 public:
  enum class Kind { not_canonicalizable };
  CanonicalizeError(Kind kind, std::string detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Validates all invariants; throws FrepError listing every violation.
FRepresentation build_frep(ExternalReferents external, std::vector<LexicalReferent> lexical,
                           FormalDeclarants declarants, Formula string, Force force);

/// Every invariant violation of an already assembled value; empty when valid.
std::vector<FrepDiagnostic> validate_frep(const FRepresentation& f);

BindingConstraints binding_referents(const FRepresentation& f);

// ---------------------------------------------------------------------------
// Quantifier chains and scope

enum class Binder { forall, exists, wh };

const char* binder_name(Binder b);

/// One restricted quantifier: forall v. (R -> ...), exists v. (R & ...),
/// wh v. R, ... or an unrestricted forall/exists.
struct ChainLink {
  Binder binder;
  std::string var;
  std::optional<Formula> restrictor;
  bool operator==(const ChainLink&) const = default;
};

/// The quantifiers heading a formula, outermost first, and what they scope over.
struct QuantifierChain {
  std::vector<ChainLink> links;
  Formula matrix;
};

QuantifierChain decompose_chain(const Formula& f);
Formula assemble_chain(const std::vector<ChainLink>& links, const Formula& matrix);

/// One formula per admissible ordering of the heading quantifiers. The
/// written order comes first, the rest follow lexicographically by variable
/// sequence. A complete scope_order yields exactly one reading; a partial
/// one constrains the relative order of the variables it names.
std::vector<Formula> resolve_scope(const FRepresentation& f);

/// Moves every quantifier to the front, outermost first, assuming nonempty
/// domains. Wh operators are kept where they are and may not sit under a
/// connective. Throws CanonicalizeError when a move would capture or shadow.
Formula canonicalize(const Formula& f);

/// Reads a formal string whose quantifiers may trail the matrix, as in
/// "(x in H -> J S x) forall x". Trailing quantifiers are outermost first,
/// so the result is already in the conventional leading form.
Formula parse_formal_string(std::string_view text);

// ---------------------------------------------------------------------------
// Quantifier words

struct QuantifierWord {
  std::string word;
  Binder binder;
  bool animate;  // restricted to persons rather than unrestricted
};

/// everyone, everything, someone, something, who, what.
const std::vector<QuantifierWord>& quantifier_words();
const QuantifierWord* find_quantifier_word(std::string_view word);

/// Sort predicates whose lexical word marks a person ("human", "person").
bool is_person_sort_word(std::string_view word);
/// Sort predicates standing for anything at all ("thing", "object").
bool is_thing_sort_word(std::string_view word);

/// Surface word for a chain link, or nullopt if no rule covers it. A lexical
/// referent whose symbol is the bound variable wins over the default table.
std::optional<std::string> quantifier_word_for(const FRepresentation& f, const ChainLink& link);

// ---------------------------------------------------------------------------
// File format

FRepresentation frep_from_json(const nlohmann::json& j);
nlohmann::json frep_to_json(const FRepresentation& f);
FRepresentation load_frep(const std::string& path);

}  // namespace pmodel
