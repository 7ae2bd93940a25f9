#pragma once

// End-to-end derivations. The P-model starts from an F-representation and
// produces D-structure then S-structure; the T-model starts from a
// D-structure and produces S-structure then LF.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmodel/formal_lang.hpp"
#include "pmodel/frep.hpp"
#include "pmodel/movement.hpp"
#include "pmodel/syntax_rep.hpp"

namespace pmodel {

enum class DerivationModel { T, P };

const char* derivation_model_name(DerivationModel m);

struct DerivationStep {
  SString sstring;
  /// Movements that produced this step from the previous one. For the first
  /// P-model step these are the raisings and lowerings that built the DS.
  std::vector<MovementRecord> records;
};

struct Derivation {
  DerivationModel model = DerivationModel::P;
  std::vector<DerivationStep> steps;
  std::vector<std::string> warnings;
};

/// Throws std::logic_error unless the step levels are [DS, SS] for P and
/// [DS, SS, LF] for T.
void check_derivation(const Derivation& d);

class PipelineError : public std::runtime_error {
 public:
  enum class Kind { unlexicalizable_node, unrecoverable_lf };
  PipelineError(Kind kind, std::string subject, const std::string& detail);
  Kind kind() const { return kind_; }
  /// The formula node kind or the LF token at fault.
  const std::string& subject() const { return subject_; }

 private:
  Kind kind_;
  std::string subject_;
};

const char* pipeline_error_name(PipelineError::Kind k);

/// Lexicalizes one reading and lowers it to D-structure. The matrix must be a
/// single membership: "J S x" becomes subject-verb-object, "J in L" with a
/// verb becomes "Jones left", with a noun "Jones is human". Each bound
/// variable must occur once in the matrix.
SString generate_ds(const FRepresentation& f, const Formula& reading);

/// The emphasis of `f` as a surface word, if any.
std::optional<std::string> emphasis_word(const FRepresentation& f);

Derivation derive_p(const FRepresentation& f);

/// Quantifiers are raised in the scope order recorded by the DS y-traces,
/// the first y-trace marking the widest scope; without y-traces the surface
/// order decides.
Derivation derive_t(const SString& ds, const Force& force);

/// Reads an LF back into a formula through the lexical referents of `f`.
Formula recover_formula(const FRepresentation& f, const SString& lf);

struct CompareReport {
  bool formal_only = false;  // the reading has no lexicalization
  std::optional<std::string> failure;
  std::string reading;    // canonical form of the reading derive_p used
  std::string recovered;  // canonical form recovered from the T-model LF
  bool lf_agrees = false;
  bool records_identical = false;
  std::vector<std::size_t> matching_readings;  // indices into resolve_scope(f)
  std::size_t reading_count = 0;
  Derivation p;
  Derivation t;
};

CompareReport compare(const FRepresentation& f);

nlohmann::json derivation_to_json(const Derivation& d);
std::string derivation_to_text(const Derivation& d);
std::string derivation_to_dot(const Derivation& d);
nlohmann::json compare_to_json(const CompareReport& r);

}  // namespace pmodel
