#pragma once

// Quantifier raising and lowering, Wh raising and lowering, and the
// force-driven realization of a D-structure as an S-structure.

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmodel/frep.hpp"
#include "pmodel/syntax_rep.hpp"

namespace pmodel {

struct MovementConfig {
  std::set<std::string> quantifier_words;  // lowercase
  std::set<std::string> wh_words;          // lowercase
  std::set<std::string> auxiliaries{"did", "does", "do", "will", "can"};
  bool quantifier_last = false;  // land raised quantifiers at the end instead
  bool wh_fronting = true;       // false leaves Wh in situ at S-structure
};

/// Word sets taken from the quantifier-word table.
MovementConfig default_movement_config();

struct MovementRecord {
  std::string operation;
  int index = 0;
  std::size_t source = 0;  // position in the input string
  std::size_t target = 0;  // position in the output string
  bool operator==(const MovementRecord&) const = default;
};

nlohmann::json record_to_json(const MovementRecord& r);

struct Moved {
  SString result;
  std::vector<MovementRecord> records;
};

class MovementError : public std::runtime_error {
 public:
  enum class Kind {
    not_a_quantifier,
    level_mismatch,
    no_wh_item,
    multiple_wh_items,
    no_fronted_quantifier,
    broken_coindexation,
    emphasis_target_missing,
    binding_violation,
  };
  MovementError(Kind kind, std::string subject);
  Kind kind() const { return kind_; }
  const std::string& subject() const { return subject_; }

 private:
  Kind kind_;
  std::string subject_;
};

const char* movement_error_name(MovementError::Kind k);

/// Fronts the quantifier at `qpos` with a fresh index, leaving an x-trace, and
/// adjoins it as "[ Q_i [ ... ] ]". Accepts S-structure, or logical form when
/// stacking a further quantifier. A quantifier already fronted by
/// topicalization keeps its index and has its t-trace retyped.
Moved quantifier_raise(const SString& s, std::size_t qpos,
                       const MovementConfig& cfg = default_movement_config());

/// Same item order; the Wh item's t-trace becomes an x-trace.
Moved wh_raise(const SString& s, const MovementConfig& cfg = default_movement_config());

/// Moves the leftmost fronted quantifier back into its x-trace and marks the
/// vacated front with a y-trace. Accepts logical form, or a partially
/// lowered D-structure.
Moved quantifier_lower(const SString& s, const MovementConfig& cfg = default_movement_config());

/// Drops CP/IP brackets and moves the Wh item back into its x-trace, leaving a
/// y-trace at the front.
Moved wh_lower(const SString& s, const MovementConfig& cfg = default_movement_config());

/// D-structure to S-structure. Interrogative force fronts the Wh item into
/// [CP Wh_i AUX [IP ... t_i]]; an emphasis target is topicalized with a
/// t-trace; every other y-trace is vacuous and erased. `force.emphasis` is a
/// surface word here. Every word in `bc` must occur exactly once in the result.
Moved apply_emphasis(const SString& s, const Force& force, const BindingConstraints& bc,
                     const MovementConfig& cfg = default_movement_config());

/// Lowercased word texts, sorted; traces and brackets excluded.
std::vector<std::string> word_multiset(const SString& s);

bool is_quantifier_word(const std::string& word, const MovementConfig& cfg);
bool is_wh_word(const std::string& word, const MovementConfig& cfg);

}  // namespace pmodel
