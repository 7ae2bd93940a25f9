#pragma once

// Lexicon with full entries (category, features, frequency, symbol) and
// cohort-style recognition of partially heard words: access by prefix, select
// by edit distance, integrate with the expected categories.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pmodel {

/// Marks an unheard grapheme in recognizer input.
inline constexpr char kUnheard = '#';

struct LexEntry {
  std::string form;
  std::string category;
  std::set<std::string> features;
  std::uint64_t frequency = 0;
  std::optional<std::string> symbol;
  bool operator==(const LexEntry&) const = default;
};

class LexiconError : public std::runtime_error {
 public:
  LexiconError(std::size_t line, const std::string& what);
  /// 1-based line in the source file, 0 when not read from a file.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Immutable once built. (form, category) pairs are unique.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<LexEntry> entries);

  const std::vector<LexEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<LexEntry> entries_;
};

/// `form<TAB>category<TAB>feature,feature<TAB>frequency[<TAB>symbol]`.
/// Blank lines and lines starting with '#' are skipped.
Lexicon parse_lexicon(std::string_view text);
Lexicon load_lexicon(const std::string& path);

struct Cohort {
  std::string prefix;
  std::vector<LexEntry> members;  // descending frequency, then form
};

struct Candidate {
  LexEntry entry;
  std::size_t distance = 0;
  bool operator==(const Candidate&) const = default;
};

/// Unit-cost insert/delete/substitute distance. '#' is an ordinary grapheme
/// here, so it always costs one edit against a real one.
std::size_t edit_distance(std::string_view a, std::string_view b);

Cohort access(const Lexicon& lex, std::string_view prefix);

/// Ranked by distance, then descending frequency, then form.
std::vector<Candidate> select(const Cohort& c, std::string_view observed);

/// Keeps candidates whose category is expected, in order.
std::vector<Candidate> integrate(const std::vector<Candidate>& ranked, const std::set<std::string>& expected);

/// The text before the first unheard grapheme.
std::string_view heard_prefix(std::string_view token);

struct RecognizeOptions {
  /// Candidates further than ceil(len(form) * max_fraction) are rejected.
  double max_fraction = 0.5;
};

struct SlotResult {
  std::string token;
  std::optional<Candidate> best;
  std::vector<Candidate> ranked;  // after integration and the threshold
};

struct Recognition {
  std::vector<SlotResult> slots;
  bool complete() const;
  std::vector<std::size_t> failed_slots() const;
};

class NoCandidate : public std::runtime_error {
 public:
  explicit NoCandidate(std::vector<std::size_t> slots);
  const std::vector<std::size_t>& slots() const { return slots_; }

 private:
  std::vector<std::size_t> slots_;
};

/// Per token: access on the heard prefix, select on the whole token,
/// integrate with that slot's expected categories (none means any), then
/// drop candidates over the distance threshold. Failed slots have no best
/// candidate; nothing is guessed.
Recognition recognize(const Lexicon& lex, const std::vector<std::string>& tokens,
                      const std::vector<std::optional<std::set<std::string>>>& expected = {},
                      const RecognizeOptions& opts = {});

/// The best entry per slot. Throws NoCandidate listing every failed slot.
std::vector<LexEntry> recognized_entries(const Recognition& r);

}  // namespace pmodel
