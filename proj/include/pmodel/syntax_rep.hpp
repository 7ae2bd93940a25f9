#pragma once

// Leveled syntactic strings: words, indexed phrases, traces and bracket
// labels, with coindexation between each indexed item and its trace.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace pmodel {

enum class Level { DS, SS, LF };
enum class TraceKind { t, x, y };
enum class BracketLabel { none, CP, IP };
enum class Punctuation { none, question };

const char* level_name(Level l);
std::optional<Level> level_from_name(std::string_view name);
char trace_glyph(TraceKind k);
const char* bracket_label_name(BracketLabel b);

struct Item {
  enum class Kind { word, indexed, trace, open, close };
  Kind kind = Kind::word;
  std::string text;  // word and indexed items
  int index = -1;    // indexed items and traces
  TraceKind trace = TraceKind::t;
  BracketLabel label = BracketLabel::none;

  static Item word(std::string text);
  static Item indexed(std::string text, int index);
  static Item make_trace(TraceKind kind, int index);
  static Item open(BracketLabel label = BracketLabel::none);
  static Item close();

  bool is_word_like() const { return kind == Kind::word || kind == Kind::indexed; }
  bool operator==(const Item&) const = default;
};

struct SString {
  Level level = Level::SS;
  std::vector<Item> items;
  Punctuation punctuation = Punctuation::none;

  /// index -> (position of the indexed item, position of its trace).
  std::map<int, std::pair<std::size_t, std::size_t>> coindex() const;

  /// Throws InvalidSString when brackets do not balance or coindexation is
  /// not a perfect matching.
  void validate() const;

  bool operator==(const SString&) const = default;
};

class InvalidSString : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "[CP Who_1 did [IP Jones see t_1]] ?" and "[ Everyone_1 [ Jones saw x_1 ] ]".
/// A close bracket whose opener is labeled attaches to the preceding token;
/// one closing an unlabeled opener stands alone.
std::string render(const SString& s);

/// Inverse of render. Also accepts superscript indices ("y^1") and a question
/// mark glued to the last word.
SString parse_sstring(std::string_view text, Level level);

/// The audible words: traces and brackets are silent.
std::string strip(const SString& s);

/// Equal after some bijective renaming of indices.
bool equivalent_mod_indices(const SString& a, const SString& b);

/// Smallest index not used in s.
int fresh_index(const SString& s);

/// Word and indexed texts in order, without traces or brackets.
std::vector<std::string> words_of(const SString& s);

/// The same string with every bracket item removed.
SString without_brackets(const SString& s);

/// Position of the bracket matching the one at `pos`.
std::size_t matching_bracket(const SString& s, std::size_t pos);

nlohmann::json sstring_to_json(const SString& s);
SString sstring_from_json(const nlohmann::json& j);

/// Flat chain of items with dashed coindexation arcs.
std::string sstring_to_dot(const SString& s, std::string_view name = "sstring");

}  // namespace pmodel
