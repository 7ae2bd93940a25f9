#pragma once

// Incremental parsing under Minimal Attachment and Late Closure over
// binary-branching grammars, with an exhaustive chart oracle.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pmodel {

struct BinaryRule {
  std::string parent;
  std::string left;
  std::string right;
  bool operator==(const BinaryRule&) const = default;
};

struct LexicalRule {
  std::string category;
  std::string word;
  bool operator==(const LexicalRule&) const = default;
};

struct Grammar {
  std::vector<BinaryRule> rules;  // file order is the final tie-break
  std::vector<LexicalRule> lexical;
  std::string start;

  /// Categories of `word`, in rule order.
  std::vector<std::string> categories_of(std::string_view word) const;
};

class GrammarError : public std::runtime_error {
 public:
  GrammarError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Lines "A -> B C" and "A -> 'word'"; '#' starts a comment. The start
/// category is the parent of the first rule.
Grammar parse_grammar(std::string_view text);
Grammar load_grammar(const std::string& path);

struct ParseTree {
  std::string category;
  std::string word;                 // leaves only
  std::vector<ParseTree> children;  // empty or exactly two

  bool is_leaf() const { return children.empty(); }
  /// Internal (phrasal) nodes; leaves are forced by the input.
  std::size_t node_count() const;
  std::vector<std::string> leaves() const;
  bool operator==(const ParseTree&) const = default;
};

/// "(S (NP Jones) (VP (V saw) (NP everyone)))".
std::string to_bracketed(const ParseTree& t);
std::string to_dot(const ParseTree& t);

/// A partial tree whose open sites are right children still to be built.
/// Values are snapshots: step never modifies its input.
struct ParserState {
  struct Node {
    std::string category;
    std::string word;  // leaves only
    int left = -1;
    int right = -1;
    std::optional<std::string> pending;  // category expected as right child
    std::size_t stamp = 0;               // creation order
    bool is_leaf() const { return left < 0; }
  };
  std::vector<Node> nodes;
  int root = -1;  // -1 before the first word: the start category is pending
  std::size_t nodes_postulated = 0;
  std::size_t words = 0;
  std::size_t clock = 0;

  /// The phrase most recently postulated that still has an open site.
  std::optional<std::size_t> rightmost_open() const;
  bool complete(const Grammar& g) const;
  /// Only when complete.
  ParseTree tree() const;
};

class NoAttachment : public std::runtime_error {
 public:
  NoAttachment(std::string word, std::size_t position);
  const std::string& word() const { return word_; }
  std::size_t position() const { return position_; }

 private:
  std::string word_;
  std::size_t position_;
};

/// Attaches one word. Among all licensed attachments (fill the leftmost open
/// site through a left-corner chain, or adjoin Z -> Z R at a finished node on
/// the right edge and fill R) picks the one creating the fewest nodes; ties go
/// to the most recently postulated site, then to rule order.
ParserState step(const ParserState& st, std::string_view word, const Grammar& g);

struct IncrementalResult {
  std::optional<ParseTree> tree;
  std::vector<std::size_t> node_counts;  // cumulative, one per attached word
  std::optional<std::string> failure;
  std::optional<std::size_t> failure_position;  // words.size() when input ran out
  bool ok() const { return tree.has_value(); }
};

IncrementalResult parse_incremental(const std::vector<std::string>& words, const Grammar& g);

class BoundExceeded : public std::runtime_error {
 public:
  BoundExceeded(std::size_t words, std::size_t bound);
};

inline constexpr std::size_t kOracleBound = 10;

/// Every complete parse rooted at the start category, in a fixed order.
std::vector<ParseTree> enumerate_parses(const std::vector<std::string>& words, const Grammar& g,
                                        std::size_t bound = kOracleBound);

bool is_garden_path(const std::vector<std::string>& words, const Grammar& g, std::size_t bound = kOracleBound);

}  // namespace pmodel
