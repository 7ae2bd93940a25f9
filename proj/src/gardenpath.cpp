#include "pmodel/gardenpath.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace pmodel {

std::vector<std::string> Grammar::categories_of(std::string_view word) const {
  std::vector<std::string> out;
  for (const auto& r : lexical)
    if (r.word == word && std::find(out.begin(), out.end(), r.category) == out.end()) out.push_back(r.category);
  return out;
}

GrammarError::GrammarError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

Grammar parse_grammar(std::string_view text) {
  Grammar g;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 3 || tok[1] != "->") throw GrammarError(lineno, "expected 'A -> B C' or \"A -> 'word'\"");
    const std::string& rhs = tok[2];
    if (tok.size() == 3 && rhs.size() >= 3 && rhs.front() == '\'' && rhs.back() == '\'') {
      g.lexical.push_back({tok[0], rhs.substr(1, rhs.size() - 2)});
    } else if (tok.size() == 4 && rhs.front() != '\'' && tok[3].front() != '\'') {
      g.rules.push_back({tok[0], tok[2], tok[3]});
    } else {
      throw GrammarError(lineno, "rules must be binary or lexical");
    }
    if (g.start.empty()) g.start = tok[0];
  }
  return g;
}

Grammar load_grammar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError(0, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_grammar(ss.str());
}

std::size_t ParseTree::node_count() const {
  if (is_leaf()) return 0;
  return 1 + children[0].node_count() + children[1].node_count();
}

std::vector<std::string> ParseTree::leaves() const {
  if (is_leaf()) return {word};
  auto out = children[0].leaves();
  auto right = children[1].leaves();
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

std::string to_bracketed(const ParseTree& t) {
  if (t.is_leaf()) return "(" + t.category + " " + t.word + ")";
  return "(" + t.category + " " + to_bracketed(t.children[0]) + " " + to_bracketed(t.children[1]) + ")";
}

std::string to_dot(const ParseTree& t) {
  std::ostringstream out;
  out << "digraph \"parse\" {\n";
  std::size_t next = 0;
  std::function<std::size_t(const ParseTree&)> emit = [&](const ParseTree& n) {
    std::size_t id = next++;
    out << "  n" << id << " [label=\"" << n.category << "\"];\n";
    if (n.is_leaf()) {
      std::size_t w = next++;
      out << "  n" << w << " [label=\"" << n.word << "\", shape=plaintext];\n";
      out << "  n" << id << " -> n" << w << ";\n";
    } else {
      for (const auto& c : n.children) {
        std::size_t child = emit(c);
        out << "  n" << id << " -> n" << child << ";\n";
      }
    }
    return id;
  };
  emit(t);
  out << "}\n";
  return out.str();
}

namespace {

// Nodes from the root down to the last attached word, with their parents.
std::vector<std::pair<int, int>> frontier(const ParserState& st) {
  std::vector<std::pair<int, int>> path;  // (node, parent)
  int parent = -1;
  for (int n = st.root; n >= 0;) {
    path.emplace_back(n, parent);
    const auto& node = st.nodes[static_cast<std::size_t>(n)];
    if (node.is_leaf()) break;
    parent = n;
    n = node.pending ? node.left : node.right;
  }
  return path;
}

// Every left-corner chain of rules from `top` down to `bottom` that visits no
// category twice, as rule indices, top first.
std::vector<std::vector<std::size_t>> chains(const Grammar& g, const std::string& top, const std::string& bottom) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::set<std::string> seen{top};
  std::function<void(const std::string&)> go = [&](const std::string& cat) {
    if (cat == bottom) {
      out.push_back(cur);
      return;
    }
    for (std::size_t r = 0; r < g.rules.size(); ++r) {
      const auto& rule = g.rules[r];
      if (rule.parent != cat || seen.count(rule.left)) continue;
      seen.insert(rule.left);
      cur.push_back(r);
      go(rule.left);
      cur.pop_back();
      seen.erase(rule.left);
    }
  };
  go(top);
  return out;
}

struct Attachment {
  std::size_t cost;
  std::size_t stamp;
  std::vector<std::size_t> rules;  // adjunction rule first, then the chain
  std::size_t category;            // index into the word's categories
  int site;                        // node to fill or adjoin at; -1 for the root
  int parent;                      // parent of an adjunction site
  bool adjoin;
  std::vector<std::size_t> chain;

  // Fewer nodes, then most recent site, then rule order.
  bool operator<(const Attachment& o) const {
    return std::tie(cost, o.stamp, rules, category) < std::tie(o.cost, stamp, o.rules, o.category);
  }
};

// Builds the chain and the leaf; returns the top node.
int build_chain(ParserState& st, const Grammar& g, const std::vector<std::size_t>& chain, const std::string& category,
                std::string_view word) {
  std::vector<int> made;
  for (std::size_t r : chain) {
    ParserState::Node n;
    n.category = g.rules[r].parent;
    n.pending = g.rules[r].right;
    n.stamp = ++st.clock;
    st.nodes.push_back(n);
    made.push_back(static_cast<int>(st.nodes.size() - 1));
  }
  ParserState::Node leaf;
  leaf.category = category;
  leaf.word = std::string(word);
  leaf.stamp = ++st.clock;
  st.nodes.push_back(leaf);
  int leaf_id = static_cast<int>(st.nodes.size() - 1);
  for (std::size_t i = 0; i < made.size(); ++i)
    st.nodes[static_cast<std::size_t>(made[i])].left = i + 1 < made.size() ? made[i + 1] : leaf_id;
  st.nodes_postulated += chain.size();
  return made.empty() ? leaf_id : made.front();
}

void set_right(ParserState& st, int node, int child) {
  auto& n = st.nodes[static_cast<std::size_t>(node)];
  n.right = child;
  n.pending.reset();
}

}  // namespace

std::optional<std::size_t> ParserState::rightmost_open() const {
  std::optional<std::size_t> out;
  for (const auto& [n, parent] : frontier(*this))
    if (nodes[static_cast<std::size_t>(n)].pending) out = static_cast<std::size_t>(n);
  return out;
}

bool ParserState::complete(const Grammar& g) const {
  return root >= 0 && !rightmost_open() && nodes[static_cast<std::size_t>(root)].category == g.start;
}

ParseTree ParserState::tree() const {
  if (root < 0 || rightmost_open()) throw std::logic_error("parser state is not a complete tree");
  std::function<ParseTree(int)> conv = [&](int id) {
    const auto& n = nodes[static_cast<std::size_t>(id)];
    ParseTree t{n.category, n.word, {}};
    if (!n.is_leaf()) t.children = {conv(n.left), conv(n.right)};
    return t;
  };
  return conv(root);
}

NoAttachment::NoAttachment(std::string word, std::size_t position)
    : std::runtime_error("NoAttachment: '" + word + "' at position " + std::to_string(position)),
      word_(std::move(word)),
      position_(position) {}

ParserState step(const ParserState& st, std::string_view word, const Grammar& g) {
  auto cats = g.categories_of(word);
  if (cats.empty()) throw NoAttachment(std::string(word), st.words);

  auto path = frontier(st);
  std::optional<std::size_t> open_at;  // index into path
  for (std::size_t i = 0; i < path.size(); ++i)
    if (st.nodes[static_cast<std::size_t>(path[i].first)].pending) open_at = i;

  std::optional<Attachment> best;
  auto consider = [&](Attachment a) {
    if (!best || a < *best) best = std::move(a);
  };
  for (std::size_t c = 0; c < cats.size(); ++c) {
    // Fill the leftmost open site.
    if (st.root < 0 || open_at) {
      int site = st.root < 0 ? -1 : path[*open_at].first;
      std::string want = site < 0 ? g.start : *st.nodes[static_cast<std::size_t>(site)].pending;
      std::size_t stamp = site < 0 ? 0 : st.nodes[static_cast<std::size_t>(site)].stamp;
      for (auto& ch : chains(g, want, cats[c])) consider({ch.size(), stamp, ch, c, site, -1, false, ch});
    }
    // Adjoin at a finished node on the right edge.
    std::size_t first = open_at ? *open_at + 1 : 0;
    for (std::size_t i = first; st.root >= 0 && i < path.size(); ++i) {
      const auto& y = st.nodes[static_cast<std::size_t>(path[i].first)];
      for (std::size_t r = 0; r < g.rules.size(); ++r) {
        const auto& rule = g.rules[r];
        if (rule.parent != y.category || rule.left != y.category) continue;
        for (auto& ch : chains(g, rule.right, cats[c])) {
          std::vector<std::size_t> rules{r};
          rules.insert(rules.end(), ch.begin(), ch.end());
          consider({1 + ch.size(), y.stamp, rules, c, path[i].first, path[i].second, true, ch});
        }
      }
    }
  }
  if (!best) throw NoAttachment(std::string(word), st.words);

  ParserState next = st;
  const Attachment& a = *best;
  if (!a.adjoin) {
    int top = build_chain(next, g, a.chain, cats[a.category], word);
    if (a.site < 0) next.root = top;
    else set_right(next, a.site, top);
  } else {
    const BinaryRule& rule = g.rules[a.rules.front()];
    ParserState::Node z;
    z.category = rule.parent;
    z.left = a.site;
    z.stamp = ++next.clock;
    next.nodes.push_back(z);
    int zid = static_cast<int>(next.nodes.size() - 1);
    next.nodes_postulated += 1;
    int top = build_chain(next, g, a.chain, cats[a.category], word);
    set_right(next, zid, top);
    if (a.parent < 0) {
      next.root = zid;
    } else {
      auto& p = next.nodes[static_cast<std::size_t>(a.parent)];
      (p.right == a.site ? p.right : p.left) = zid;
    }
  }
  ++next.words;
  return next;
}

IncrementalResult parse_incremental(const std::vector<std::string>& words, const Grammar& g) {
  if (words.empty()) throw std::invalid_argument("parse_incremental needs at least one word");
  IncrementalResult out;
  ParserState st;
  for (std::size_t i = 0; i < words.size(); ++i) {
    try {
      st = step(st, words[i], g);
    } catch (const NoAttachment& e) {
      out.failure = e.what();
      out.failure_position = i;
      return out;
    }
    out.node_counts.push_back(st.nodes_postulated);
  }
  if (!st.complete(g)) {
    std::string why = st.root < 0 || st.nodes[static_cast<std::size_t>(st.root)].category != g.start
                          ? "the tree is not rooted at " + g.start
                          : "input ended with an open " +
                                *st.nodes[*st.rightmost_open()].pending + " site";
    out.failure = why;
    out.failure_position = words.size();
    return out;
  }
  out.tree = st.tree();
  return out;
}

BoundExceeded::BoundExceeded(std::size_t words, std::size_t bound)
    : std::runtime_error("BoundExceeded: " + std::to_string(words) + " words, oracle bound is " +
                         std::to_string(bound)) {}

std::vector<ParseTree> enumerate_parses(const std::vector<std::string>& words, const Grammar& g, std::size_t bound) {
  const std::size_t n = words.size();
  if (n > bound) throw BoundExceeded(n, bound);
  if (n == 0 || g.start.empty()) return {};
  using Cell = std::map<std::string, std::vector<ParseTree>>;
  std::vector<std::vector<Cell>> chart(n, std::vector<Cell>(n + 1));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& c : g.categories_of(words[i])) chart[i][i + 1][c].push_back({c, words[i], {}});
  for (std::size_t len = 2; len <= n; ++len)
    for (std::size_t i = 0; i + len <= n; ++i) {
      Cell& cell = chart[i][i + len];
      for (const auto& rule : g.rules)
        for (std::size_t k = i + 1; k < i + len; ++k) {
          auto l = chart[i][k].find(rule.left);
          auto r = chart[k][i + len].find(rule.right);
          if (l == chart[i][k].end() || r == chart[k][i + len].end()) continue;
          for (const auto& lt : l->second)
            for (const auto& rt : r->second) cell[rule.parent].push_back({rule.parent, "", {lt, rt}});
        }
    }
  auto it = chart[0][n].find(g.start);
  return it == chart[0][n].end() ? std::vector<ParseTree>{} : it->second;
}

bool is_garden_path(const std::vector<std::string>& words, const Grammar& g, std::size_t bound) {
  auto parses = enumerate_parses(words, g, bound);
  return !parses.empty() && !parse_incremental(words, g).ok();
}

}  // namespace pmodel
