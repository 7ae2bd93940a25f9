#pragma once

// Sentences of a grammar, used by the garden-path unit tests and the
// acceptance suite.

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pmodel/gardenpath.hpp"

namespace testing {

inline std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::vector<std::vector<std::string>> gardenpath_sentences(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(split_words(line));
  return out;
}

/// Every word string of length <= max_len derivable from the start category,
/// using only the first word listed for each lexical category.
inline std::vector<std::vector<std::string>> generated_sentences(const pmodel::Grammar& g, std::size_t max_len) {
  using Strings = std::set<std::vector<std::string>>;
  std::map<std::string, std::string> first_word;
  for (const auto& r : g.lexical) first_word.emplace(r.category, r.word);
  // table[len][cat]: strings of exactly len words from cat.
  std::vector<std::map<std::string, Strings>> table(max_len + 1);
  for (const auto& [cat, w] : first_word) table[1][cat].insert({w});
  for (std::size_t len = 2; len <= max_len; ++len)
    for (const auto& rule : g.rules)
      for (std::size_t k = 1; k < len; ++k) {
        auto l = table[k].find(rule.left);
        auto r = table[len - k].find(rule.right);
        if (l == table[k].end() || r == table[len - k].end()) continue;
        for (const auto& a : l->second)
          for (const auto& b : r->second) {
            std::vector<std::string> s = a;
            s.insert(s.end(), b.begin(), b.end());
            table[len][rule.parent].insert(std::move(s));
          }
      }
  std::vector<std::vector<std::string>> out;
  for (std::size_t len = 1; len <= max_len; ++len) {
    auto it = table[len].find(g.start);
    if (it != table[len].end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

}  // namespace testing
