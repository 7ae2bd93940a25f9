#include "pmodel/syntax_rep.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace pmodel {

const char* level_name(Level l) {
  switch (l) {
    case Level::DS: return "DS";
    case Level::SS: return "SS";
    case Level::LF: return "LF";
  }
  return "?";
}

std::optional<Level> level_from_name(std::string_view name) {
  for (Level l : {Level::DS, Level::SS, Level::LF})
    if (name == level_name(l)) return l;
  return std::nullopt;
}

char trace_glyph(TraceKind k) {
  switch (k) {
    case TraceKind::t: return 't';
    case TraceKind::x: return 'x';
    case TraceKind::y: return 'y';
  }
  return '?';
}

const char* bracket_label_name(BracketLabel b) {
  switch (b) {
    case BracketLabel::none: return "";
    case BracketLabel::CP: return "CP";
    case BracketLabel::IP: return "IP";
  }
  return "";
}

Item Item::word(std::string text) {
  Item i;
  i.kind = Kind::word;
  i.text = std::move(text);
  return i;
}

Item Item::indexed(std::string text, int index) {
  if (index < 0) throw InvalidSString("negative index");
  Item i;
  i.kind = Kind::indexed;
  i.text = std::move(text);
  i.index = index;
  return i;
}

Item Item::make_trace(TraceKind kind, int index) {
  if (index < 0) throw InvalidSString("negative index");
  Item i;
  i.kind = Kind::trace;
  i.trace = kind;
  i.index = index;
  return i;
}

Item Item::open(BracketLabel label) {
  Item i;
  i.kind = Kind::open;
  i.label = label;
  return i;
}

Item Item::close() {
  Item i;
  i.kind = Kind::close;
  return i;
}

std::map<int, std::pair<std::size_t, std::size_t>> SString::coindex() const {
  std::map<int, std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p < items.size(); ++p) {
    const Item& it = items[p];
    if (it.kind == Item::Kind::indexed) out[it.index].first = p;
    if (it.kind == Item::Kind::trace) out[it.index].second = p;
  }
  return out;
}

void SString::validate() const {
  int depth = 0;
  std::map<int, int> heads, traces;
  for (const Item& it : items) {
    if (it.kind == Item::Kind::open) ++depth;
    if (it.kind == Item::Kind::close && --depth < 0) throw InvalidSString("unbalanced ']'");
    if (it.kind == Item::Kind::indexed) ++heads[it.index];
    if (it.kind == Item::Kind::trace) ++traces[it.index];
    if (it.is_word_like() && it.text.empty()) throw InvalidSString("empty word");
  }
  if (depth != 0) throw InvalidSString("unbalanced '['");
  for (const auto& [i, n] : heads)
    if (n != 1 || traces[i] != 1)
      throw InvalidSString("index " + std::to_string(i) + " is not coindexed one-to-one");
  for (const auto& [i, n] : traces)
    if (n != 1 || heads[i] != 1)
      throw InvalidSString("trace " + std::to_string(i) + " is not coindexed one-to-one");
}

std::size_t matching_bracket(const SString& s, std::size_t pos) {
  const auto& items = s.items;
  if (items.at(pos).kind == Item::Kind::open) {
    int depth = 0;
    for (std::size_t p = pos; p < items.size(); ++p) {
      if (items[p].kind == Item::Kind::open) ++depth;
      if (items[p].kind == Item::Kind::close && --depth == 0) return p;
    }
  } else if (items[pos].kind == Item::Kind::close) {
    int depth = 0;
    for (std::size_t p = pos + 1; p-- > 0;) {
      if (items[p].kind == Item::Kind::close) ++depth;
      if (items[p].kind == Item::Kind::open && --depth == 0) return p;
    }
  }
  throw InvalidSString("no matching bracket at position " + std::to_string(pos));
}

std::string render(const SString& s) {
  std::string out;
  std::vector<BracketLabel> open_labels;
  auto sep = [&] {
    if (!out.empty()) out += ' ';
  };
  for (const Item& it : s.items) {
    switch (it.kind) {
      case Item::Kind::word:
        sep();
        out += it.text;
        break;
      case Item::Kind::indexed:
        sep();
        out += it.text + "_" + std::to_string(it.index);
        break;
      case Item::Kind::trace:
        sep();
        out += std::string(1, trace_glyph(it.trace)) + "_" + std::to_string(it.index);
        break;
      case Item::Kind::open:
        sep();
        out += "[";
        out += bracket_label_name(it.label);
        open_labels.push_back(it.label);
        break;
      case Item::Kind::close: {
        BracketLabel label = BracketLabel::none;
        if (!open_labels.empty()) {
          label = open_labels.back();
          open_labels.pop_back();
        }
        if (label == BracketLabel::none) sep();
        out += "]";
        break;
      }
    }
  }
  if (s.punctuation == Punctuation::question) {
    sep();
    out += "?";
  }
  return out;
}

namespace {

std::optional<int> parse_index(std::string_view digits) {
  if (digits.empty() || digits.size() > 9) return std::nullopt;
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  return std::stoi(std::string(digits));
}

Item parse_token(std::string_view tok) {
  std::size_t mark = tok.find_last_of("_^");
  if (mark != std::string_view::npos && mark > 0) {
    if (auto idx = parse_index(tok.substr(mark + 1))) {
      std::string_view head = tok.substr(0, mark);
      if (head == "t") return Item::make_trace(TraceKind::t, *idx);
      if (head == "x") return Item::make_trace(TraceKind::x, *idx);
      if (head == "y") return Item::make_trace(TraceKind::y, *idx);
      return Item::indexed(std::string(head), *idx);
    }
  }
  return Item::word(std::string(tok));
}

}  // namespace

SString parse_sstring(std::string_view text, Level level) {
  SString s;
  s.level = level;
  std::vector<std::string> tokens;
  {
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
  }
  if (!tokens.empty() && tokens.back() == "?") {
    s.punctuation = Punctuation::question;
    tokens.pop_back();
  } else if (!tokens.empty() && tokens.back().size() > 1 && tokens.back().back() == '?') {
    s.punctuation = Punctuation::question;
    tokens.back().pop_back();
  }
  for (std::string_view tok : tokens) {
    if (tok == "?") throw InvalidSString("'?' may only end the string");
    std::size_t closes = 0;
    while (closes < tok.size() && tok[tok.size() - 1 - closes] == ']') ++closes;
    std::string_view body = tok.substr(0, tok.size() - closes);
    if (!body.empty() && body.front() == '[') {
      std::string_view label = body.substr(1);
      if (label.empty()) s.items.push_back(Item::open());
      else if (label == "CP") s.items.push_back(Item::open(BracketLabel::CP));
      else if (label == "IP") s.items.push_back(Item::open(BracketLabel::IP));
      else throw InvalidSString("unknown bracket label '" + std::string(label) + "'");
    } else if (!body.empty()) {
      s.items.push_back(parse_token(body));
    }
    for (std::size_t i = 0; i < closes; ++i) s.items.push_back(Item::close());
  }
  s.validate();
  return s;
}

std::vector<std::string> words_of(const SString& s) {
  std::vector<std::string> out;
  for (const Item& it : s.items)
    if (it.is_word_like()) out.push_back(it.text);
  return out;
}

std::string strip(const SString& s) {
  std::string out;
  for (const auto& w : words_of(s)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  if (s.punctuation == Punctuation::question) out += "?";
  return out;
}

SString without_brackets(const SString& s) {
  SString out = s;
  out.items.clear();
  for (const Item& it : s.items)
    if (it.kind != Item::Kind::open && it.kind != Item::Kind::close) out.items.push_back(it);
  return out;
}

bool equivalent_mod_indices(const SString& a, const SString& b) {
  if (a.level != b.level || a.punctuation != b.punctuation || a.items.size() != b.items.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t p = 0; p < a.items.size(); ++p) {
    const Item& x = a.items[p];
    const Item& y = b.items[p];
    if (x.kind != y.kind || x.text != y.text || x.label != y.label) return false;
    if (x.kind == Item::Kind::trace && x.trace != y.trace) return false;
    if (x.kind == Item::Kind::indexed || x.kind == Item::Kind::trace) {
      auto [i, fresh_a] = ab.emplace(x.index, y.index);
      auto [j, fresh_b] = ba.emplace(y.index, x.index);
      if (i->second != y.index || j->second != x.index) return false;
    }
  }
  return true;
}

int fresh_index(const SString& s) {
  std::set<int> used;
  for (const Item& it : s.items)
    if (it.kind == Item::Kind::indexed || it.kind == Item::Kind::trace) used.insert(it.index);
  int i = 0;
  while (used.count(i)) ++i;
  return i;
}

nlohmann::json sstring_to_json(const SString& s) {
  nlohmann::json items = nlohmann::json::array();
  for (const Item& it : s.items) {
    switch (it.kind) {
      case Item::Kind::word: items.push_back({{"kind", "word"}, {"text", it.text}}); break;
      case Item::Kind::indexed:
        items.push_back({{"kind", "indexed"}, {"text", it.text}, {"index", it.index}});
        break;
      case Item::Kind::trace:
        items.push_back({{"kind", "trace"}, {"trace", std::string(1, trace_glyph(it.trace))}, {"index", it.index}});
        break;
      case Item::Kind::open: items.push_back({{"kind", "open"}, {"label", bracket_label_name(it.label)}}); break;
      case Item::Kind::close: items.push_back({{"kind", "close"}}); break;
    }
  }
  nlohmann::json co = nlohmann::json::object();
  for (const auto& [i, pos] : s.coindex()) co[std::to_string(i)] = nlohmann::json::array({pos.first, pos.second});
  return {{"level", level_name(s.level)},
          {"items", items},
          {"punctuation", s.punctuation == Punctuation::question ? "question" : "none"},
          {"coindex", co}};
}

SString sstring_from_json(const nlohmann::json& j) {
  SString s;
  auto level = level_from_name(j.at("level").get<std::string>());
  if (!level) throw InvalidSString("unknown level");
  s.level = *level;
  s.punctuation = j.value("punctuation", "none") == "question" ? Punctuation::question : Punctuation::none;
  for (const auto& it : j.at("items")) {
    std::string kind = it.at("kind").get<std::string>();
    if (kind == "word") {
      s.items.push_back(Item::word(it.at("text").get<std::string>()));
    } else if (kind == "indexed") {
      s.items.push_back(Item::indexed(it.at("text").get<std::string>(), it.at("index").get<int>()));
    } else if (kind == "trace") {
      std::string g = it.at("trace").get<std::string>();
      TraceKind k = g == "t" ? TraceKind::t : g == "x" ? TraceKind::x : g == "y" ? TraceKind::y
                                                                            : throw InvalidSString("bad trace");
      s.items.push_back(Item::make_trace(k, it.at("index").get<int>()));
    } else if (kind == "open") {
      std::string l = it.value("label", "");
      s.items.push_back(Item::open(l == "CP" ? BracketLabel::CP : l == "IP" ? BracketLabel::IP : BracketLabel::none));
    } else if (kind == "close") {
      s.items.push_back(Item::close());
    } else {
      throw InvalidSString("unknown item kind '" + kind + "'");
    }
  }
  s.validate();
  return s;
}

std::string sstring_to_dot(const SString& s, std::string_view name) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n  rankdir=LR;\n  label=\"" << level_name(s.level) << "\";\n";
  for (std::size_t p = 0; p < s.items.size(); ++p) {
    const Item& it = s.items[p];
    std::string label;
    switch (it.kind) {
      case Item::Kind::word: label = it.text; break;
      case Item::Kind::indexed: label = it.text + "_" + std::to_string(it.index); break;
      case Item::Kind::trace: label = std::string(1, trace_glyph(it.trace)) + "_" + std::to_string(it.index); break;
      case Item::Kind::open: label = std::string("[") + bracket_label_name(it.label); break;
      case Item::Kind::close: label = "]"; break;
    }
    out << "  n" << p << " [label=\"" << label << "\"" << (it.kind == Item::Kind::trace ? ", shape=box" : "")
        << "];\n";
  }
  for (std::size_t p = 1; p < s.items.size(); ++p) out << "  n" << p - 1 << " -> n" << p << ";\n";
  for (const auto& [i, pos] : s.coindex())
    out << "  n" << pos.second << " -> n" << pos.first << " [style=dashed, constraint=false, label=\"" << i
        << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace pmodel
