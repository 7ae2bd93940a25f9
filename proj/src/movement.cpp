#include "pmodel/movement.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace pmodel {

namespace {

using Items = std::vector<Item>;

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string decapitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

// Smallest unused index; movement indices start at 1.
int allocate_index(const SString& s) {
  std::set<int> used;
  for (const Item& it : s.items)
    if (it.index >= 0) used.insert(it.index);
  int i = 1;
  while (used.count(i)) ++i;
  return i;
}

std::size_t position_of_index(const Items& items, Item::Kind kind, int index) {
  for (std::size_t p = 0; p < items.size(); ++p)
    if (items[p].kind == kind && items[p].index == index) return p;
  return items.size();
}

bool single_constituent(const SString& s) {
  return !s.items.empty() && s.items.front().kind == Item::Kind::open &&
         matching_bracket(s, 0) == s.items.size() - 1;
}

void erase_positions(Items& items, std::vector<std::size_t> positions) {
  std::sort(positions.rbegin(), positions.rend());
  for (std::size_t p : positions) items.erase(items.begin() + static_cast<long>(p));
}

void require_valid(const SString& s) {
  try {
    s.validate();
  } catch (const InvalidSString& e) {
    throw MovementError(MovementError::Kind::broken_coindexation, e.what());
  }
}

}  // namespace

MovementConfig default_movement_config() {
  MovementConfig cfg;
  for (const auto& q : quantifier_words()) {
    if (q.binder == Binder::wh) cfg.wh_words.insert(q.word);
    else cfg.quantifier_words.insert(q.word);
  }
  return cfg;
}

bool is_quantifier_word(const std::string& word, const MovementConfig& cfg) {
  return cfg.quantifier_words.count(lower(word)) > 0;
}

bool is_wh_word(const std::string& word, const MovementConfig& cfg) { return cfg.wh_words.count(lower(word)) > 0; }

nlohmann::json record_to_json(const MovementRecord& r) {
  return {{"operation", r.operation}, {"index", r.index}, {"source", r.source}, {"target", r.target}};
}

const char* movement_error_name(MovementError::Kind k) {
  switch (k) {
    case MovementError::Kind::not_a_quantifier: return "NotAQuantifier";
    case MovementError::Kind::level_mismatch: return "LevelMismatch";
    case MovementError::Kind::no_wh_item: return "NoWhItem";
    case MovementError::Kind::multiple_wh_items: return "MultipleWhItems";
    case MovementError::Kind::no_fronted_quantifier: return "NoFrontedQuantifier";
    case MovementError::Kind::broken_coindexation: return "BrokenCoindexation";
    case MovementError::Kind::emphasis_target_missing: return "EmphasisTargetMissing";
    case MovementError::Kind::binding_violation: return "BindingViolation";
  }
  return "?";
}

MovementError::MovementError(Kind kind, std::string subject)
    : std::runtime_error(std::string(movement_error_name(kind)) + "(" + subject + ")"),
      kind_(kind),
      subject_(std::move(subject)) {}

std::vector<std::string> word_multiset(const SString& s) {
  std::vector<std::string> out;
  for (const auto& w : words_of(s)) out.push_back(lower(w));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

Moved quantifier_raise(const SString& s, std::size_t qpos, const MovementConfig& cfg) {
  if (s.level == Level::DS) throw MovementError(MovementError::Kind::level_mismatch, "quantifier_raise needs SS or LF");
  require_valid(s);
  if (qpos >= s.items.size() || !s.items[qpos].is_word_like() || !is_quantifier_word(s.items[qpos].text, cfg))
    throw MovementError(MovementError::Kind::not_a_quantifier, std::to_string(qpos));

  const Item& q = s.items[qpos];
  SString body = s;
  int index;
  if (q.kind == Item::Kind::word) {
    index = allocate_index(s);
    body.items[qpos] = Item::make_trace(TraceKind::x, index);
  } else {
    // Topicalized quantifier: its t-trace becomes the LF trace.
    index = q.index;
    std::size_t tp = position_of_index(s.items, Item::Kind::trace, index);
    if (s.items[tp].trace != TraceKind::t)
      throw MovementError(MovementError::Kind::broken_coindexation, "expected t-trace for index " + std::to_string(index));
    body.items[tp] = Item::make_trace(TraceKind::x, index);
    body.items.erase(body.items.begin() + static_cast<long>(qpos));
  }

  Items constituent;
  if (single_constituent(body)) {
    constituent = body.items;
  } else {
    constituent.push_back(Item::open());
    constituent.insert(constituent.end(), body.items.begin(), body.items.end());
    constituent.push_back(Item::close());
  }

  Moved out;
  out.result.level = Level::LF;
  out.result.punctuation = s.punctuation;
  Item head = Item::indexed(capitalized(q.text), index);
  std::size_t target;
  out.result.items.push_back(Item::open());
  if (cfg.quantifier_last) {
    out.result.items.insert(out.result.items.end(), constituent.begin(), constituent.end());
    target = out.result.items.size();
    out.result.items.push_back(head);
  } else {
    target = 1;
    out.result.items.push_back(head);
    out.result.items.insert(out.result.items.end(), constituent.begin(), constituent.end());
  }
  out.result.items.push_back(Item::close());
  out.records.push_back({"quantifier_raise", index, qpos, target});
  return out;
}

Moved wh_raise(const SString& s, const MovementConfig& cfg) {
  if (s.level != Level::SS) throw MovementError(MovementError::Kind::level_mismatch, "wh_raise needs SS");
  require_valid(s);
  std::vector<std::size_t> whs;
  for (std::size_t p = 0; p < s.items.size(); ++p)
    if (s.items[p].is_word_like() && is_wh_word(s.items[p].text, cfg)) whs.push_back(p);
  if (whs.empty()) throw MovementError(MovementError::Kind::no_wh_item, render(s));
  if (whs.size() > 1) throw MovementError(MovementError::Kind::multiple_wh_items, render(s));

  Moved out;
  out.result = s;
  out.result.level = Level::LF;
  const Item& wh = s.items[whs[0]];
  if (wh.kind == Item::Kind::indexed) {
    std::size_t tp = position_of_index(s.items, Item::Kind::trace, wh.index);
    if (s.items[tp].trace != TraceKind::t)
      throw MovementError(MovementError::Kind::broken_coindexation, "expected t-trace for index " + std::to_string(wh.index));
    out.result.items[tp].trace = TraceKind::x;
    out.records.push_back({"wh_raise", wh.index, tp, whs[0]});
  }
  return out;
}

Moved quantifier_lower(const SString& s, const MovementConfig& cfg) {
  if (s.level == Level::SS) throw MovementError(MovementError::Kind::level_mismatch, "quantifier_lower needs LF or DS");
  require_valid(s);

  std::size_t qp = s.items.size();
  for (std::size_t p = 0; p < s.items.size() && qp == s.items.size(); ++p) {
    const Item& it = s.items[p];
    if (it.kind != Item::Kind::indexed || !is_quantifier_word(it.text, cfg)) continue;
    std::size_t tp = position_of_index(s.items, Item::Kind::trace, it.index);
    if (s.items[tp].trace == TraceKind::x) qp = p;
    else if (s.items[tp].trace == TraceKind::t)
      throw MovementError(MovementError::Kind::broken_coindexation, "t-trace at LF for index " + std::to_string(it.index));
  }
  if (qp == s.items.size()) throw MovementError(MovementError::Kind::no_fronted_quantifier, render(s));

  const int index = s.items[qp].index;
  const std::string text = decapitalized(s.items[qp].text);
  Items items = s.items;
  std::size_t tp = position_of_index(items, Item::Kind::trace, index);
  items[qp] = Item::make_trace(TraceKind::y, index);
  items[tp] = Item::indexed(text, index);

  // Undo the adjunction: drop the bracket pair around the quantifier, and
  // the brackets of its sister unless the sister is itself an adjunction.
  SString tmp{s.level, items, s.punctuation};
  std::vector<std::size_t> drop;
  std::size_t open = qp;
  int depth = 0;
  while (open-- > 0) {
    if (items[open].kind == Item::Kind::close) ++depth;
    if (items[open].kind == Item::Kind::open) {
      if (depth == 0) break;
      --depth;
    }
  }
  if (open < items.size() && items[open].label == BracketLabel::none) {
    std::size_t close = matching_bracket(tmp, open);
    drop = {open, close};
    std::vector<std::size_t> sister;
    for (std::size_t p = open + 1; p < close; ++p) {
      if (p == qp) continue;
      if (items[p].kind == Item::Kind::open) {
        std::size_t m = matching_bracket(tmp, p);
        sister.push_back(p);
        sister.push_back(m);
        p = m;
      } else {
        sister.clear();
        break;
      }
    }
    if (sister.size() == 2) {
      std::size_t first = sister[0] + 1;
      bool adjunction = first < items.size() && items[first].kind == Item::Kind::indexed &&
                        is_quantifier_word(items[first].text, cfg) &&
                        items[position_of_index(items, Item::Kind::trace, items[first].index)].trace ==
                            TraceKind::x;
      if (!adjunction) drop.insert(drop.end(), sister.begin(), sister.end());
    }
  }
  erase_positions(items, drop);

  Moved out;
  out.result = SString{Level::DS, items, s.punctuation};
  out.records.push_back(
      {"quantifier_lower", index, qp, position_of_index(out.result.items, Item::Kind::indexed, index)});
  return out;
}

Moved wh_lower(const SString& s, const MovementConfig& cfg) {
  if (s.level != Level::LF) throw MovementError(MovementError::Kind::level_mismatch, "wh_lower needs LF");
  require_valid(s);
  std::vector<std::size_t> whs;
  for (std::size_t p = 0; p < s.items.size(); ++p)
    if (s.items[p].is_word_like() && is_wh_word(s.items[p].text, cfg)) whs.push_back(p);
  if (whs.empty()) throw MovementError(MovementError::Kind::no_wh_item, render(s));
  if (whs.size() > 1) throw MovementError(MovementError::Kind::multiple_wh_items, render(s));

  Moved out;
  const Item wh = s.items[whs[0]];
  if (wh.kind == Item::Kind::word) {
    out.result = s;
    out.result.level = Level::DS;
    return out;
  }
  std::size_t tp = position_of_index(s.items, Item::Kind::trace, wh.index);
  if (s.items[tp].trace != TraceKind::x)
    throw MovementError(MovementError::Kind::broken_coindexation, "expected x-trace for index " + std::to_string(wh.index));

  Items items = s.items;
  items[whs[0]] = Item::make_trace(TraceKind::y, wh.index);
  items[tp] = Item::indexed(decapitalized(wh.text), wh.index);
  SString tmp{s.level, items, s.punctuation};
  std::vector<std::size_t> drop;
  for (std::size_t p = 0; p < items.size(); ++p)
    if (items[p].kind == Item::Kind::open && items[p].label != BracketLabel::none) {
      drop.push_back(p);
      drop.push_back(matching_bracket(tmp, p));
    }
  erase_positions(items, drop);
  out.result = SString{Level::DS, items, s.punctuation};
  out.records.push_back(
      {"wh_lower", wh.index, whs[0], position_of_index(out.result.items, Item::Kind::indexed, wh.index)});
  return out;
}

Moved apply_emphasis(const SString& s, const Force& force, const BindingConstraints& bc,
                     const MovementConfig& cfg) {
  if (s.level != Level::DS) throw MovementError(MovementError::Kind::level_mismatch, "apply_emphasis needs DS");
  require_valid(s);
  Moved out;
  Items items = s.items;
  std::optional<std::string> emphasis = force.emphasis;

  // Wh chain: indexed Wh item whose y-trace marks the front.
  if (force.mood == Mood::interrogative) {
    for (std::size_t wp = 0; wp < items.size(); ++wp) {
      const Item wh = items[wp];
      if (wh.kind != Item::Kind::indexed || !is_wh_word(wh.text, cfg)) continue;
      std::size_t yp = position_of_index(items, Item::Kind::trace, wh.index);
      if (items[yp].trace != TraceKind::y) break;
      if (emphasis && lower(*emphasis) == lower(wh.text)) emphasis.reset();
      if (!cfg.wh_fronting) break;  // erased below with the other vacuous traces
      Items rebuilt(items.begin(), items.begin() + static_cast<long>(yp));
      rebuilt.push_back(Item::open(BracketLabel::CP));
      std::size_t target = rebuilt.size();
      rebuilt.push_back(Item::indexed(capitalized(wh.text), wh.index));
      std::size_t rest = yp + 1;
      if (rest < items.size() && items[rest].kind == Item::Kind::word && cfg.auxiliaries.count(lower(items[rest].text)))
        rebuilt.push_back(items[rest++]);
      rebuilt.push_back(Item::open(BracketLabel::IP));
      for (std::size_t p = rest; p < items.size(); ++p)
        rebuilt.push_back(p == wp ? Item::make_trace(TraceKind::t, wh.index) : items[p]);
      rebuilt.push_back(Item::close());
      rebuilt.push_back(Item::close());
      items = std::move(rebuilt);
      out.records.push_back({"wh_front", wh.index, wp, target});
      break;
    }
  }

  if (emphasis) {
    std::string target = lower(*emphasis);
    std::size_t hit = items.size();
    for (std::size_t p = 0; p < items.size() && hit == items.size(); ++p)
      if (items[p].is_word_like() && lower(items[p].text) == target) hit = p;
    if (hit == items.size()) throw MovementError(MovementError::Kind::emphasis_target_missing, *emphasis);
    const Item it = items[hit];
    std::size_t yp = it.kind == Item::Kind::indexed ? position_of_index(items, Item::Kind::trace, it.index) : items.size();
    if (yp < items.size() && items[yp].trace == TraceKind::y) {
      items[yp] = Item::indexed(capitalized(it.text), it.index);
      items[hit] = Item::make_trace(TraceKind::t, it.index);
      out.records.push_back({"topicalize", it.index, hit, yp});
    } else if (it.kind == Item::Kind::word) {
      std::size_t first = 0;
      while (first < items.size() && !items[first].is_word_like()) ++first;
      if (first != hit) {
        int index = allocate_index(SString{s.level, items, s.punctuation});
        items[hit] = Item::make_trace(TraceKind::t, index);
        items.insert(items.begin(), Item::indexed(capitalized(it.text), index));
        out.records.push_back({"topicalize", index, hit, 0});
      }
    }
  }

  // Remaining y-traces are vacuous: erase them and drop their indices.
  std::vector<std::size_t> drop;
  for (std::size_t p = 0; p < items.size(); ++p) {
    if (items[p].kind != Item::Kind::trace || items[p].trace != TraceKind::y) continue;
    std::size_t head = position_of_index(items, Item::Kind::indexed, items[p].index);
    if (head < items.size()) items[head] = Item::word(items[head].text);
    drop.push_back(p);
  }
  erase_positions(items, drop);

  for (Item& it : items)
    if (it.is_word_like()) {
      it.text = capitalized(it.text);
      break;
    }

  out.result = SString{Level::SS, items, s.punctuation};
  require_valid(out.result);

  auto words = word_multiset(out.result);
  for (const auto& [word, id] : bc) {
    auto n = std::count(words.begin(), words.end(), lower(word));
    if (n != 1) throw MovementError(MovementError::Kind::binding_violation, word);
  }
  return out;
}

}  // namespace pmodel
