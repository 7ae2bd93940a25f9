#include "pmodel/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pmodel {

namespace {

using Items = std::vector<Item>;

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void unlexicalizable(const std::string& node, const std::string& detail) {
  throw PipelineError(PipelineError::Kind::unlexicalizable_node, node, detail);
}

[[noreturn]] void unrecoverable(const std::string& token, const std::string& detail) {
  throw PipelineError(PipelineError::Kind::unrecoverable_lf, token, detail);
}

bool mentions_probability(const Formula& f) {
  if (f.as<Formula::ProbAssertion>()) return true;
  if (auto n = f.as<Formula::Negation>()) return mentions_probability(n->operand);
  if (auto b = f.as<Formula::Binary>()) return mentions_probability(b->lhs) || mentions_probability(b->rhs);
  if (auto q = f.as<Formula::Quantified>()) return mentions_probability(q->body);
  if (auto w = f.as<Formula::WhQuery>()) return mentions_probability(w->restrictor) || mentions_probability(w->body);
  return false;
}

std::size_t position_of_index(const Items& items, Item::Kind kind, int index) {
  for (std::size_t p = 0; p < items.size(); ++p)
    if (items[p].kind == kind && items[p].index == index) return p;
  return items.size();
}

const Item* partner_trace(const SString& s, const Item& indexed) {
  std::size_t p = position_of_index(s.items, Item::Kind::trace, indexed.index);
  return p < s.items.size() ? &s.items[p] : nullptr;
}

bool has_fronted_quantifier(const SString& s, const MovementConfig& cfg) {
  for (const Item& it : s.items)
    if (it.kind == Item::Kind::indexed && is_quantifier_word(it.text, cfg)) {
      const Item* t = partner_trace(s, it);
      if (t && t->trace == TraceKind::x) return true;
    }
  return false;
}

// Quantifiers still in place, left to right by the position they are
// interpreted in: a topicalized quantifier counts at its t-trace.
std::vector<std::size_t> unraised_quantifiers(const SString& s, const MovementConfig& cfg) {
  std::vector<std::pair<std::size_t, std::size_t>> keyed;  // (effective, actual)
  for (std::size_t p = 0; p < s.items.size(); ++p) {
    const Item& it = s.items[p];
    if (!it.is_word_like() || !is_quantifier_word(it.text, cfg)) continue;
    if (it.kind == Item::Kind::word) {
      keyed.emplace_back(p, p);
    } else {
      std::size_t tp = position_of_index(s.items, Item::Kind::trace, it.index);
      if (tp < s.items.size() && s.items[tp].trace == TraceKind::t) keyed.emplace_back(tp, p);
    }
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> out;
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

// Raises the quantifiers of `s`, widest scope first in `order`, where order
// holds ranks into the left-to-right unraised list of `s`.
Moved raise_in_order(SString s, const std::vector<std::size_t>& order, const MovementConfig& cfg) {
  Moved out;
  std::vector<std::size_t> remaining(order.begin(), order.end());
  std::sort(remaining.begin(), remaining.end());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto slot = std::lower_bound(remaining.begin(), remaining.end(), *it);
    std::size_t rank = static_cast<std::size_t>(slot - remaining.begin());
    auto positions = unraised_quantifiers(s, cfg);
    Moved m = quantifier_raise(s, positions.at(rank), cfg);
    s = std::move(m.result);
    out.records.insert(out.records.end(), m.records.begin(), m.records.end());
    remaining.erase(slot);
  }
  out.result = std::move(s);
  return out;
}

Moved lower_all(SString s, const MovementConfig& cfg) {
  Moved out;
  while (has_fronted_quantifier(s, cfg)) {
    Moved m = quantifier_lower(s, cfg);
    s = std::move(m.result);
    out.records.insert(out.records.end(), m.records.begin(), m.records.end());
  }
  s.level = Level::DS;
  out.result = std::move(s);
  return out;
}

Moved generate(const FRepresentation& f, const Formula& reading) {
  const MovementConfig cfg = default_movement_config();
  if (mentions_probability(reading)) unlexicalizable("ProbAssertion", "no lexicalization rule for probability");
  QuantifierChain chain = decompose_chain(reading);

  std::map<std::string, std::string> var_word;
  bool wh = false;
  for (const auto& link : chain.links) {
    auto w = quantifier_word_for(f, link);
    std::string node = link.binder == Binder::wh ? "WhQuery" : "Quantified";
    if (!w) unlexicalizable(node, "no quantifier word for " + link.var);
    if (var_word.count(link.var)) unlexicalizable(node, "variable " + link.var + " bound twice");
    var_word[link.var] = lower(*w);
    if (link.binder == Binder::wh) wh = true;
  }
  if (wh && chain.links.size() > 1)
    unlexicalizable("WhQuery", "a Wh operator cannot share the sentence with other quantifiers");

  auto m = chain.matrix.as<Formula::Membership>();
  if (!m) unlexicalizable(kind_name(chain.matrix), "the matrix must be a single membership");

  std::map<std::string, int> uses;
  auto term_item = [&](const Term& t) {
    if (t.is_variable()) {
      auto it = var_word.find(t.name);
      if (it == var_word.end()) unlexicalizable("Membership", "free variable " + t.name);
      ++uses[t.name];
      return Item::word(it->second);
    }
    const auto* r = f.by_symbol(t.name);
    if (!r) unlexicalizable("Membership", "no lexical referent for " + t.name);
    return Item::word(r->word);
  };
  const auto* pred = f.by_symbol(m->predicate);
  if (!pred) unlexicalizable("Membership", "no lexical referent for " + m->predicate);

  Items core;
  core.push_back(term_item(m->subject));
  if (m->object) {
    core.push_back(Item::word(pred->word));
    core.push_back(term_item(*m->object));
  } else if (pred->category == Category::V) {
    core.push_back(Item::word(pred->word));
  } else {
    core.push_back(Item::word("is"));
    core.push_back(Item::word(pred->word));
  }
  for (const auto& link : chain.links)
    if (uses[link.var] != 1) unlexicalizable("Membership", "variable " + link.var + " must occur exactly once");

  if (wh) {
    // "[CP Who_1 did [IP Jones see x_1]] ?" or "[CP Who_1 [IP x_1 saw Jones]] ?"
    const auto& link = chain.links.front();
    std::string word = var_word[link.var];
    bool subject = m->subject.is_variable();
    SString lf;
    lf.level = Level::LF;
    lf.punctuation = Punctuation::question;
    word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    lf.items.push_back(Item::open(BracketLabel::CP));
    lf.items.push_back(Item::indexed(word, 1));
    if (!subject) lf.items.push_back(Item::word("did"));
    lf.items.push_back(Item::open(BracketLabel::IP));
    const std::size_t var_pos = subject ? 0 : core.size() - 1;
    for (std::size_t i = 0; i < core.size(); ++i)
      lf.items.push_back(i == var_pos ? Item::make_trace(TraceKind::x, 1) : core[i]);
    lf.items.push_back(Item::close());
    lf.items.push_back(Item::close());
    return wh_lower(lf, cfg);
  }

  SString base;
  base.level = Level::SS;
  base.items = core;
  if (chain.links.empty()) {
    base.level = Level::DS;
    return Moved{base, {}};
  }

  // Ranks of the links in the left-to-right order of their words.
  std::vector<std::pair<std::size_t, std::size_t>> by_position;  // (core position, link)
  for (std::size_t k = 0; k < chain.links.size(); ++k) {
    const Term& subj = m->subject;
    std::size_t pos = subj.is_variable() && subj.name == chain.links[k].var ? 0 : core.size() - 1;
    by_position.emplace_back(pos, k);
  }
  std::sort(by_position.begin(), by_position.end());
  std::vector<std::size_t> rank_of_link(chain.links.size());
  for (std::size_t r = 0; r < by_position.size(); ++r) rank_of_link[by_position[r].second] = r;
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < chain.links.size(); ++k) order.push_back(rank_of_link[k]);

  Moved raised = raise_in_order(base, order, cfg);
  Moved lowered = lower_all(raised.result, cfg);
  lowered.records.insert(lowered.records.begin(), raised.records.begin(), raised.records.end());
  return lowered;
}

// Scope order of the quantifiers of a DS, as ranks into their left-to-right
// order: those with y-traces first, in y-trace order, then the rest.
std::vector<std::size_t> ds_scope_order(const SString& ds, const MovementConfig& cfg) {
  std::vector<std::pair<std::pair<int, std::size_t>, std::size_t>> keyed;
  std::size_t rank = 0;
  for (std::size_t p = 0; p < ds.items.size(); ++p) {
    const Item& it = ds.items[p];
    if (!it.is_word_like() || !is_quantifier_word(it.text, cfg)) continue;
    std::pair<int, std::size_t> key{1, rank};
    if (it.kind == Item::Kind::indexed) {
      std::size_t tp = position_of_index(ds.items, Item::Kind::trace, it.index);
      if (tp < ds.items.size() && ds.items[tp].trace == TraceKind::y) key = {0, tp};
    }
    keyed.emplace_back(key, rank++);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> out;
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

std::string fresh_variable(std::set<std::string>& used) {
  for (const char* v : {"x", "y", "z", "u", "v", "w"})
    if (used.insert(v).second) return v;
  for (int i = 1;; ++i) {
    std::string v = "x" + std::to_string(i);
    if (used.insert(v).second) return v;
  }
}

const LexicalReferent* sort_referent(const FRepresentation& f, bool animate) {
  for (const auto& r : f.lexical)
    if (animate ? is_person_sort_word(r.word) : is_thing_sort_word(r.word)) return &r;
  return nullptr;
}

}  // namespace

const char* derivation_model_name(DerivationModel m) { return m == DerivationModel::T ? "T" : "P"; }

void check_derivation(const Derivation& d) {
  std::vector<Level> want = d.model == DerivationModel::T ? std::vector<Level>{Level::DS, Level::SS, Level::LF}
                                                          : std::vector<Level>{Level::DS, Level::SS};
  if (d.steps.size() != want.size()) throw std::logic_error("derivation has the wrong number of steps");
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (d.steps[i].sstring.level != want[i]) throw std::logic_error("derivation step has the wrong level");
    d.steps[i].sstring.validate();
  }
}

PipelineError::PipelineError(Kind kind, std::string subject, const std::string& detail)
    : std::runtime_error(std::string(pipeline_error_name(kind)) + "(" + subject + "): " + detail),
      kind_(kind),
      subject_(std::move(subject)) {}

const char* pipeline_error_name(PipelineError::Kind k) {
  switch (k) {
    case PipelineError::Kind::unlexicalizable_node: return "UnlexicalizableNode";
    case PipelineError::Kind::unrecoverable_lf: return "UnrecoverableLF";
  }
  return "?";
}

SString generate_ds(const FRepresentation& f, const Formula& reading) { return generate(f, reading).result; }

std::optional<std::string> emphasis_word(const FRepresentation& f) {
  if (!f.force.emphasis) return std::nullopt;
  const std::string& e = *f.force.emphasis;
  if (const auto* r = f.by_symbol(e)) return r->word;
  for (const auto& link : decompose_chain(f.string).links)
    if (link.var == e)
      if (auto w = quantifier_word_for(f, link)) return *w;
  return e;
}

Derivation derive_p(const FRepresentation& f) {
  Derivation d;
  d.model = DerivationModel::P;
  auto readings = resolve_scope(f);
  if (readings.size() > 1)
    d.warnings.push_back("AmbiguousScope: " + std::to_string(readings.size()) +
                         " readings, derived the first; add a scope_order declarant to choose");
  Moved ds = generate(f, readings.front());
  Moved ss = apply_emphasis(ds.result, Force{f.force.mood, emphasis_word(f)}, binding_referents(f));
  d.steps.push_back({ds.result, ds.records});
  d.steps.push_back({ss.result, ss.records});
  check_derivation(d);
  return d;
}

Derivation derive_t(const SString& ds, const Force& force) {
  const MovementConfig cfg = default_movement_config();
  Derivation d;
  d.model = DerivationModel::T;
  Moved ss = apply_emphasis(ds, force, {}, cfg);

  Moved lf{ss.result, {}};
  lf.result.level = Level::LF;
  bool has_wh = std::any_of(ss.result.items.begin(), ss.result.items.end(),
                            [&](const Item& it) { return it.is_word_like() && is_wh_word(it.text, cfg); });
  if (has_wh) lf = wh_raise(ss.result, cfg);
  auto order = ds_scope_order(ds, cfg);
  if (!order.empty()) {
    Moved raised = raise_in_order(lf.result, order, cfg);
    lf.result = std::move(raised.result);
    lf.records.insert(lf.records.end(), raised.records.begin(), raised.records.end());
  }

  d.steps.push_back({ds, {}});
  d.steps.push_back({ss.result, ss.records});
  d.steps.push_back({lf.result, lf.records});
  check_derivation(d);
  return d;
}

Formula recover_formula(const FRepresentation& f, const SString& lf) {
  const MovementConfig cfg = default_movement_config();
  SString flat = without_brackets(lf);
  Items& items = flat.items;

  std::set<std::string> used;
  for (const auto& r : f.lexical) used.insert(r.symbol);
  std::vector<ChainLink> links;
  std::map<int, std::string> var_of;

  std::size_t p = 0;
  for (; p < items.size() && items[p].kind == Item::Kind::indexed; ++p) {
    const Item& it = items[p];
    const QuantifierWord* qw = find_quantifier_word(lower(it.text));
    if (!qw) break;  // a topicalized constituent, restored below
    const Item* t = partner_trace(flat, it);
    if (!t || t->trace != TraceKind::x) unrecoverable(it.text, "raised item without an x-trace");
    std::string var;
    const auto* r = f.by_word(it.text);
    if (r && is_variable_name(r->symbol) &&
        std::none_of(links.begin(), links.end(), [&](const ChainLink& l) { return l.var == r->symbol; }))
      var = r->symbol;
    if (var.empty()) var = fresh_variable(used);
    used.insert(var);
    std::optional<Formula> restrictor;
    if (const auto* sort = sort_referent(f, qw->animate))
      restrictor = Formula::membership(Term::variable(var), sort->symbol);
    else if (qw->animate || qw->binder == Binder::wh)
      unrecoverable(it.text, "no sort predicate in the lexical referents");
    links.push_back({qw->binder, var, restrictor});
    var_of[it.index] = var;
  }

  bool wh = std::any_of(links.begin(), links.end(), [](const ChainLink& l) { return l.binder == Binder::wh; });
  if (wh && p < items.size() && items[p].kind == Item::Kind::word && cfg.auxiliaries.count(lower(items[p].text))) ++p;

  // Put topicalized constituents back at their traces.
  Items core(items.begin() + static_cast<long>(p), items.end());
  for (std::size_t i = 0; i < core.size();) {
    if (core[i].kind != Item::Kind::indexed) {
      ++i;
      continue;
    }
    std::size_t tp = position_of_index(core, Item::Kind::trace, core[i].index);
    if (tp == core.size() || core[tp].trace != TraceKind::t) unrecoverable(core[i].text, "indexed item without a t-trace");
    core[tp] = Item::word(core[i].text);
    core.erase(core.begin() + static_cast<long>(i));
  }

  auto term = [&](const Item& it) {
    if (it.kind == Item::Kind::trace) {
      auto v = var_of.find(it.index);
      if (v == var_of.end() || it.trace != TraceKind::x) unrecoverable(render(SString{Level::LF, {it}}), "unbound trace");
      return Term::variable(v->second);
    }
    const auto* r = f.by_word(it.text);
    if (!r || is_variable_name(r->symbol)) unrecoverable(it.text, "no lexical referent names this word");
    return Term::constant(r->symbol);
  };
  auto predicate = [&](const Item& it) {
    const auto* r = it.kind == Item::Kind::word ? f.by_word(it.text) : nullptr;
    if (!r) unrecoverable(it.kind == Item::Kind::word ? it.text : render(SString{Level::LF, {it}}),
                          "no lexical referent names this predicate");
    return r->symbol;
  };

  Formula matrix = Formula::proposition("T");
  if (core.size() == 2) {
    matrix = Formula::membership(term(core[0]), predicate(core[1]));
  } else if (core.size() == 3 && core[1].kind == Item::Kind::word && lower(core[1].text) == "is" && !f.by_word("is")) {
    matrix = Formula::membership(term(core[0]), predicate(core[2]));
  } else if (core.size() == 3) {
    matrix = Formula::membership(term(core[0]), predicate(core[1]), term(core[2]));
  } else {
    unrecoverable(render(lf), "expected subject, predicate and optional object");
  }
  return assemble_chain(links, matrix);
}

CompareReport compare(const FRepresentation& f) {
  CompareReport r;
  std::vector<Formula> readings;
  try {
    readings = resolve_scope(f);
    r.reading_count = readings.size();
    r.reading = render_formula(canonicalize(readings.front()));
    r.p = derive_p(f);
    r.t = derive_t(r.p.steps.front().sstring, Force{f.force.mood, emphasis_word(f)});
    Formula recovered = canonicalize(recover_formula(f, r.t.steps.back().sstring));
    r.recovered = render_formula(recovered);
    for (std::size_t i = 0; i < readings.size(); ++i)
      if (alpha_equivalent(canonicalize(readings[i]), recovered)) r.matching_readings.push_back(i);
    r.lf_agrees = !r.matching_readings.empty() && r.matching_readings.front() == 0;
    r.records_identical = r.p.steps[1].records == r.t.steps[1].records;
  } catch (const PipelineError& e) {
    if (e.kind() == PipelineError::Kind::unlexicalizable_node && e.subject() == "ProbAssertion") r.formal_only = true;
    r.failure = e.what();
  } catch (const std::exception& e) {
    r.failure = e.what();
  }
  return r;
}

nlohmann::json derivation_to_json(const Derivation& d) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : d.steps) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : s.records) records.push_back(record_to_json(rec));
    steps.push_back({{"level", level_name(s.sstring.level)},
                     {"rendered", render(s.sstring)},
                     {"stripped", strip(s.sstring)},
                     {"records", records}});
  }
  return {{"model", derivation_model_name(d.model)}, {"steps", steps}, {"warnings", d.warnings}};
}

std::string derivation_to_text(const Derivation& d) {
  std::ostringstream out;
  out << "model: " << derivation_model_name(d.model) << "\n";
  for (const auto& w : d.warnings) out << "warning: " << w << "\n";
  for (const auto& s : d.steps) {
    out << level_name(s.sstring.level) << ": " << render(s.sstring) << "\n";
    for (const auto& rec : s.records)
      out << "  move: " << rec.operation << " " << rec.index << " (" << rec.source << " -> " << rec.target << ")\n";
    out << "  strip: " << strip(s.sstring) << "\n";
  }
  return out.str();
}

std::string derivation_to_dot(const Derivation& d) {
  std::ostringstream out;
  out << "digraph \"derivation\" {\n  rankdir=LR;\n  label=\"" << derivation_model_name(d.model) << "-model\";\n";
  for (std::size_t k = 0; k < d.steps.size(); ++k) {
    const SString& s = d.steps[k].sstring;
    out << "  subgraph cluster_" << k << " {\n    label=\"" << level_name(s.level) << "\";\n";
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
      out << "    s" << k << "n" << p << " [label=\"" << label << "\""
          << (it.kind == Item::Kind::trace ? ", shape=box" : "") << "];\n";
    }
    for (std::size_t p = 1; p < s.items.size(); ++p)
      out << "    s" << k << "n" << p - 1 << " -> s" << k << "n" << p << ";\n";
    for (const auto& [i, pos] : s.coindex())
      out << "    s" << k << "n" << pos.second << " -> s" << k << "n" << pos.first
          << " [style=dashed, constraint=false, label=\"" << i << "\"];\n";
    out << "  }\n";
  }
  for (std::size_t k = 1; k < d.steps.size(); ++k) {
    if (d.steps[k - 1].sstring.items.empty() || d.steps[k].sstring.items.empty()) continue;
    std::string label;
    for (const auto& rec : d.steps[k].records) label += (label.empty() ? "" : "\\n") + rec.operation;
    out << "  s" << k - 1 << "n0 -> s" << k << "n0 [style=bold, label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

nlohmann::json compare_to_json(const CompareReport& r) {
  nlohmann::json j{{"formal_only", r.formal_only},
                   {"reading", r.reading},
                   {"recovered", r.recovered},
                   {"lf_agrees", r.lf_agrees},
                   {"records_identical", r.records_identical},
                   {"matching_readings", r.matching_readings},
                   {"reading_count", r.reading_count}};
  j["failure"] = r.failure ? nlohmann::json(*r.failure) : nlohmann::json(nullptr);
  if (!r.failure) {
    j["p"] = derivation_to_json(r.p);
    j["t"] = derivation_to_json(r.t);
  }
  return j;
}

}  // namespace pmodel
