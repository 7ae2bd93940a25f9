// Acceptance suite: one PASS/FAIL line per criterion, with its runtime.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gardenpath_corpus.hpp"
#include "movement_corpus.hpp"
#include "pmodel/formal_lang.hpp"
#include "pmodel/frep.hpp"
#include "pmodel/gardenpath.hpp"
#include "pmodel/lexicon_cohort.hpp"
#include "pmodel/movement.hpp"
#include "pmodel/pipeline.hpp"
#include "test_support.hpp"

using namespace pmodel;

namespace {

const std::string corpus_dir = PMODEL_CORPUS_DIR;

// Collects the first few failures of one criterion.
struct Failures {
  std::vector<std::string> messages;
  std::size_t count = 0;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    if (++count <= 5) messages.push_back(what);
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    if (got == want) return;
    std::ostringstream s;
    s << what << ": got \"" << got << "\", want \"" << want << "\"";
    check(false, s.str());
  }
};

SString ss(const std::string& text) { return parse_sstring(text, Level::SS); }
SString lf(const std::string& text) { return parse_sstring(text, Level::LF); }
SString ds(const std::string& text) { return parse_sstring(text, Level::DS); }

const Force declarative{};
const Force interrogative{Mood::interrogative, std::nullopt};

std::string rendered_step(const Derivation& d, Level level) {
  for (const auto& s : d.steps)
    if (s.sstring.level == level) return render(s.sstring);
  return "<missing>";
}

std::size_t first_quantifier(const SString& s) {
  for (std::size_t p = 0; p < s.items.size(); ++p)
    if (s.items[p].is_word_like() && is_quantifier_word(s.items[p].text, default_movement_config())) return p;
  return s.items.size();
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// 1 ---------------------------------------------------------------------------

void examples(Failures& f) {
  // Quantifier raising.
  f.equal(render(quantifier_raise(ss("Jones saw everyone"), 2).result), "[ Everyone_1 [ Jones saw x_1 ] ]",
          "raise 'Jones saw everyone'");
  f.equal(rendered_step(derive_t(ds("y_1 Jones saw everyone_1"), declarative), Level::LF),
          "[ Everyone_1 [ Jones saw x_1 ] ]", "T-model LF of 'Jones saw everyone'");

  // Wh question through the T-model.
  Derivation t = derive_t(ds("y_1 did Jones see who_1 ?"), interrogative);
  f.equal(rendered_step(t, Level::SS), "[CP Who_1 did [IP Jones see t_1]] ?", "T-model S-structure of the question");
  f.equal(rendered_step(t, Level::LF), "[CP Who_1 did [IP Jones see x_1]] ?", "T-model LF of the question");
  f.equal(render(wh_raise(ss("[CP Who_1 did [IP Jones see t_1]] ?")).result), "[CP Who_1 did [IP Jones see x_1]] ?",
          "wh_raise");

  // Quantifier lowering and the emphasis form.
  f.equal(render(quantifier_lower(lf("[ Everyone_1 [ Jones saw x_1 ] ]")).result), "y_1 Jones saw everyone_1",
          "quantifier_lower");
  FRepresentation jones_saw_everyone = load_frep(corpus_dir + "/jones_saw_everyone.frep.json");
  Derivation p = derive_p(jones_saw_everyone);
  f.equal(rendered_step(p, Level::DS), "y_1 Jones saw everyone_1", "P-model D-structure");
  f.equal(strip(p.steps.back().sstring), "Jones saw everyone", "P-model S-structure");
  FRepresentation emphasized = jones_saw_everyone;
  emphasized.force.emphasis = "everyone";
  f.equal(strip(derive_p(emphasized).steps.back().sstring), "Everyone Jones saw", "P-model emphasis form");

  // Wh lowering, then the question.
  Moved lowered = wh_lower(lf("[CP Who_1 did [IP Jones see x_1]] ?"));
  f.equal(render(lowered.result), "y_1 did Jones see who_1 ?", "wh_lower");
  f.equal(strip(apply_emphasis(lowered.result, interrogative, {}).result), "Who did Jones see?",
          "question from the lowered D-structure");
  Derivation pw = derive_p(load_frep(corpus_dir + "/wh.frep.json"));
  f.equal(rendered_step(pw, Level::DS), "y_1 did Jones see who_1 ?", "P-model Wh D-structure");
  f.equal(strip(pw.steps.back().sstring), "Who did Jones see?", "P-model Wh S-structure");

  // Probability assertion.
  Formula prob = parse_formula("prob(snow) = 4/5");
  f.equal(render_formula(prob), "prob(snow) = 4/5", "probability round trip");
  std::ifstream in(corpus_dir + "/singleton.model.json");
  Model m = model_from_json(nlohmann::json::parse(in));
  f.check(evaluate(prob, m), "prob(snow) = 4/5 is false on the model recording snow at 4/5");
  f.check(!evaluate(parse_formula("prob(snow) = 1/2"), m), "prob(snow) = 1/2 holds on the same model");
}

// 2 ---------------------------------------------------------------------------

// Direct loops over the model, independent of evaluate().
bool forall_exists(const Model& m) {
  const auto& h = m.predicates.at("H");
  const auto& s = m.relations.at("S");
  for (const auto& x : m.domain) {
    if (!h.count(x)) continue;
    bool some = false;
    for (const auto& y : m.domain) some = some || (h.count(y) && s.count({x, y}));
    if (!some) return false;
  }
  return true;
}

bool exists_forall(const Model& m) {
  const auto& h = m.predicates.at("H");
  const auto& s = m.relations.at("S");
  for (const auto& y : m.domain) {
    if (!h.count(y)) continue;
    bool all = true;
    for (const auto& x : m.domain) all = all && (!h.count(x) || s.count({x, y}));
    if (all) return true;
  }
  return false;
}

void scope(Failures& f) {
  FRepresentation amb = load_frep(corpus_dir + "/scope.frep.json");
  auto readings = resolve_scope(amb);
  f.equal(readings.size(), 2u, "readings without a declarant");
  f.equal(resolve_scope(load_frep(corpus_dir + "/scope_ordered.frep.json")).size(), 1u,
          "readings with a scope_order declarant");
  if (readings.size() != 2) return;

  // Identify the readings by what they mean rather than by position.
  std::vector<std::string> domain(testing::entity_names.begin(), testing::entity_names.end());
  const Formula* ae = nullptr;
  const Formula* ea = nullptr;
  for (const auto& r : readings) {
    bool is_ae = true, is_ea = true;
    for (int n = 1; n <= 2; ++n)
      for (const auto& m : testing::all_models({domain.begin(), domain.begin() + n}, {"H"}, {"S"}, {})) {
        is_ae = is_ae && evaluate(r, m) == forall_exists(m);
        is_ea = is_ea && evaluate(r, m) == exists_forall(m);
      }
    if (is_ae) ae = &r;
    if (is_ea) ea = &r;
  }
  f.check(ae && ea && ae != ea, "readings are not the forall-exists and exists-forall pair");
  if (!ae || !ea) return;

  bool separated = false;
  for (int n = 1; n <= 2 && !separated; ++n)
    for (const auto& m : testing::all_models({domain.begin(), domain.begin() + n}, {"H"}, {"S"}, {}))
      if (evaluate(*ae, m) != evaluate(*ea, m)) separated = true;
  f.check(separated, "no model with at most 2 entities separates the readings");

  std::size_t models = 0;
  for (int n = 1; n <= 3; ++n)
    for (const auto& m : testing::all_models({domain.begin(), domain.begin() + n}, {"H"}, {"S"}, {})) {
      ++models;
      if (evaluate(*ea, m)) f.check(evaluate(*ae, m), "exists-forall holds but forall-exists fails");
    }
  f.check(models == 4 + 64 + 4096, "unexpected number of models up to 3 entities");
}

// 3 ---------------------------------------------------------------------------

void movement_round_trips(Failures& f) {
  auto quantified = testing::quantifier_sentences();
  auto wh = testing::wh_sentences();
  f.check(quantified.size() + wh.size() >= 25, "fewer than 25 generated sentences");

  for (const auto& text : quantified) {
    SString s = ss(text);
    Moved raised = quantifier_raise(s, first_quantifier(s));
    // lower, then back to the surface: identity on S-structure.
    SString surface = apply_emphasis(quantifier_lower(raised.result).result, declarative, {}).result;
    f.check(equivalent_mod_indices(surface, s), "lower after raise: " + text);
    f.check(lowercase(strip(surface)) == lowercase(strip(s)), "stripped words changed: " + text);
    // raise after lower: identity on LF.
    SString again = quantifier_raise(surface, first_quantifier(surface)).result;
    f.check(equivalent_mod_indices(again, raised.result), "raise after lower: " + text);
  }
  for (const auto& text : wh) {
    SString s = ss(text);
    Moved raised = wh_raise(s);
    SString back = apply_emphasis(wh_lower(raised.result).result, interrogative, {}).result;
    f.check(equivalent_mod_indices(back, s), "wh lower after raise: " + text);
    f.check(equivalent_mod_indices(wh_raise(back).result, raised.result), "wh raise after lower: " + text);
  }

  std::mt19937 rng(20261018);
  for (int i = 0; i < 1000; ++i) {
    std::size_t q = 0;
    SString s = testing::random_quantifier_ss(rng, q);
    auto words = word_multiset(s);
    std::string at = render(s);
    Moved r = quantifier_raise(s, q);
    f.check(word_multiset(r.result) == words, "quantifier_raise changed the words of " + at);
    Moved l = quantifier_lower(r.result);
    f.check(word_multiset(l.result) == words, "quantifier_lower changed the words of " + at);
    auto surface = words_of(s);
    Moved e = apply_emphasis(l.result, Force{Mood::declarative, surface[rng() % surface.size()]}, {});
    f.check(word_multiset(e.result) == words, "apply_emphasis changed the words of " + at);

    SString w = testing::random_wh_ss(rng);
    auto wwords = word_multiset(w);
    Moved wr = wh_raise(w);
    f.check(word_multiset(wr.result) == wwords, "wh_raise changed the words of " + render(w));
    Moved wl = wh_lower(wr.result);
    f.check(word_multiset(wl.result) == wwords, "wh_lower changed the words of " + render(w));
    f.check(word_multiset(apply_emphasis(wl.result, interrogative, {}).result) == wwords,
            "interrogative apply_emphasis changed the words of " + render(w));
  }
}

// 4 ---------------------------------------------------------------------------

// Truth tables of Sheffer-only subformulas in a direct-mapped table keyed by
// node identity. Each slot holds its formula, so an address cannot be reused
// while cached; a collision just evicts.
class ShefferTables {
 public:
  ShefferTables() : slots_(kSlots) {}

  // Empty when anything but an atom or a Sheffer stroke occurs.
  std::optional<std::uint8_t> of(const Formula& f) {
    Slot& slot = slots_[(reinterpret_cast<std::uintptr_t>(f.id()) >> 4) & (kSlots - 1)];
    if (slot.formula && slot.formula->id() == f.id()) return slot.table;
    std::uint8_t t = 0;
    if (f.as<Formula::Proposition>()) {
      t = testing::truth_table(f);
    } else if (auto b = f.as<Formula::Binary>(); b && b->op == Connective::sheffer) {
      auto l = of(b->lhs);
      auto r = l ? of(b->rhs) : std::nullopt;
      if (!r) return std::nullopt;
      t = static_cast<std::uint8_t>(~(*l & *r));
    } else {
      return std::nullopt;
    }
    // Only nodes held elsewhere can come back.
    if (f.shared()) slot = Slot{f, t};
    return t;
  }

 private:
  struct Slot {
    std::optional<Formula> formula;
    std::uint8_t table = 0;
  };
  static constexpr std::size_t kSlots = 1 << 16;
  std::vector<Slot> slots_;
};

void sheffer(Failures& f, std::size_t& checked) {
  // Formulas up to depth 3 are materialized; depth 4 is streamed from them.
  auto level = testing::connective_formulas(3);
  std::vector<std::uint8_t> tables;
  tables.reserve(level.size());
  for (const auto& g : level) tables.push_back(testing::truth_table(g));

  ShefferTables oracle;
  auto verify = [&](const Formula& g, std::uint8_t want) {
    ++checked;
    Formula s = to_sheffer(g);
    auto got = oracle.of(s);
    if (!got) f.check(false, "connective left in " + render_formula(s));
    else if (*got != want) f.check(false, "truth table differs for " + render_formula(g));
  };

  for (const auto& a : testing::atom_names) {
    Formula g = Formula::proposition(a);
    verify(g, testing::truth_table(g));
  }
  for (std::size_t i = 0; i < level.size(); ++i)
    verify(Formula::negation(level[i]), static_cast<std::uint8_t>(~tables[i]));
  for (auto op : {Connective::conj, Connective::disj, Connective::implies})
    for (std::size_t i = 0; i < level.size(); ++i)
      for (std::size_t j = 0; j < level.size(); ++j) {
        std::uint8_t l = tables[i], r = tables[j];
        std::uint8_t want = op == Connective::conj   ? l & r
                            : op == Connective::disj ? l | r
                                                     : static_cast<std::uint8_t>(~l | r);
        verify(Formula::binary(op, level[i], level[j]), want);
      }
}

// 5 ---------------------------------------------------------------------------

void consistency(Failures& f, std::size_t& derived, std::size_t& formal_only) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir))
    if (e.path().string().ends_with(".frep.json")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  f.check(!files.empty(), "no F-representations in the corpus");

  for (const auto& path : files) {
    const std::string name = path.filename().string();
    FRepresentation fr = load_frep(path.string());
    Derivation p;
    try {
      p = derive_p(fr);
    } catch (const PipelineError& e) {
      // A probability statement has no sentence to derive.
      bool prob = e.kind() == PipelineError::Kind::unlexicalizable_node && e.subject() == "ProbAssertion";
      f.check(prob, name + ": " + e.what());
      if (prob) ++formal_only;
      continue;
    }
    ++derived;
    Derivation t = derive_t(p.steps.front().sstring, Force{fr.force.mood, emphasis_word(fr)});
    Formula recovered = canonicalize(recover_formula(fr, t.steps.back().sstring));
    // The derivation lexicalizes the first reading; with one reading that is
    // the F-string itself.
    Formula want = canonicalize(resolve_scope(fr).front());
    f.check(alpha_equivalent(recovered, want),
            name + ": recovered " + render_formula(recovered) + ", want " + render_formula(want));
    if (!fr.declarants.scope_order && resolve_scope(fr).size() == 1)
      f.check(alpha_equivalent(recovered, canonicalize(fr.string)), name + ": recovered formula is not the F-string");
    f.check(p.steps[1].records == t.steps[1].records, name + ": D-to-S movement records differ");
    f.check(strip(p.steps[1].sstring) == strip(t.steps[1].sstring), name + ": S-structures differ");
  }
}

// 6 ---------------------------------------------------------------------------

void gardenpath(Failures& f, std::size_t& sentences, std::size_t& succeeded) {
  Grammar g = load_grammar(corpus_dir + "/grammar.txt");
  auto all = testing::gardenpath_sentences(corpus_dir + "/gardenpath.txt");
  auto generated = testing::generated_sentences(g, 10);
  all.insert(all.end(), generated.begin(), generated.end());
  sentences = all.size();

  for (const auto& s : all) {
    if (s.size() > kOracleBound) continue;
    auto r = parse_incremental(s, g);
    if (!r.ok()) continue;
    ++succeeded;
    auto parses = enumerate_parses(s, g);
    std::string text;
    for (const auto& w : s) text += (text.empty() ? "" : " ") + w;
    if (parses.empty()) {
      f.check(false, text + ": incremental tree but no parse");
      continue;
    }
    std::size_t best = parses.front().node_count();
    for (const auto& p : parses) best = std::min(best, p.node_count());
    f.check(r.tree->node_count() == best, text + ": not a minimal tree");
  }

  // Late Closure: two attachments of equal cost, the recent phrase wins.
  auto words = testing::split_words("Jones saw the man with the telescope");
  auto parses = enumerate_parses(words, g);
  f.check(parses.size() == 2 && parses[0].node_count() == parses[1].node_count(),
          "telescope sentence is not an equal-cost ambiguity");
  ParserState st;
  for (std::size_t i = 0; i < 4; ++i) st = step(st, words[i], g);
  f.check(step(st, "with", g).nodes_postulated - st.nodes_postulated == 2, "PP attachment cost is not two nodes");
  auto r = parse_incremental(words, g);
  f.check(r.ok() && to_bracketed(*r.tree) ==
                        "(S (NP Jones) (VP (Vt saw) (NP (NP (Det the) (N man)) (PP (P with) (NP (Det the) (N "
                        "telescope))))))",
          "PP did not attach to the most recent phrase");

  f.check(is_garden_path(testing::split_words("the horse raced past the barn fell"), g),
          "no garden path on the reduced relative");
}

// 7 ---------------------------------------------------------------------------

std::vector<std::string> forms_of(const Recognition& r) {
  std::vector<std::string> out;
  for (const auto& s : r.slots) out.push_back(s.best ? s.best->entry.form : "<none>");
  return out;
}

void recovery(Failures& f, std::size_t& corrupted) {
  Lexicon lex = load_lexicon(corpus_dir + "/lexicon.tsv");
  f.check(lex.size() >= 20, "lexicon has fewer than 20 entries");

  // Every word of the lexicon with each single grapheme unheard.
  for (const auto& e : lex.entries())
    for (std::size_t i = 0; i < e.form.size(); ++i) {
      std::string token = e.form;
      token[i] = kUnheard;
      ++corrupted;
      f.equal(forms_of(recognize(lex, {token})).front(), e.form, "recognize " + token);
    }

  // Whole corpus sentences: clean, then every position swept per word, then random.
  std::ifstream in(corpus_dir + "/recognize.txt");
  std::mt19937 rng(7);
  for (std::string line; std::getline(in, line);) {
    auto ws = testing::split_words(line);
    if (ws.empty()) continue;
    f.check(forms_of(recognize(lex, ws)) == ws, "clean sentence changed: " + line);
    std::size_t longest = 0;
    for (const auto& w : ws) longest = std::max(longest, w.size());
    for (std::size_t k = 0; k < longest + 50; ++k) {
      auto noisy = ws;
      for (auto& w : noisy) w[k < longest ? k % w.size() : rng() % w.size()] = kUnheard;
      ++corrupted;
      f.check(forms_of(recognize(lex, noisy)) == ws, "not recovered: " + line);
    }
  }

  // Monotone cohorts.
  const std::string alphabet = "aehiorstJMw";
  for (int i = 0; i < 1000; ++i) {
    std::string p;
    for (std::size_t n = rng() % 3; n > 0; --n) p += alphabet[rng() % alphabet.size()];
    std::string q = p;
    for (std::size_t n = 1 + rng() % 3; n > 0; --n) q += alphabet[rng() % alphabet.size()];
    auto wide = access(lex, p).members;
    for (const auto& m : access(lex, q).members)
      f.check(std::find(wide.begin(), wide.end(), m) != wide.end(), "cohort of '" + q + "' not within '" + p + "'");
  }
}

struct Criterion {
  int number;
  std::string title;
  double budget_seconds;  // 0 for no limit
  std::function<std::string(Failures&)> run;
};

}  // namespace

int main() {
  std::size_t sheffer_count = 0, derived = 0, formal_only = 0, gp_sentences = 0, gp_ok = 0, corrupted = 0;
  std::vector<Criterion> criteria{
      {1, "worked examples", 1.0, [](Failures& f) { examples(f); return std::string(); }},
      {2, "scope readings", 5.0, [](Failures& f) { scope(f); return std::string(); }},
      {3, "movement round trips", 10.0,
       [](Failures& f) {
         movement_round_trips(f);
         return std::to_string(testing::quantifier_sentences().size() + testing::wh_sentences().size()) +
                " sentences, 1000 fuzzed";
       }},
      {4, "Sheffer equivalence", 30.0,
       [&](Failures& f) {
         sheffer(f, sheffer_count);
         return std::to_string(sheffer_count) + " formulas";
       }},
      {5, "P/T consistency", 0.0,
       [&](Failures& f) {
         consistency(f, derived, formal_only);
         return std::to_string(derived) + " derived, " + std::to_string(formal_only) + " formal-only";
       }},
      {6, "garden-path minimality", 30.0,
       [&](Failures& f) {
         gardenpath(f, gp_sentences, gp_ok);
         return std::to_string(gp_sentences) + " sentences, " + std::to_string(gp_ok) + " parsed incrementally";
       }},
      {7, "corrupted-input recovery", 5.0,
       [&](Failures& f) {
         recovery(f, corrupted);
         return std::to_string(corrupted) + " corrupted inputs";
       }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Failures f;
    std::string note;
    auto start = std::chrono::steady_clock::now();
    try {
      note = c.run(f);
    } catch (const std::exception& e) {
      f.check(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      std::ostringstream s;
      s << "over the " << c.budget_seconds << " s budget";
      f.check(false, s.str());
    }
    bool ok = f.count == 0;
    if (!ok) ++failed;
    std::printf("%s %d %s (%.3f s)%s%s\n", ok ? "PASS" : "FAIL", c.number, c.title.c_str(), secs,
                note.empty() ? "" : ": ", note.c_str());
    for (const auto& m : f.messages) std::printf("    %s\n", m.c_str());
    if (f.count > f.messages.size()) std::printf("    ... %zu failures in all\n", f.count);
  }
  return failed ? 1 : 0;
}
