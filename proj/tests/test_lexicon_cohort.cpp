#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pmodel/lexicon_cohort.hpp"

using namespace pmodel;

namespace {

const std::string corpus_dir = PMODEL_CORPUS_DIR;

Lexicon small() {
  return Lexicon({{"feather", "N", {}, 2, {}},
                  {"feature", "N", {}, 8, {}},
                  {"fear", "N", {}, 13, {}},
                  {"saw", "V", {}, 60, {}},
                  {"saw", "N", {}, 4, {}}});
}

// Distance by plain recursion over the three edits, memoized on suffix pairs.
std::size_t oracle_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    if (memo[i][j] >= 0) return static_cast<std::size_t>(memo[i][j]);
    std::size_t best = std::min({go(i + 1, j) + 1, go(i, j + 1) + 1, go(i + 1, j + 1) + (a[i] != b[j])});
    memo[i][j] = static_cast<int>(best);
    return best;
  };
  return go(0, 0);
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> corpus_sentences() {
  std::ifstream in(corpus_dir + "/recognize.txt");
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

std::vector<std::string> forms_of(const Recognition& r) {
  std::vector<std::string> out;
  for (const auto& e : recognized_entries(r)) out.push_back(e.form);
  return out;
}

}  // namespace

TEST_CASE("access collects the prefix cohort") {
  Lexicon lex = small();
  Cohort c = access(lex, "fea");
  std::vector<std::string> forms;
  for (const auto& e : c.members) forms.push_back(e.form);
  CHECK(forms == std::vector<std::string>{"fear", "feature", "feather"});
  CHECK(access(lex, "").members.size() == lex.size());
  CHECK(access(lex, "zz").members.empty());
}

TEST_CASE("select ranks by distance, then frequency, then form") {
  Lexicon lex = small();
  auto ranked = select(access(lex, "fea"), "feathr");
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].entry.form == "feather");
  CHECK(ranked[0].distance == 1);
  for (const auto& c : ranked) CHECK(c.distance == oracle_distance("feathr", c.entry.form));

  auto exact = select(access(lex, ""), "fear");
  CHECK(exact[0].entry.form == "fear");
  CHECK(exact[0].distance == 0);
  CHECK(select(Cohort{}, "fear").empty());

  auto saws = select(access(lex, "s"), "saw");
  REQUIRE(saws.size() == 2);
  CHECK(saws[0].entry.category == "V");  // same distance, more frequent
}

TEST_CASE("integrate filters by category after selection") {
  Lexicon lex = small();
  auto ranked = select(access(lex, "s"), "saw");
  auto verbs = integrate(ranked, {"V"});
  REQUIRE(verbs.size() == 1);
  CHECK(verbs[0].entry.category == "V");
  CHECK(integrate(ranked, {"V", "N"}) == ranked);
  CHECK(integrate(ranked, {"P"}).empty());
}

TEST_CASE("edit distance agrees with the recursive oracle") {
  std::mt19937 rng(3);
  const std::string alphabet = "ab#c";
  for (int i = 0; i < 2000; ++i) {
    std::string a, b;
    for (std::size_t n = rng() % 8; n > 0; --n) a += alphabet[rng() % alphabet.size()];
    for (std::size_t n = rng() % 8; n > 0; --n) b += alphabet[rng() % alphabet.size()];
    CHECK(edit_distance(a, b) == oracle_distance(a, b));
  }
}

TEST_CASE("lexicon file format") {
  Lexicon lex = parse_lexicon("# comment\nsaw\tV\tpast,perception\t60\tS\nfear\tN\t\t13\n");
  REQUIRE(lex.size() == 2);
  CHECK(lex.entries()[0].features == std::set<std::string>{"past", "perception"});
  CHECK(lex.entries()[0].symbol == "S");
  CHECK_FALSE(lex.entries()[1].symbol);

  auto line_of = [](const char* text) {
    try {
      parse_lexicon(text);
    } catch (const LexiconError& e) {
      return e.line();
    }
    return std::size_t(999);
  };
  CHECK(line_of("saw\tV\n") == 1);
  CHECK(line_of("saw\tV\t\t60\nfear\tN\t\tmany\n") == 2);
  CHECK(line_of("saw\tV\t\t60\nsaw\tV\t\t3\n") == 0);
  CHECK_THROWS_AS(parse_lexicon("s#w\tV\t\t1\n"), LexiconError);
  CHECK_THROWS_AS(load_lexicon("/nonexistent/lexicon.tsv"), LexiconError);
}

TEST_CASE("recognize the corrupted example sentence") {
  Lexicon lex = load_lexicon(corpus_dir + "/lexicon.tsv");
  CHECK(lex.size() >= 20);
  Recognition r = recognize(lex, {"Jon#s", "s#w", "ever#one"});
  CHECK(forms_of(r) == std::vector<std::string>{"Jones", "saw", "everyone"});
  for (const auto& s : r.slots) CHECK(s.best->distance == 1);

  Recognition clean = recognize(lex, {"Jones", "saw", "everyone"});
  for (const auto& s : clean.slots) CHECK(s.best->distance == 0);

  Recognition lost = recognize(lex, {"Jones", "####"});
  CHECK_FALSE(lost.complete());
  CHECK(lost.failed_slots() == std::vector<std::size_t>{1});
  CHECK(lost.slots[0].best->entry.form == "Jones");
  try {
    recognized_entries(lost);
    FAIL("expected NoCandidate");
  } catch (const NoCandidate& e) {
    CHECK(e.slots() == std::vector<std::size_t>{1});
  }
  CHECK_THROWS_AS(recognize(lex, {}), std::invalid_argument);
}

TEST_CASE("expected categories pick between homographs") {
  Lexicon lex = load_lexicon(corpus_dir + "/lexicon.tsv");
  std::vector<std::optional<std::set<std::string>>> expect{std::nullopt, std::set<std::string>{"N"}};
  Recognition r = recognize(lex, {"the", "s#w"}, expect);
  CHECK(r.slots[1].best->entry.category == "N");
  CHECK(recognize(lex, {"the", "s#w"}).slots[1].best->entry.category == "V");
  CHECK_FALSE(recognize(lex, {"s#w"}, {std::set<std::string>{"P"}}).complete());
}

TEST_CASE("every single unheard grapheme is recovered") {
  Lexicon lex = load_lexicon(corpus_dir + "/lexicon.tsv");
  for (const auto& e : lex.entries())
    for (std::size_t i = 0; i < e.form.size(); ++i) {
      std::string token = e.form;
      token[i] = kUnheard;
      INFO(token);
      Recognition r = recognize(lex, {token});
      REQUIRE(r.complete());
      CHECK(r.slots[0].best->entry.form == e.form);
      // Independent check: any other cohort form at distance 1 loses the
      // frequency tie-break.
      CHECK(oracle_distance(token, e.form) == 1);
      for (const auto& other : lex.entries())
        if (other.form != e.form && std::string_view(other.form).starts_with(heard_prefix(token)))
          CHECK((oracle_distance(token, other.form) > 1 || other.frequency < e.frequency));
    }
}

TEST_CASE("corpus sentences: identity when clean, recovered with one unheard grapheme per word") {
  Lexicon lex = load_lexicon(corpus_dir + "/lexicon.tsv");
  auto sentences = corpus_sentences();
  REQUIRE(sentences.size() >= 10);
  std::mt19937 rng(11);
  for (const auto& s : sentences) {
    INFO(s);
    auto ws = words(s);
    CHECK(forms_of(recognize(lex, ws)) == ws);
    for (int k = 0; k < 50; ++k) {
      auto noisy = ws;
      for (auto& w : noisy) w[rng() % w.size()] = kUnheard;
      CHECK(forms_of(recognize(lex, noisy)) == ws);
    }
  }
}

TEST_CASE("cohorts shrink as the prefix grows") {
  Lexicon lex = load_lexicon(corpus_dir + "/lexicon.tsv");
  std::mt19937 rng(23);
  const std::string alphabet = "aehiorstJMw";
  for (int i = 0; i < 1000; ++i) {
    std::string p;
    for (std::size_t n = rng() % 3; n > 0; --n) p += alphabet[rng() % alphabet.size()];
    std::string q = p;
    for (std::size_t n = 1 + rng() % 3; n > 0; --n) q += alphabet[rng() % alphabet.size()];
    auto wide = access(lex, p).members;
    for (const auto& m : access(lex, q).members) CHECK(std::find(wide.begin(), wide.end(), m) != wide.end());
  }
}

TEST_CASE("recognition is deterministic") {
  Lexicon lex = load_lexicon(corpus_dir + "/lexicon.tsv");
  std::vector<std::string> tokens{"#o", "fe#", "th#", "s###"};
  Recognition a = recognize(lex, tokens);
  Recognition b = recognize(lex, tokens);
  REQUIRE(a.slots.size() == b.slots.size());
  for (std::size_t i = 0; i < a.slots.size(); ++i) CHECK(a.slots[i].ranked == b.slots[i].ranked);
}
