#include "pmodel/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "pmodel/formal_lang.hpp"
#include "pmodel/frep.hpp"
#include "pmodel/gardenpath.hpp"
#include "pmodel/lexicon_cohort.hpp"
#include "pmodel/pipeline.hpp"

#ifndef PMODEL_DEFAULT_CORPUS_DIR
#define PMODEL_DEFAULT_CORPUS_DIR "corpus"
#endif

namespace pmodel::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

Mood parse_mood(const std::string& s) {
  auto m = mood_from_name(s);
  if (!m) throw UsageError("unknown force '" + s + "'");
  return *m;
}

std::string frep_text(const FRepresentation& f) {
  std::ostringstream out;
  std::vector<std::string> parts;
  for (const auto& [w, id] : f.external) parts.push_back(w + "=" + std::to_string(id));
  out << "external: " << join(parts, ", ") << "\n";
  parts.clear();
  for (const auto& r : f.lexical) parts.push_back(r.symbol + "=" + r.word + " (" + category_name(r.category) + ")");
  out << "lexical: " << join(parts, ", ") << "\n";
  parts.clear();
  for (const auto& [v, s] : f.declarants.parameters) parts.push_back(v + " in " + s);
  out << "declarants: " << calculus_name(f.declarants.calculus) << "; parameters " << (parts.empty() ? "-" : join(parts, ", "));
  if (f.declarants.scope_order) out << "; scope order " << join(*f.declarants.scope_order);
  out << "\n";
  out << "string: " << render_formula(f.string) << "\n";
  out << "force: " << mood_name(f.force.mood);
  if (f.force.emphasis) out << ", emphasis " << *f.force.emphasis;
  out << "\n";
  return out.str();
}

int run_corpus(const std::string& dir, std::size_t jobs, bool update, std::ostream& out, std::ostream& err);

}  // namespace

std::string corpus_dir() {
  if (const char* env = std::getenv("PMODEL_CORPUS_DIR"); env && *env) return env;
  return PMODEL_DEFAULT_CORPUS_DIR;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sentence derivations in the P-model and the T-model", "pmodel"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string text, path, model_path, format = "text", emphasis, force;
  std::vector<std::string> words;
  std::string expect;
  bool oracle = false, update = false;
  std::size_t jobs = 1;
  std::string dir;
  const auto text_json = CLI::IsMember({"text", "json"});
  const auto text_json_dot = CLI::IsMember({"text", "json", "dot"});

  // formal
  auto* formal = app.add_subcommand("formal", "Parse, evaluate and rewrite formulas");
  formal->require_subcommand(1);
  auto* fparse = formal->add_subcommand("parse", "Print the canonical form of a formula");
  fparse->add_option("formula", text, "Formula text")->required();
  fparse->add_option("--format", format)->check(text_json);
  fparse->callback([&] {
    action = [&] {
      Formula f = parse_formula(text);
      if (format == "json") out << formula_to_json(f).dump(2) << "\n";
      else out << render_formula(f) << "\n";
      return 0;
    };
  });
  auto* feval = formal->add_subcommand("eval", "Evaluate a closed formula in a model");
  feval->add_option("formula", text, "Formula text")->required();
  feval->add_option("--model", model_path, "Model JSON file")->required();
  feval->callback([&] {
    action = [&] {
      Model m = model_from_json(nlohmann::json::parse(read_file(model_path)));
      out << (evaluate(parse_formula(text), m) ? "true" : "false") << "\n";
      return 0;
    };
  });
  auto* fsheffer = formal->add_subcommand("sheffer", "Rewrite using the Sheffer stroke alone");
  fsheffer->add_option("formula", text, "Formula text")->required();
  fsheffer->callback([&] {
    action = [&] {
      out << render_formula(to_sheffer(parse_formula(text))) << "\n";
      return 0;
    };
  });

  // frep
  auto* frep = app.add_subcommand("frep", "Validate and print an F-representation");
  frep->add_option("file", path, "F-representation JSON file")->required();
  frep->add_option("--format", format)->check(text_json);
  frep->callback([&] {
    action = [&] {
      FRepresentation f = load_frep(path);
      if (format == "json") out << frep_to_json(f).dump(2) << "\n";
      else out << frep_text(f);
      return 0;
    };
  });

  // derive
  auto* derive = app.add_subcommand("derive", "Run a derivation");
  derive->require_subcommand(1);
  auto* dp = derive->add_subcommand("p", "F-representation to D-structure to S-structure");
  dp->add_option("file", path, "F-representation JSON file")->required();
  dp->add_option("--emphasis", emphasis, "Emphasized symbol or word, overriding the file");
  dp->add_option("--force", force, "declarative or interrogative, overriding the file");
  dp->add_option("--format", format)->check(text_json_dot);
  dp->callback([&] {
    action = [&] {
      FRepresentation f = load_frep(path);
      if (!force.empty()) f.force.mood = parse_mood(force);
      if (!emphasis.empty()) f.force.emphasis = emphasis;
      if (!force.empty() || !emphasis.empty()) {
        auto diags = validate_frep(f);
        if (!diags.empty()) throw FrepError(std::move(diags));
      }
      Derivation d = derive_p(f);
      if (format == "json") out << derivation_to_json(d).dump(2) << "\n";
      else if (format == "dot") out << derivation_to_dot(d);
      else out << derivation_to_text(d);
      return 0;
    };
  });
  auto* dt = derive->add_subcommand("t", "D-structure to S-structure to LF");
  dt->add_option("ds", text, "D-structure string")->required();
  dt->add_option("--force", force, "declarative or interrogative");
  dt->add_option("--emphasis", emphasis, "Emphasized word");
  dt->add_option("--format", format)->check(text_json_dot);
  dt->callback([&] {
    action = [&] {
      Force fo{force.empty() ? Mood::declarative : parse_mood(force),
               emphasis.empty() ? std::nullopt : std::optional<std::string>(emphasis)};
      Derivation d = derive_t(parse_sstring(text, Level::DS), fo);
      if (format == "json") out << derivation_to_json(d).dump(2) << "\n";
      else if (format == "dot") out << derivation_to_dot(d);
      else out << derivation_to_text(d);
      return 0;
    };
  });
  auto* dc = derive->add_subcommand("compare", "Run both models on one F-representation");
  dc->add_option("file", path, "F-representation JSON file")->required();
  dc->add_option("--format", format)->check(text_json);
  dc->callback([&] {
    action = [&] {
      CompareReport r = compare(load_frep(path));
      if (format == "json") {
        out << compare_to_json(r).dump(2) << "\n";
      } else if (r.formal_only) {
        out << "formal-only: " << r.reading << "\n";
      } else if (r.failure) {
        out << "failure: " << *r.failure << "\n";
      } else {
        std::vector<std::string> idx;
        for (auto i : r.matching_readings) idx.push_back(std::to_string(i + 1));
        out << "reading: " << r.reading << "\n"
            << "recovered: " << r.recovered << "\n"
            << "lf agrees: " << (r.lf_agrees ? "yes" : "no") << "\n"
            << "matches readings: " << (idx.empty() ? "none" : join(idx)) << " of " << r.reading_count << "\n"
            << "records identical: " << (r.records_identical ? "yes" : "no") << "\n";
      }
      return r.failure && !r.formal_only ? 1 : 0;
    };
  });

  // scope
  auto* scope = app.add_subcommand("scope", "List the scope readings of an F-representation");
  scope->add_option("file", path, "F-representation JSON file")->required();
  scope->callback([&] {
    action = [&] {
      auto readings = resolve_scope(load_frep(path));
      for (std::size_t i = 0; i < readings.size(); ++i)
        out << i + 1 << ". " << render_formula(canonicalize(readings[i])) << "\n";
      return 0;
    };
  });

  // recognize
  auto* rec = app.add_subcommand("recognize", "Recover words with unheard graphemes ('#')");
  rec->add_option("lexicon", path, "Lexicon TSV file")->required();
  rec->add_option("sentence", words, "Corrupted sentence")->required();
  rec->add_option("--expect", expect, "Categories per slot, space-separated; alternatives comma-separated, '*' for any");
  rec->add_option("--format", format)->check(text_json);
  rec->callback([&] {
    action = [&] {
      Lexicon lex = load_lexicon(path);
      auto tokens = split_words(join(words));
      if (tokens.empty()) throw UsageError("empty sentence");
      auto slots_expected = split_words(expect);
      if (slots_expected.size() > tokens.size()) throw UsageError("more --expect slots than words");
      std::vector<std::optional<std::set<std::string>>> expected;
      for (const auto& e : slots_expected) {
        if (e == "*") {
          expected.emplace_back();
          continue;
        }
        std::set<std::string> cats;
        std::istringstream in(e);
        for (std::string c; std::getline(in, c, ',');)
          if (!c.empty()) cats.insert(c);
        expected.emplace_back(std::move(cats));
      }
      Recognition r = recognize(lex, tokens, expected);
      if (format == "json") {
        nlohmann::json slots = nlohmann::json::array();
        for (const auto& s : r.slots) {
          nlohmann::json j{{"token", s.token}};
          if (s.best) {
            j["form"] = s.best->entry.form;
            j["category"] = s.best->entry.category;
            j["distance"] = s.best->distance;
          } else {
            j["form"] = nullptr;
          }
          slots.push_back(j);
        }
        out << nlohmann::json{{"complete", r.complete()}, {"slots", slots}}.dump(2) << "\n";
      } else {
        std::vector<std::string> shown;
        for (const auto& s : r.slots) shown.push_back(s.best ? s.best->entry.form : "[?" + s.token + "]");
        out << join(shown) << "\n";
      }
      if (!r.complete()) {
        err << NoCandidate(r.failed_slots()).what() << "\n";
        return 1;
      }
      return 0;
    };
  });

  // gardenpath
  auto* gp = app.add_subcommand("gardenpath", "Parse incrementally under Minimal Attachment and Late Closure");
  gp->add_option("grammar", path, "Grammar file")->required();
  gp->add_option("sentence", words, "Sentence")->required();
  gp->add_flag("--oracle", oracle, "Also enumerate every parse");
  gp->add_option("--format", format)->check(text_json_dot);
  gp->callback([&] {
    action = [&] {
      Grammar g = load_grammar(path);
      auto ws = split_words(join(words));
      if (ws.empty()) throw UsageError("empty sentence");
      IncrementalResult r = parse_incremental(ws, g);
      std::optional<std::vector<ParseTree>> parses;
      if (oracle) parses = enumerate_parses(ws, g);
      std::vector<std::string> counts;
      for (auto c : r.node_counts) counts.push_back(std::to_string(c));
      std::size_t minimal = 0;
      if (parses && !parses->empty()) {
        minimal = parses->front().node_count();
        for (const auto& p : *parses) minimal = std::min(minimal, p.node_count());
      }
      if (format == "dot") {
        if (!r.ok()) throw NoAttachment(ws[std::min(*r.failure_position, ws.size() - 1)], *r.failure_position);
        out << to_dot(*r.tree);
        return 0;
      }
      if (format == "json") {
        nlohmann::json j{{"tree", r.ok() ? nlohmann::json(to_bracketed(*r.tree)) : nlohmann::json(nullptr)},
                         {"node_counts", r.node_counts},
                         {"failure", r.failure ? nlohmann::json(*r.failure) : nlohmann::json(nullptr)}};
        if (parses) {
          j["parses"] = parses->size();
          j["minimal_nodes"] = parses->empty() ? nlohmann::json(nullptr) : nlohmann::json(minimal);
          j["garden_path"] = !r.ok() && !parses->empty();
        }
        out << j.dump(2) << "\n";
      } else {
        if (r.ok()) out << "tree: " << to_bracketed(*r.tree) << "\n";
        else out << "failure: " << *r.failure << "\n";
        out << "nodes: " << (counts.empty() ? "-" : join(counts)) << "\n";
        if (r.ok()) out << "total: " << r.tree->node_count() << "\n";
        if (parses) {
          out << "parses: " << parses->size() << "\n";
          if (!parses->empty()) out << "minimal: " << minimal << "\n";
          out << "garden-path: " << (!r.ok() && !parses->empty() ? "yes" : "no") << "\n";
        }
      }
      return r.ok() ? 0 : 1;
    };
  });

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Golden corpus");
  corpus->require_subcommand(1);
  auto* crun = corpus->add_subcommand("run", "Run every manifest case and diff against its golden output");
  crun->add_option("--jobs", jobs, "Parallel cases")->check(CLI::Range(1, 256));
  crun->add_option("--dir", dir, "Corpus directory (default: PMODEL_CORPUS_DIR or the source corpus)");
  crun->add_flag("--update", update, "Rewrite the golden outputs instead of comparing");
  crun->callback([&] {
    action = [&] { return run_corpus(dir.empty() ? corpus_dir() : dir, jobs, update, out, err); };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (!action) return 2;
  try {
    return action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace {

struct Case {
  std::string name;
  std::vector<std::string> args;
  int exit = 0;
};

int run_corpus(const std::string& dir, std::size_t jobs, bool update, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  auto manifest = nlohmann::json::parse(read_file(dir + "/manifest.json"));
  std::vector<Case> cases;
  for (const auto& c : manifest.at("cases")) {
    Case k{c.at("name").get<std::string>(), {}, c.value("exit", 0)};
    for (const auto& a : c.at("args")) {
      std::string s = a.get<std::string>();
      if (!s.empty() && s[0] == '@') s = dir + "/" + s.substr(1);
      k.args.push_back(s);
    }
    if (!k.args.empty() && k.args[0] == "corpus") throw UsageError("corpus cases may not run the corpus");
    cases.push_back(std::move(k));
  }

  std::vector<std::string> verdicts(cases.size());
  std::vector<bool> passed(cases.size(), false);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cases.size();) {
      const Case& c = cases[i];
      std::ostringstream o, e;
      int code = run(c.args, o, e);
      fs::path golden = fs::path(dir) / "golden" / (c.name + ".out");
      if (update) {
        fs::create_directories(golden.parent_path());
        std::ofstream(golden) << o.str();
        passed[i] = code == c.exit;
        verdicts[i] = passed[i] ? "wrote " + c.name : "FAIL " + c.name + ": exit " + std::to_string(code);
        continue;
      }
      std::string want;
      try {
        want = read_file(golden.string());
      } catch (const std::exception&) {
        verdicts[i] = "FAIL " + c.name + ": missing golden output";
        continue;
      }
      if (code != c.exit) {
        verdicts[i] = "FAIL " + c.name + ": exit " + std::to_string(code) + ", expected " + std::to_string(c.exit);
      } else if (o.str() != want) {
        verdicts[i] = "FAIL " + c.name + ": output differs from golden";
      } else {
        passed[i] = true;
        verdicts[i] = "ok   " + c.name;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(jobs, cases.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t failed = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    out << verdicts[i] << "\n";
    if (!passed[i]) ++failed;
  }
  out << "corpus: " << cases.size() << " cases, " << failed << " failed\n";
  if (failed) err << failed << " corpus case(s) failed\n";
  return failed ? 1 : 0;
}

}  // namespace

}  // namespace pmodel::cli
