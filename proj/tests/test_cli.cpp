#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "pmodel/cli.hpp"
#include "pmodel/formal_lang.hpp"
#include "pmodel/frep.hpp"

using namespace pmodel;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) { return std::string(PMODEL_CORPUS_DIR) + "/" + name; }

}  // namespace

TEST_CASE("formal") {
  CHECK(run({"formal", "sheffer", "(!(p))"}).out == "(p |/ p)\n");
  auto eval = run({"formal", "eval", "--model", corpus("singleton.model.json"), "forall x. (x in H -> J S x)"});
  CHECK(eval.code == 0);
  CHECK(eval.out == "true\n");
  CHECK(run({"formal", "eval", "--model", corpus("singleton.model.json"), "exists x. !(x in H)"}).out == "false\n");

  auto json = run({"formal", "parse", "--format", "json", "forall x. (x in H -> J S x)"});
  REQUIRE(json.code == 0);
  CHECK(render_formula(formula_from_json(nlohmann::json::parse(json.out))) == "forall x. (x in H -> J S x)");

  auto bad = run({"formal", "parse", "(("});
  CHECK(bad.code == 1);
  CHECK(bad.out.empty());
  CHECK(bad.err.rfind("error: ", 0) == 0);
}

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"formal"}).code == 2);
  CHECK(run({"formal", "parse", "p", "--format", "yaml"}).code == 2);
  CHECK(run({"derive", "t", "--force", "imperative", "Jones left"}).code == 2);
  CHECK(run({"recognize", "--expect", "* * * *", corpus("lexicon.tsv"), "Jones left"}).code == 2);
  auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("gardenpath") != std::string::npos);
}

TEST_CASE("frep round trip through the json format") {
  auto r = run({"frep", "--format", "json", corpus("jones_saw_everyone.frep.json")});
  REQUIRE(r.code == 0);
  FRepresentation f = frep_from_json(nlohmann::json::parse(r.out));
  CHECK(render_formula(f.string) == render_formula(load_frep(corpus("jones_saw_everyone.frep.json")).string));
  CHECK(run({"frep", corpus("missing.frep.json")}).code == 1);
}

TEST_CASE("derive") {
  auto p = run({"derive", "p", corpus("jones_saw_everyone.frep.json")});
  REQUIRE(p.code == 0);
  CHECK(p.out.find("DS: y_1 Jones saw everyone_1\n") != std::string::npos);
  CHECK(p.out.find("SS: Jones saw everyone\n") != std::string::npos);

  auto emph = run({"derive", "p", "--emphasis", "everyone", corpus("jones_saw_everyone.frep.json")});
  CHECK(emph.out.find("SS: Everyone_1 Jones saw t_1\n") != std::string::npos);
  // Emphasis on a word that is not in the sentence is rejected.
  CHECK(run({"derive", "p", "--emphasis", "Smith", corpus("jones_saw_everyone.frep.json")}).code == 1);

  auto t = run({"derive", "t", "--force", "interrogative", "y_1 did Jones see who_1 ?"});
  REQUIRE(t.code == 0);
  CHECK(t.out.find("SS: [CP Who_1 did [IP Jones see t_1]] ?\n") != std::string::npos);
  CHECK(t.out.find("LF: [CP Who_1 did [IP Jones see x_1]] ?\n") != std::string::npos);

  auto json = nlohmann::json::parse(run({"derive", "p", "--format", "json", corpus("scope.frep.json")}).out);
  CHECK(json["model"] == "P");
  CHECK(json["steps"].size() == 2);
  CHECK(json["warnings"].size() == 1);

  auto dot = run({"derive", "t", "--format", "dot", "Jones left"});
  CHECK(dot.out.rfind("digraph", 0) == 0);

  auto prob = run({"derive", "p", corpus("prob_snow.frep.json")});
  CHECK(prob.code == 1);
  CHECK(prob.err.find("UnlexicalizableNode") != std::string::npos);
  CHECK(run({"derive", "compare", corpus("prob_snow.frep.json")}).out.rfind("formal-only: ", 0) == 0);
}

TEST_CASE("scope") {
  auto amb = run({"scope", corpus("scope.frep.json")});
  CHECK(amb.out ==
        "1. forall x. exists y. (x in H -> (y in H & x S y))\n"
        "2. exists y. forall x. (y in H & (x in H -> x S y))\n");
  auto one = run({"scope", corpus("scope_ordered.frep.json")});
  CHECK(std::count(one.out.begin(), one.out.end(), '\n') == 1);
}

TEST_CASE("recognize") {
  auto ok = run({"recognize", corpus("lexicon.tsv"), "Jon#s s#w ever#one"});
  CHECK(ok.code == 0);
  CHECK(ok.out == "Jones saw everyone\n");

  auto fail = run({"recognize", corpus("lexicon.tsv"), "Jon#s s#w ##q##"});
  CHECK(fail.code == 1);
  CHECK(fail.out == "Jones saw [?##q##]\n");
  CHECK(fail.err.find("slot 2") != std::string::npos);

  auto expect = run({"recognize", "--expect", "* Q", "--format", "json", corpus("lexicon.tsv"), "Jon#s s#w"});
  CHECK(expect.code == 1);
  auto j = nlohmann::json::parse(expect.out);
  CHECK(j["complete"] == false);
  CHECK(j["slots"][0]["form"] == "Jones");
  CHECK(j["slots"][1]["form"].is_null());
}

TEST_CASE("gardenpath") {
  auto pp = run({"gardenpath", "--oracle", corpus("grammar.txt"), "Jones saw the man with the telescope"});
  CHECK(pp.code == 0);
  CHECK(pp.out.find("parses: 2\n") != std::string::npos);
  CHECK(pp.out.find("garden-path: no\n") != std::string::npos);

  auto horse = run({"gardenpath", "--oracle", "--format", "json", corpus("grammar.txt"),
                    "the horse raced past the barn fell"});
  CHECK(horse.code == 1);
  auto j = nlohmann::json::parse(horse.out);
  CHECK(j["garden_path"] == true);
  CHECK(j["parses"] == 1);
  CHECK(j["tree"].is_null());

  CHECK(run({"gardenpath", "--format", "dot", corpus("grammar.txt"), "Jones", "left"}).out.rfind("digraph", 0) == 0);
  CHECK(run({"gardenpath", corpus("missing.txt"), "Jones left"}).code == 1);
}

TEST_CASE("corpus run against the shipped goldens, serial and parallel") {
  for (std::string jobs : {"1", "4"}) {
    auto r = run({"corpus", "run", "--jobs", jobs, "--dir", PMODEL_CORPUS_DIR});
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("0 failed") != std::string::npos);
  }
}

TEST_CASE("corpus run reports a drifted golden and --update repairs it") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pmodel_cli_corpus";
  fs::remove_all(dir);
  fs::create_directories(dir / "golden");
  fs::copy_file(corpus("singleton.model.json"), dir / "singleton.model.json");
  std::ofstream(dir / "manifest.json")
      << R"j({"cases": [
        {"name": "sheffer", "args": ["formal", "sheffer", "(!(p))"]},
        {"name": "eval", "args": ["formal", "eval", "--model", "@singleton.model.json", "exists x. x in H"]},
        {"name": "bad", "args": ["formal", "parse", "(("], "exit": 1}]})j";
  std::ofstream(dir / "golden" / "sheffer.out") << "(p |/ p)\n";
  std::ofstream(dir / "golden" / "eval.out") << "false\n";
  std::ofstream(dir / "golden" / "bad.out") << "";

  auto r = run({"corpus", "run", "--dir", dir.string(), "--jobs", "2"});
  CHECK(r.code == 1);
  CHECK(r.out.find("ok   sheffer") != std::string::npos);
  CHECK(r.out.find("FAIL eval: output differs") != std::string::npos);
  CHECK(r.out.find("ok   bad") != std::string::npos);

  CHECK(run({"corpus", "run", "--dir", dir.string(), "--update"}).code == 0);
  CHECK(run({"corpus", "run", "--dir", dir.string()}).code == 0);

  std::ofstream(dir / "manifest.json") << R"({"cases": [{"name": "loop", "args": ["corpus", "run"]}]})";
  CHECK(run({"corpus", "run", "--dir", dir.string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("corpus dir honours the environment") {
  ::setenv("PMODEL_CORPUS_DIR", "/nonexistent/corpus", 1);
  CHECK(cli::corpus_dir() == "/nonexistent/corpus");
  CHECK(run({"corpus", "run"}).code == 1);
  ::unsetenv("PMODEL_CORPUS_DIR");
  CHECK(cli::corpus_dir() != "/nonexistent/corpus");
}
