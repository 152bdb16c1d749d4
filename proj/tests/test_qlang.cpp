#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "common.hpp"
#include "smtquery/qlang.hpp"

using namespace smtquery;
using testutil::TempDir;

namespace {

struct QFixture {
  TempDir tmp;
  Store store;
  AstCache cache;
  QueryEnv env;
  std::ostringstream out, err;

  QFixture() : store(tmp.path / "db.sqlite"), cache(tmp.path / "cache") {
    store.initSchema(false);
    store.allocateNew(testutil::fixtureDir());
    env.store = &store;
    env.cache = &cache;
    env.outputDir = tmp.path / "output";
    env.out = &out;
    env.err = &err;
    env.scheduleOnDemand = false;
  }

  std::vector<std::string> names(const std::string& text) {
    auto r = runQuery(parseQuery(text), env);
    std::vector<std::string> v;
    for (const auto& [inst, script] : r.matched)
      v.push_back(inst.qualifiedName());
    return v;
  }
};

// random parenthesized conditions over the structural predicates
std::string randCond(std::mt19937& rng, int depth) {
  static const char* atoms[] = {
      "hasWEQ",        "hasLinears",    "hasRegex",
      "isQuadratic",   "isPatternMatching", "isUpperBounded",
      "hasAtLeast5Variables", "isSimpleRegex",
      "isSimpleRegexConcatenation", "True", "False"};
  std::uniform_int_distribution<int> d(0, depth > 0 ? 13 : 10);
  int k = d(rng);
  if (k <= 10) return atoms[k];
  if (k == 11) return "(Not " + randCond(rng, depth - 1) + ")";
  const char* op = k == 12 ? " And " : " Or ";
  return "(" + randCond(rng, depth - 1) + op + randCond(rng, depth - 1) + ")";
}

}  // namespace

TEST_CASE("query parsing") {
  auto q = parseQuery("Select Name From * Where hasWEQ");
  CHECK(q.isSelect);
  CHECK(q.output == SelectOutput::Name);
  REQUIRE(q.dataset.atoms.size() == 1);
  CHECK(q.dataset.atoms[0].kind == DatasetSelector::Atom::Kind::All);
  CHECK(q.condition->type == Condition::Type::Pred);
  CHECK(q.condition->pred.name == "hasWEQ");

  // keywords are case-insensitive, output selectors are not
  q = parseQuery("select Content from pisa where true");
  CHECK(q.output == SelectOutput::Content);
  CHECK(q.dataset.atoms[0].set == "pisa");
  CHECK(q.condition->type == Condition::Type::True);

  q = parseQuery(
      "Extract Count From woorpje:track01 "
      "Where ((Not hasRegex) And isQuadratic) Apply RenameVariables");
  CHECK_FALSE(q.isSelect);
  CHECK(q.extractor == ExtractorId::Count);
  CHECK(q.function == TransformId::RenameVariables);
  CHECK(q.dataset.atoms[0].kind == DatasetSelector::Atom::Kind::SetTrack);
  CHECK(q.dataset.atoms[0].track == "track01");
  REQUIRE(q.condition->type == Condition::Type::And);
  CHECK(q.condition->children[0]->type == Condition::Type::Not);
  CHECK(q.condition->children[1]->pred.name == "isQuadratic");

  // omitted Where and Apply default to True and Identity
  q = parseQuery("Extract MatchingPie From *");
  CHECK(q.condition->type == Condition::Type::True);
  CHECK(q.function == TransformId::Identity);

  // dataset lists
  q = parseQuery("Select Name From pisa:pisa, woorpje Where True");
  REQUIRE(q.dataset.atoms.size() == 2);
  CHECK(q.dataset.atoms[0].track == "pisa");
  CHECK(q.dataset.atoms[1].kind == DatasetSelector::Atom::Kind::Set);

  // solver-predicate arguments
  q = parseQuery("Select Name From * Where isFaster(CVC5, Z3Str3)");
  CHECK(q.condition->pred.args ==
        std::vector<std::string>{"CVC5", "Z3Str3"});
}

TEST_CASE("syntax errors carry a position") {
  CHECK_THROWS_AS(parseQuery("Frobnicate * Where True"), SyntaxError);
  CHECK_THROWS_AS(parseQuery("Select Name From *"), SyntaxError);  // no Where
  CHECK_THROWS_AS(parseQuery("Select Nope From * Where True"), SyntaxError);
  CHECK_THROWS_AS(parseQuery("Extract Nope From *"), SyntaxError);
  CHECK_THROWS_AS(parseQuery("Extract Count From * Apply Nope"), SyntaxError);
  CHECK_THROWS_AS(parseQuery("Select Name From * Where noSuchPred"),
                  SyntaxError);
  CHECK_THROWS_AS(parseQuery("Select Name From * Where isSAT"), SyntaxError);
  CHECK_THROWS_AS(parseQuery("Select Name From * Where hasWEQ trailing"),
                  SyntaxError);
  CHECK_THROWS_AS(parseQuery("Select Name From * Where (hasWEQ hasRegex)"),
                  SyntaxError);
  try {
    parseQuery("Select Nope From * Where True");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position == 7);
    CHECK(std::string(e.what()).find("at column 8") != std::string::npos);
  }
}

TEST_CASE("select prints names, hashes, and content") {
  QFixture f;
  auto got = f.names("Select Name From pisa Where hasWEQ");
  CHECK(got.size() == 3);  // the equals-true instance has no word equation
  std::string text = f.out.str();
  CHECK(text.find("pisa:pisa:pisa-000.smt2\n") != std::string::npos);
  CHECK(std::is_sorted(got.begin(), got.end()));

  f.out.str("");
  runQuery(parseQuery("Select Hash From depgraph Where True"), f.env);
  std::istringstream lines(f.out.str());
  std::string line;
  std::vector<std::string> hashes;
  while (std::getline(lines, line)) hashes.push_back(line);
  auto sel = f.store.selectInstances(
      parseQuery("Select Name From depgraph Where True").dataset);
  REQUIRE(hashes.size() == sel.size());
  for (std::size_t i = 0; i < sel.size(); ++i)
    CHECK(hashes[i] == contentHash(testutil::readFile(sel[i].path)));

  f.out.str("");
  runQuery(parseQuery("Select Content From depgraph Where True"), f.env);
  std::string allBytes;
  for (const auto& inst : sel) allBytes += testutil::readFile(inst.path);
  CHECK(f.out.str() == allBytes);
}

TEST_CASE("count output over a whole benchmark") {
  QFixture f;
  runQuery(parseQuery("Extract Count From pisa Where True"), f.env);
  CHECK(f.out.str() ==
        "Total matching instances: 4 of 4 within the selected set (100.00%)\n"
        "pisa: 4 of 4\n");
}

TEST_CASE("dataset unions deduplicate, distributions split by benchmark") {
  QFixture f;
  auto r = runQuery(
      parseQuery("Select Name From pisa, pisa:pisa, woorpje:track01 Where True"),
      f.env);
  CHECK(r.universeSize == 9);
  CHECK(r.perBenchmark.at("pisa") == std::pair<std::size_t, std::size_t>{4, 4});
  CHECK(r.perBenchmark.at("woorpje") ==
        std::pair<std::size_t, std::size_t>{5, 5});
}

TEST_CASE("negation partitions the universe and De Morgan holds") {
  QFixture f;
  auto all = f.names("Select Name From * Where True");
  auto pos = f.names("Select Name From * Where hasWEQ");
  auto neg = f.names("Select Name From * Where (Not hasWEQ)");
  CHECK(pos.size() + neg.size() == all.size());
  std::vector<std::string> merged = pos;
  merged.insert(merged.end(), neg.begin(), neg.end());
  std::sort(merged.begin(), merged.end());
  CHECK(merged == all);

  auto lhs = f.names("Select Name From * Where (Not (hasWEQ And hasRegex))");
  auto rhs =
      f.names("Select Name From * Where ((Not hasWEQ) Or (Not hasRegex))");
  CHECK(lhs == rhs);
}

TEST_CASE("cached and cache-free evaluation agree on random conditions") {
  QFixture f;
  QueryEnv noCache = f.env;
  noCache.cache = nullptr;
  std::mt19937 rng(20260826);
  for (int i = 0; i < 50; ++i) {
    std::string cond = randCond(rng, 3);
    CAPTURE(cond);
    auto q = parseQuery("Select Name From * Where " + cond);
    auto a = runQuery(q, f.env);
    auto b = runQuery(q, noCache);
    REQUIRE(a.matched.size() == b.matched.size());
    for (std::size_t k = 0; k < a.matched.size(); ++k)
      CHECK(a.matched[k].first.qualifiedName() ==
            b.matched[k].first.qualifiedName());
  }
}

TEST_CASE("solver predicates schedule missing runs on demand") {
  QFixture f;
  f.env.scheduleOnDemand = true;
  SolverConfig cfg;
  cfg.name = "MockSat";
  cfg.binary = (testutil::mockDir() / "mock.sh").string();
  cfg.argTemplate = {"sat", "0", "{file}"};
  cfg.timeout = 5.0;
  f.env.solvers = {cfg};

  auto got = f.names("Select Name From pisa:pisa Where isSAT(MockSat)");
  CHECK(got.size() == 4);
  CHECK(f.store.rowCount("results") == 4);

  // nothing new on a repeat: stored results are reused
  f.names("Select Name From pisa:pisa Where isSAT(MockSat)");
  CHECK(f.store.rowCount("results") == 4);
}

TEST_CASE("export applies the transform before writing") {
  QFixture f;
  runQuery(parseQuery("Extract SMTLib From woorpje:track01 "
                      "Where hasWEQ Apply RenameVariables"),
           f.env);
  CHECK(f.out.str().find("Exported") == 0);
  auto dest = f.env.outputDir / "woorpje" / "track01" / "quad.smt2";
  REQUIRE(std::filesystem::exists(dest));
  Script s = parseScript(testutil::readFile(dest));
  CHECK(testutil::readFile(dest).find("str01") != std::string::npos);
}

TEST_CASE("unreadable instances are skipped with a warning") {
  TempDir corpus;
  std::filesystem::create_directories(corpus.path / "bench" / "t");
  {
    std::ofstream good(corpus.path / "bench" / "t" / "good.smt2");
    good << "(declare-fun x () String)(assert (= x \"a\"))(check-sat)\n";
    std::ofstream bad(corpus.path / "bench" / "t" / "broken.smt2");
    bad << "(assert (= x\n";  // unbalanced
  }
  TempDir tmp;
  Store store(tmp.path / "db.sqlite");
  store.initSchema(false);
  CHECK(store.allocateNew(corpus.path) == 2);

  std::ostringstream out, err;
  QueryEnv env;
  env.store = &store;
  env.out = &out;
  env.err = &err;
  env.scheduleOnDemand = false;
  auto r = runQuery(parseQuery("Select Name From * Where hasWEQ"), env);
  REQUIRE(r.matched.size() == 1);
  CHECK(r.matched[0].first.name == "good.smt2");
  CHECK(err.str().find("warning: skipping bench:t:broken.smt2") !=
        std::string::npos);
}

TEST_CASE("repl runs line queries, survives errors, and stops at exit") {
  QFixture f;
  std::istringstream in(
      "Select Name From pisa:pisa Where hasAtLeast5Variables\n"
      "\n"
      "this is not a query\n"
      "Extract Count From depgraph\n"
      "exit\n"
      "Select Name From woorpje Where True\n");
  std::ostringstream out;
  repl(f.env, in, out);
  std::string text = out.str();
  CHECK(text.find("error:") != std::string::npos);
  CHECK(text.find("at column") != std::string::npos);
  CHECK(text.find("Total matching instances: 2 of 2") != std::string::npos);
  // nothing after exit runs
  CHECK(text.find("woorpje") == std::string::npos);

  // one-shot and repl output match for the same query
  std::ostringstream once;
  QueryEnv env2 = f.env;
  env2.out = &once;
  runQuery(parseQuery("Extract Count From depgraph"), env2);
  CHECK(text.find(once.str()) != std::string::npos);
}
