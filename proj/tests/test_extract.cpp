#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "common.hpp"
#include "smtquery/extract.hpp"
#include "smtquery/intel.hpp"

using namespace smtquery;
using testutil::TempDir;

namespace {

InstanceRec rec(std::int64_t id, const std::string& bench,
                const std::string& track, const std::string& name,
                const std::string& path = "") {
  InstanceRec r;
  r.id = id;
  r.name = name;
  r.path = path;
  r.benchmark = bench;
  r.track = track;
  return r;
}

QueryResult countsOnly(std::size_t m, std::size_t n) {
  QueryResult r;
  r.universeSize = n;
  for (std::size_t i = 0; i < m; ++i)
    r.matched.emplace_back(rec(static_cast<std::int64_t>(i), "joaco", "t",
                               "i" + std::to_string(i) + ".smt2"),
                           Script{});
  r.perBenchmark["joaco"] = {m, n};
  return r;
}

std::string firstLine(const std::string& s) {
  return s.substr(0, s.find('\n'));
}

}  // namespace

TEST_CASE("count format matches the published lines exactly") {
  CHECK(firstLine(extractCount(countsOnly(51, 94))) ==
        "Total matching instances: 51 of 94 within the selected set (54.25%)");
  CHECK(firstLine(extractCount(countsOnly(76, 94))) ==
        "Total matching instances: 76 of 94 within the selected set (80.85%)");
  CHECK(firstLine(extractCount(countsOnly(0, 0))) ==
        "Total matching instances: 0 of 0 within the selected set (0.00%)");
  CHECK(firstLine(extractCount(countsOnly(24486, 114468))) ==
        "Total matching instances: 24486 of 114468 within the selected set "
        "(21.39%)");
  CHECK(firstLine(extractCount(countsOnly(9189, 114468))) ==
        "Total matching instances: 9189 of 114468 within the selected set "
        "(8.02%)");
  // distribution lines in benchmark name order
  QueryResult r = countsOnly(2, 5);
  r.perBenchmark.clear();
  r.perBenchmark["beta"] = {1, 2};
  r.perBenchmark["alpha"] = {1, 3};
  auto text = extractCount(r);
  CHECK(text.find("alpha: 1 of 3\nbeta: 1 of 2\n") != std::string::npos);
}

TEST_CASE("instance table layout") {
  QueryResult r;
  r.universeSize = 1;
  r.matched.emplace_back(rec(1, "pisa", "pisa", "pisa-011.smt2"), Script{});
  ResultLookup lookup = [](std::int64_t, const std::string& s)
      -> std::optional<ResultRec> {
    ResultRec res;
    res.solver = s;
    res.result = SolverResult::Satisfied;
    res.time = s == "CVC5" ? 0.00897606 : 0.0344819;
    return res;
  };
  auto text = extractInstanceTable(r, {"CVC5", "Z3Str3"}, lookup);
  std::istringstream lines(text);
  std::string header, dashes, row;
  std::getline(lines, header);
  std::getline(lines, dashes);
  std::getline(lines, row);
  CHECK(header.find("Instance") == 0);
  CHECK(header.find("Result CVC5") != std::string::npos);
  CHECK(header.find("Time CVC5") != std::string::npos);
  CHECK(header.find("Result Z3Str3") != std::string::npos);
  CHECK(dashes.find("---") == 0);
  CHECK(row.find("pisa:pisa:pisa-011.smt2") == 0);
  CHECK(row.find("Satisfied") != std::string::npos);
  CHECK(row.find("0.00897606") != std::string::npos);
  CHECK(row.find("0.0344819") != std::string::npos);

  // zero matches: header plus separator only
  QueryResult empty;
  auto only = extractInstanceTable(empty, {"CVC5"}, lookup);
  CHECK(std::count(only.begin(), only.end(), '\n') == 2);
}

TEST_CASE("results table aggregates per solver") {
  QueryResult r;
  r.universeSize = 2;
  r.matched.emplace_back(rec(1, "b", "t", "a.smt2"), Script{});
  r.matched.emplace_back(rec(2, "b", "t", "b.smt2"), Script{});
  ResultLookup lookup = [](std::int64_t id, const std::string&)
      -> std::optional<ResultRec> {
    ResultRec res;
    if (id == 1) {
      res.result = SolverResult::Satisfied;
      res.time = 1.0;
    } else {
      res.result = SolverResult::Timeout;
      res.time = 20.0;
    }
    return res;
  };
  auto text = extractResultsTable(r, {"Mock"}, lookup);
  CHECK(text.find("SAT") != std::string::npos);
  CHECK(text.find("UNSAT") != std::string::npos);
  CHECK(text.find("Unknown") != std::string::npos);
  CHECK(text.find("Timeout") != std::string::npos);
  CHECK(text.find("Crash") != std::string::npos);
  CHECK(text.find("Time w/o Timeout") != std::string::npos);
  CHECK(text.find("Total Time") != std::string::npos);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find("Time w/o Timeout") == 0)
      CHECK(line.find(" 1") != std::string::npos);
    if (line.find("Total Time") == 0)
      CHECK(line.find("21") != std::string::npos);
  }
}

TEST_CASE("cactus data is sorted and cumulative, unsolved excluded") {
  QueryResult r;
  r.universeSize = 4;
  for (int i = 1; i <= 4; ++i)
    r.matched.emplace_back(rec(i, "b", "t", "i" + std::to_string(i)), Script{});
  ResultLookup lookup = [](std::int64_t id, const std::string&)
      -> std::optional<ResultRec> {
    ResultRec res;
    switch (id) {
      case 1: res.result = SolverResult::Satisfied; res.time = 3; break;
      case 2: res.result = SolverResult::Unsatisfied; res.time = 1; break;
      case 3: res.result = SolverResult::Satisfied; res.time = 2; break;
      default: res.result = SolverResult::Timeout; res.time = 20; break;
    }
    return res;
  };
  TempDir tmp;
  auto file = extractCactus(r, {"Mock"}, lookup, tmp.path);
  auto text = testutil::readFile(file);
  CHECK(text ==
        "# solver\tindex\tcumulative_time\n"
        "Mock\t1\t1\nMock\t2\t3\nMock\t3\t6\n");
}

TEST_CASE("matching pie slices") {
  TempDir tmp;
  auto file = extractMatchingPie(countsOnly(506, 815), tmp.path);
  CHECK(testutil::readFile(file) == "matched\t506\nunmatched\t309\n");
}

TEST_CASE("smtlib export writes one re-parseable file per instance") {
  QueryResult r;
  Script s = parseScript(testutil::readFile(
      testutil::fixtureDir() / "woorpje" / "track01" / "quad.smt2"));
  r.universeSize = 1;
  r.matched.emplace_back(rec(1, "woorpje", "track01", "quad.smt2"), s);
  TempDir tmp;
  auto files = extractSmtlib(r, tmp.path);
  REQUIRE(files.size() == 1);
  CHECK(files[0] == tmp.path / "woorpje" / "track01" / "quad.smt2");
  Script back = parseScript(testutil::readFile(files[0]));
  CHECK(structuralEqual(s, back));
}

TEST_CASE("ast plot colors shared subtrees") {
  Script s = parseScript(
      "(declare-fun x () String)"
      "(assert (or (= x \"a\") (= x \"a\")))");
  QueryResult r;
  r.universeSize = 1;
  r.matched.emplace_back(rec(1, "b", "t", "dup.smt2"), s);
  TempDir tmp;
  auto files = extractSmtPlot(r, tmp.path);
  REQUIRE(files.size() == 1);
  auto text = testutil::readFile(files[0]);
  CHECK(text.find("digraph") != std::string::npos);
  // both identical (= x "a") atoms carry the same fill color
  auto first = text.find("fillcolor=");
  REQUIRE(first != std::string::npos);
  auto color = text.substr(first, text.find(']', first) - first);
  CHECK(text.find(color, first + 1) != std::string::npos);
}

TEST_CASE("variable dependency edges for the G/H/J instance") {
  Script s = parseScript(testutil::readFile(
      testutil::fixtureDir() / "depgraph" / "vardep.smt2"));
  auto edges = varDepEdges(s);
  std::set<std::pair<std::string, std::size_t>> got(edges.begin(), edges.end());
  std::set<std::pair<std::string, std::size_t>> expected = {
      {"G", 1}, {"H", 1}, {"J", 2}, {"J", 3}};
  CHECK(got == expected);

  QueryResult r;
  r.universeSize = 1;
  r.matched.emplace_back(rec(1, "depgraph", "default", "vardep.smt2"), s);
  TempDir tmp;
  auto files = extractVarDepPlot(r, tmp.path);
  REQUIRE(files.size() == 1);
  auto text = testutil::readFile(files[0]);
  CHECK(text.find("\"G\" -- a1") != std::string::npos);
  CHECK(text.find("\"H\" -- a1") != std::string::npos);
  CHECK(text.find("\"J\" -- a2") != std::string::npos);
  CHECK(text.find("\"J\" -- a3") != std::string::npos);
  CHECK(text.find("\"G\" -- a2") == std::string::npos);
}

TEST_CASE("isolated variables appear as nodes without edges") {
  Script s = parseScript(testutil::readFile(
      testutil::fixtureDir() / "depgraph" / "iso.smt2"));
  auto edges = varDepEdges(s);
  CHECK(edges == std::vector<std::pair<std::string, std::size_t>>{{"B", 1}});
  QueryResult r;
  r.universeSize = 1;
  r.matched.emplace_back(rec(1, "depgraph", "default", "iso.smt2"), s);
  TempDir tmp;
  auto text = testutil::readFile(extractVarDepPlot(r, tmp.path)[0]);
  CHECK(text.find("\"A\"") != std::string::npos);  // node exists
  CHECK(text.find("\"A\" --") == std::string::npos);  // no edge
}

TEST_CASE("extractor catalog") {
  CHECK(extractorByName("Count") == ExtractorId::Count);
  CHECK(extractorByName("VarDepPlot") == ExtractorId::VarDepPlot);
  CHECK_FALSE(extractorByName("Nope"));
  CHECK(extractorCatalog().size() == 8);
}
