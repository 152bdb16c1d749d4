#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "smtquery/predicates.hpp"

using namespace smtquery;

namespace {

// context over an in-memory script with canned results
struct Env {
  Script script;
  std::map<std::string, ResultRec> results;
  std::map<std::int64_t, ValidationRec> validations;
  EvalContext ctx;

  explicit Env(const std::string& text) : script(parseScript(text)) { wire(); }
  explicit Env(Script s) : script(std::move(s)) { wire(); }

  void wire() {
    ctx.script = [this]() -> Script& { return script; };
    ctx.result = [this](const std::string& solver) -> std::optional<ResultRec> {
      auto it = results.find(solver);
      if (it == results.end()) return std::nullopt;
      return it->second;
    };
    ctx.validation =
        [this](std::int64_t id) -> std::optional<ValidationRec> {
      auto it = validations.find(id);
      if (it == validations.end()) return std::nullopt;
      return it->second;
    };
    ctx.solvers = {"CVC5", "Z3Str3", "Z3Seq"};
  }

  void addResult(const std::string& solver, SolverResult r, double time,
                 std::optional<ValidationResult> v = std::nullopt) {
    ResultRec rec;
    rec.id = static_cast<std::int64_t>(results.size()) + 1;
    rec.solver = solver;
    rec.result = r;
    rec.time = time;
    results[solver] = rec;
    if (v) {
      ValidationRec vr;
      vr.resultId = rec.id;
      vr.result = *v;
      validations[rec.id] = vr;
    }
  }

  bool eval(const std::string& name, std::vector<std::string> args = {}) {
    PredicateCall call{name, std::move(args)};
    return evalPredicate(call, ctx);
  }
};

Env fixtureEnv(const char* b, const char* t, const char* n) {
  auto p = testutil::fixtureDir() / b;
  if (t) p /= t;
  p /= n;
  return Env(parseScript(testutil::readFile(p)));
}

}  // namespace

TEST_CASE("structural predicates on fixtures") {
  CHECK(fixtureEnv("pisa", "pisa", "pisa-000.smt2").eval("hasWEQ"));
  CHECK_FALSE(fixtureEnv("lengths", "lin", "len1.smt2").eval("hasWEQ"));
  CHECK(fixtureEnv("lengths", "lin", "len2.smt2").eval("hasLinears"));
  CHECK(fixtureEnv("regexbench", "simple", "mem1.smt2").eval("hasRegex"));
  CHECK(fixtureEnv("regexbench", "simple", "mem1.smt2").eval("isSimpleRegex"));
  CHECK_FALSE(
      fixtureEnv("regexbench", "simple", "memconc.smt2").eval("isSimpleRegex"));
  CHECK(fixtureEnv("regexbench", "simple", "memconc.smt2")
            .eval("isSimpleRegexConcatenation"));
  CHECK_FALSE(
      fixtureEnv("regexbench", "simple", "memcomp.smt2").eval("isSimpleRegex"));
  CHECK_FALSE(fixtureEnv("pisa", "pisa", "pisa-000.smt2").eval("isSimpleRegex"));
}

TEST_CASE("quadratic verdicts from the worked examples") {
  // single equation aYabX = ZabbY: every variable at most twice
  CHECK(fixtureEnv("woorpje", "track01", "quad.smt2").eval("isQuadratic"));
  // J occurs 5 times in the dependency-plot instance
  CHECK_FALSE(fixtureEnv("depgraph", nullptr, "vardep.smt2").eval("isQuadratic"));
  CHECK_FALSE(fixtureEnv("woorpje", "track01", "nonquad.smt2").eval("isQuadratic"));
  // integer variables do not count against the bound
  Env intHeavy(
      "(declare-fun n () Int)(declare-fun x () String)"
      "(assert (= n (+ n n)))(assert (= x \"a\"))");
  CHECK(intHeavy.eval("isQuadratic"));
}

TEST_CASE("pattern matching form") {
  CHECK(fixtureEnv("woorpje", "track01", "pattern.smt2").eval("isPatternMatching"));
  // X occurs on both sides elsewhere
  CHECK_FALSE(
      fixtureEnv("woorpje", "track01", "nonquad.smt2").eval("isPatternMatching"));
  // defining variable reused in a second equation
  Env reused(
      "(declare-fun P () String)(declare-fun Q () String)"
      "(assert (= P (str.++ Q \"a\")))(assert (= P \"b\"))");
  CHECK_FALSE(reused.eval("isPatternMatching"));
}

TEST_CASE("upper bounds") {
  CHECK(fixtureEnv("lengths", "lin", "len1.smt2").eval("isUpperBounded"));
  CHECK(fixtureEnv("lengths", "lin", "boundre.smt2").eval("isUpperBounded"));
  CHECK_FALSE(fixtureEnv("lengths", "lin", "unbounded.smt2").eval("isUpperBounded"));
  // every string variable needs a bound, not just one
  Env partial(
      "(declare-fun x () String)(declare-fun y () String)"
      "(assert (<= (str.len x) 4))");
  CHECK_FALSE(partial.eval("isUpperBounded"));
}

TEST_CASE("variable count threshold") {
  CHECK_FALSE(
      fixtureEnv("pisa", "pisa", "pisa-000.smt2").eval("hasAtLeast5Variables"));
  Env five(
      "(declare-fun a () String)(declare-fun b () String)"
      "(declare-fun c () String)(declare-fun d () String)"
      "(declare-fun e () String)(assert (= a \"x\"))");
  CHECK(five.eval("hasAtLeast5Variables"));
}

TEST_CASE("solver predicates") {
  Env env("(declare-fun x () String)(assert (= x \"a\"))");
  env.addResult("CVC5", SolverResult::Satisfied, 0.00897606,
                ValidationResult::ModelValid);
  env.addResult("Z3Str3", SolverResult::Satisfied, 0.0344819,
                ValidationResult::MajorityAgree);
  env.addResult("Z3Seq", SolverResult::Timeout, 20.0);

  CHECK(env.eval("isSAT", {"CVC5"}));
  CHECK(env.eval("isSAT", {"cvc5"}));  // case-insensitive solver names
  CHECK_FALSE(env.eval("isUNSAT", {"CVC5"}));
  CHECK_FALSE(env.eval("isSAT", {"Z3Seq"}));
  CHECK(env.eval("hasValidModel", {"CVC5"}));
  CHECK_FALSE(env.eval("hasValidModel", {"Z3Str3"}));  // agreed, no own model
  CHECK(env.eval("isCorrect", {"CVC5"}));
  CHECK(env.eval("isCorrect", {"Z3Str3"}));
  CHECK_FALSE(env.eval("isCorrect", {"Z3Seq"}));

  // strictly smaller runtime on a decisive result wins
  CHECK(env.eval("isFaster", {"CVC5", "Z3Str3"}));
  CHECK_FALSE(env.eval("isFaster", {"Z3Str3", "CVC5"}));
  // timeouts have no usable result
  CHECK_FALSE(env.eval("isFaster", {"CVC5", "Z3Seq"}));
  CHECK_FALSE(env.eval("isFaster", {"Z3Seq", "CVC5"}));

  CHECK_THROWS_AS(env.eval("isSAT", {"NoSuchSolver"}), UnknownSolver);
  CHECK_THROWS_AS(env.eval("noSuchPredicate"), UnknownPredicate);
  CHECK_THROWS_AS(env.eval("isSAT"), UnknownPredicate);  // arity
}

TEST_CASE("isSAT and isUNSAT are mutually exclusive over all results") {
  for (auto r : {SolverResult::Satisfied, SolverResult::Unsatisfied,
                 SolverResult::Unknown, SolverResult::Timeout,
                 SolverResult::Crash}) {
    Env env("(declare-fun x () String)(assert (= x \"a\"))");
    env.addResult("CVC5", r, 1.0);
    bool both = env.eval("isSAT", {"CVC5"}) && env.eval("isUNSAT", {"CVC5"});
    CHECK_FALSE(both);
  }
}

TEST_CASE("structural predicates are stable across repeated evaluation") {
  for (const auto& path : testutil::fixtureFiles()) {
    Env env(parseScript(testutil::readFile(path)));
    for (const auto& p : predicateCatalog()) {
      if (p.arity != 0) continue;
      bool cold = env.eval(p.name);
      bool warm = env.eval(p.name);  // intel now cached on the tree
      CHECK(cold == warm);
    }
  }
}
