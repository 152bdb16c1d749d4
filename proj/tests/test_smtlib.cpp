#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "smtquery/smtlib.hpp"

using namespace smtquery;
using testutil::ScriptGen;

TEST_CASE("keyword translation table") {
  CHECK(translate25to26("(int.to.str n)") == "(str.from_int n)");
  CHECK(translate25to26("(str.to.int s)") == "(str.to_int s)");
  CHECK(translate25to26("(str.in.re s r)") == "(str.in_re s r)");
  CHECK(translate25to26("(str.to.re s)") == "(str.to_re s)");
  CHECK(translate25to26("(re.nostr)") == "(re.none)");
  CHECK(translate25to26("re.empty") == "re.none");
}

TEST_CASE("escape translation inside string literals") {
  // single digit: leading zero dropped
  CHECK(translate25to26("\"\\x05\"") == "\"\\u{5}\"");
  CHECK(translate25to26("\"\\x09\"") == "\"\\u{9}\"");
  // two significant digits kept verbatim
  CHECK(translate25to26("\"\\x41\"") == "\"\\u{41}\"");
  CHECK(translate25to26("\"\\xff\"") == "\"\\u{ff}\"");
  CHECK(translate25to26("\"a\\x0ab\"") == "\"a\\u{a}b\"");
}

TEST_CASE("translation only applies inside literals for escapes, outside for keywords") {
  // keyword-looking content inside a string literal is untouched
  CHECK(translate25to26("\"str.in.re\"") == "\"str.in.re\"");
  // escape-looking content outside a literal is untouched
  CHECK(translate25to26("(f \\x41)") == "(f \\x41)");
  // comments are untouched
  CHECK(translate25to26("; str.in.re\n(assert x)") == "; str.in.re\n(assert x)");
}

TEST_CASE("translation is idempotent and literal-safe on fuzzed inputs") {
  std::mt19937_64 rng(7);
  const std::string pieces[] = {
      "(",         ")",        "str.in.re", "str.to.int", "int.to.str",
      "re.nostr",  "re.empty", "\\x05",     "\\x4f",      "\"lit\\x03\"",
      "\"str.in.re\"",         " ",         "\n",         "x",
      "\"a\"\"b\"",            "; str.to.re comment\n"};
  for (int i = 0; i < 1000; ++i) {
    std::string input;
    int n = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int k = 0; k < n; ++k)
      input += pieces[std::uniform_int_distribution<std::size_t>(
          0, std::size(pieces) - 1)(rng)];
    std::string once = translate25to26(input);
    CHECK(translate25to26(once) == once);
  }
}

TEST_CASE("parse of the conditional fixture") {
  Script s = parseScript(testutil::readFile(
      testutil::fixtureDir() / "pisa" / "pisa" / "pisa-000.smt2"));
  CHECK(s.logic == "QF_SLIA");
  REQUIRE(s.declarations.size() == 4);
  CHECK(s.declarations[0] == std::pair<std::string, Sort>{"v1", Sort::String});
  CHECK(s.declarations[2] == std::pair<std::string, Sort>{"v3", Sort::Integer});
  REQUIRE(s.assertions.size() == 3);
  CHECK(s.assertions[0]->decl == "=");
  CHECK(s.assertions[1]->decl == "ite");
  CHECK(s.assertions[2]->decl == "or");
  CHECK(s.trailing == std::vector<std::string>{"(check-sat)"});
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parseScript("(assert (= x \"a\"))"), ParseError);  // undeclared
  CHECK_THROWS_AS(parseScript("(declare-fun x () String)(assert (= x)"),
                  ParseError);  // unbalanced
  CHECK_THROWS_AS(
      parseScript("(declare-fun x () String)(assert x)"),
      ParseError);  // non-Bool assertion
  try {
    parseScript("(declare-fun x () String)\n(assert (= y \"a\"))");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("string literal escapes decode and re-encode") {
  Script s = parseScript(
      "(declare-fun x () String)(assert (= x \"a\"\"b\\u{41}\\u0042\"))");
  const Expr& lit = *s.assertions[0]->children[1];
  CHECK(lit.decl == kStrLit);
  CHECK(lit.value == "a\"bAB");
  Script again = parseScript(printScript(s));
  CHECK(structuralEqual(s, again));
}

TEST_CASE("re.loop forms") {
  Script modern = parseScript(
      "(declare-fun x () String)(assert (str.in_re x ((_ re.loop 1 3) (str.to_re \"a\"))))");
  Script legacy = parseScript(
      "(declare-fun x () String)(assert (str.in_re x (re.loop (str.to_re \"a\") 1 3)))");
  CHECK(structuralEqual(modern, legacy));
  const Expr& loop = *modern.assertions[0]->children[1];
  CHECK(loop.params == std::vector<std::int64_t>{1, 3});
  CHECK(printScript(modern).find("(_ re.loop 1 3)") != std::string::npos);
}

TEST_CASE("unknown operators become generic nodes and round-trip") {
  Script s = parseScript(
      "(declare-fun x () String)(assert (my.op x \"a\"))");
  CHECK(s.assertions[0]->decl == kGeneric);
  CHECK(s.assertions[0]->value == "my.op");
  Script again = parseScript(printScript(s));
  CHECK(structuralEqual(s, again));
}

TEST_CASE("round-trip on all fixtures") {
  for (const auto& path : testutil::fixtureFiles()) {
    CAPTURE(path.string());
    Script s = parseScript(testutil::readFile(path));
    Script again = parseScript(printScript(s));
    CHECK(structuralEqual(s, again));
    // printing is a fixpoint after one normalization
    CHECK(printScript(again) == printScript(s));
  }
}

TEST_CASE("round-trip on 500 random scripts") {
  ScriptGen gen(42);
  for (int i = 0; i < 500; ++i) {
    Script s = gen.script();
    std::string text = printScript(s);
    CAPTURE(text);
    Script again = parseScript(text);
    CHECK(structuralEqual(s, again));
  }
}

TEST_CASE("translate25 parse option") {
  ParseOptions opts;
  opts.translate25 = true;
  Script s = parseScript(
      "(declare-fun x () String)(assert (str.in.re x (re.* (str.to.re \"ab\"))))",
      opts);
  CHECK(s.assertions[0]->decl == "str.in_re");
}

TEST_CASE("content hash known vectors") {
  CHECK(contentHash("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(contentHash("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(contentHash("abc") != contentHash("abd"));
}
