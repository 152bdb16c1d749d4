#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "smtquery/ast.hpp"
#include "smtquery/smtlib.hpp"

namespace testutil {

namespace fs = std::filesystem;
using namespace smtquery;

inline fs::path fixtureDir() { return FIXTURE_DIR; }
inline fs::path mockDir() { return MOCK_DIR; }

inline std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<fs::path> fixtureFiles() {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(fixtureDir()))
    if (e.is_regular_file() && e.path().extension() == ".smt2")
      out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("smtquery-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// random well-formed scripts over the supported operator set
class ScriptGen {
 public:
  explicit ScriptGen(std::uint64_t seed) : rng_(seed) {}

  Script script() {
    Script s;
    s.logic = "QF_SLIA";
    int nStr = pick(1, 3), nInt = pick(0, 2), nBool = pick(0, 1);
    for (int i = 0; i < nStr; ++i)
      s.declarations.emplace_back("s" + std::to_string(i), Sort::String);
    for (int i = 0; i < nInt; ++i)
      s.declarations.emplace_back("i" + std::to_string(i), Sort::Integer);
    for (int i = 0; i < nBool; ++i)
      s.declarations.emplace_back("b" + std::to_string(i), Sort::Bool);
    decls_ = &s.declarations;
    int nAsserts = pick(1, 4);
    for (int i = 0; i < nAsserts; ++i) s.assertions.push_back(boolExpr(3));
    s.trailing = {"(check-sat)"};
    s.renumber();
    return s;
  }

  ExprPtr boolExpr(int depth) {
    if (depth <= 0) return boolLeaf();
    switch (pick(0, 7)) {
      case 0: return makeOp("and", Sort::Bool, {boolExpr(depth - 1), boolExpr(depth - 1)});
      case 1: return makeOp("or", Sort::Bool, {boolExpr(depth - 1), boolExpr(depth - 1)});
      case 2: return makeOp("not", Sort::Bool, {boolExpr(depth - 1)});
      case 3: return makeOp("=", Sort::Bool, {strExpr(depth - 1), strExpr(depth - 1)});
      case 4: return makeOp("<=", Sort::Bool, {intExpr(depth - 1), intExpr(depth - 1)});
      case 5: return makeOp("str.in_re", Sort::Bool, {strExpr(depth - 1), reExpr(depth - 1)});
      case 6: return makeOp("str.contains", Sort::Bool, {strExpr(depth - 1), strExpr(depth - 1)});
      default: return boolLeaf();
    }
  }

  ExprPtr strExpr(int depth) {
    if (depth <= 0) return strLeaf();
    switch (pick(0, 4)) {
      case 0: {
        std::vector<ExprPtr> kids;
        int n = pick(2, 3);
        for (int i = 0; i < n; ++i) kids.push_back(strExpr(depth - 1));
        return makeOp("str.++", Sort::String, std::move(kids));
      }
      case 1:
        return makeOp("str.substr", Sort::String,
                      {strExpr(depth - 1), intExpr(depth - 1), intExpr(depth - 1)});
      case 2:
        return makeOp("str.replace", Sort::String,
                      {strExpr(depth - 1), strExpr(depth - 1), strExpr(depth - 1)});
      case 3: return makeOp("str.at", Sort::String, {strExpr(depth - 1), intExpr(depth - 1)});
      default: return strLeaf();
    }
  }

  ExprPtr intExpr(int depth) {
    if (depth <= 0) return intLeaf();
    switch (pick(0, 3)) {
      case 0: return makeOp("+", Sort::Integer, {intExpr(depth - 1), intExpr(depth - 1)});
      case 1: return makeOp("str.len", Sort::Integer, {strExpr(depth - 1)});
      case 2: return makeOp("-", Sort::Integer, {intExpr(depth - 1)});
      default: return intLeaf();
    }
  }

  ExprPtr reExpr(int depth) {
    if (depth <= 0) return makeOp("str.to_re", Sort::RE, {strLit()});
    switch (pick(0, 5)) {
      case 0: return makeOp("re.*", Sort::RE, {reExpr(depth - 1)});
      case 1: return makeOp("re.union", Sort::RE, {reExpr(depth - 1), reExpr(depth - 1)});
      case 2: return makeOp("re.++", Sort::RE, {reExpr(depth - 1), reExpr(depth - 1)});
      case 3: return makeOp("re.comp", Sort::RE, {reExpr(depth - 1)});
      case 4: return makeOp("re.loop", Sort::RE, {reExpr(depth - 1)},
                            {static_cast<std::int64_t>(pick(0, 2)),
                             static_cast<std::int64_t>(pick(2, 5))});
      default: return makeOp("str.to_re", Sort::RE, {strLit()});
    }
  }

  ExprPtr strLit() {
    static const char* lits[] = {"", "a", "ab", "abc", "<>", "x\"y", "ä"};
    return makeStrLit(lits[pick(0, 6)]);
  }

  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

 private:
  ExprPtr boolLeaf() {
    auto v = varOfSort(Sort::Bool);
    if (v && pick(0, 1)) return v;
    return makeBoolLit(pick(0, 1) == 1);
  }
  ExprPtr strLeaf() {
    auto v = varOfSort(Sort::String);
    if (v && pick(0, 1)) return v;
    return strLit();
  }
  ExprPtr intLeaf() {
    auto v = varOfSort(Sort::Integer);
    if (v && pick(0, 1)) return v;
    return makeIntLit(pick(-5, 20));
  }
  ExprPtr varOfSort(Sort sort) {
    std::vector<const std::string*> names;
    for (const auto& [name, s] : *decls_)
      if (s == sort) names.push_back(&name);
    if (names.empty()) return nullptr;
    return makeVariable(*names[pick(0, static_cast<int>(names.size()) - 1)], sort);
  }

  std::mt19937_64 rng_;
  const std::vector<std::pair<std::string, Sort>>* decls_ = nullptr;
};

}  // namespace testutil
