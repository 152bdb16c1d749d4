#include <algorithm>
#include <cctype>

#include "smtquery/predicates.hpp"

namespace smtquery {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string resolveSolver(const std::string& arg, const EvalContext& ctx) {
  for (const auto& s : ctx.solvers)
    if (lower(s) == lower(arg)) return s;
  throw UnknownSolver("unknown solver: " + arg);
}

long stringVarDeclCount(const Script& script) {
  long n = 0;
  for (const auto& [name, sort] : script.declarations)
    if (sort == Sort::String) ++n;
  return n;
}

bool isQuadratic(Script& script) {
  auto counts = variableCounts(script);
  for (const auto& [name, count] : counts) {
    auto sort = script.declaredSort(name);
    if (sort && *sort == Sort::String && count > 2) return false;
  }
  return true;
}

// every word equation is x = alpha with x used nowhere else
bool isPatternMatching(Script& script) {
  auto counts = variableCounts(script);
  bool ok = true;
  for (const auto& a : script.assertions) {
    forEachNode(*a, [&](const Expr& n) {
      if (!ok || n.decl != "=" || n.children.size() != 2) return;
      const Expr& l = *n.children[0];
      const Expr& r = *n.children[1];
      if (l.sort != Sort::String || r.sort != Sort::String) return;
      if (!isFlatStringTerm(l) || !isFlatStringTerm(r)) {
        ok = false;
        return;
      }
      auto defines = [&](const Expr& side) {
        return side.isVariable() && counts[side.decl] == 1;
      };
      if (!defines(l) && !defines(r)) ok = false;
    });
    if (!ok) break;
  }
  return ok;
}

bool isUpperBounded(Script& script) {
  auto bounds = upperBounds(script);
  for (const auto& [name, sort] : script.declarations) {
    if (sort != Sort::String) continue;
    auto it = bounds.find(name);
    if (it == bounds.end() || !it->second) return false;
  }
  return true;
}

bool resultUsable(const std::optional<ResultRec>& r) {
  return r && r->result != SolverResult::Timeout &&
         r->result != SolverResult::Crash;
}

}  // namespace

const std::vector<PredicateInfo>& predicateCatalog() {
  static const std::vector<PredicateInfo> catalog = {
      {"hasWEQ", 0, "instance contains word equations"},
      {"hasLinears", 0, "instance contains linear length constraints"},
      {"hasRegex", 0, "instance contains regular membership predicates"},
      {"isSimpleRegex", 0, "simple regular expression fragment"},
      {"isSimpleRegexConcatenation", 0,
       "simple regular expression fragment with concatenation"},
      {"isUpperBounded", 0,
       "syntactic length upper bound exists for every string variable"},
      {"isQuadratic", 0, "every string variable occurs at most twice"},
      {"isPatternMatching", 0,
       "only word equations x = alpha with x occurring nowhere else"},
      {"hasAtLeast5Variables", 0, "at least 5 string variables"},
      {"isSAT", 1, "solver declared the instance satisfiable"},
      {"isUNSAT", 1, "solver declared the instance unsatisfiable"},
      {"hasValidModel", 1, "solver returned SAT with a validated model"},
      {"isCorrect", 1,
       "solver's answer is backed by a valid model or the UNSAT majority"},
      {"isFaster", 2, "first solver produced a result quicker than the second"},
  };
  return catalog;
}

bool evalPredicate(const PredicateCall& call, EvalContext& ctx) {
  const PredicateInfo* info = nullptr;
  for (const auto& p : predicateCatalog())
    if (p.name == call.name) info = &p;
  if (!info) throw UnknownPredicate("unknown predicate: " + call.name);
  if (static_cast<int>(call.args.size()) != info->arity)
    throw UnknownPredicate(call.name + " expects " +
                           std::to_string(info->arity) + " argument(s)");

  if (info->arity == 0) {
    Script& script = ctx.script();
    if (call.name == "hasWEQ") return constraintKinds(script).hasWEQ;
    if (call.name == "hasLinears") return constraintKinds(script).hasLinears;
    if (call.name == "hasRegex") return constraintKinds(script).hasRegex;
    if (call.name == "isSimpleRegex") {
      auto shape = regexClassification(script);
      return shape.membershipCount > 0 && shape.onlyMembership &&
             shape.simpleLHS && !shape.usesComplementOrInter;
    }
    if (call.name == "isSimpleRegexConcatenation") {
      auto shape = regexClassification(script);
      return shape.membershipCount > 0 && shape.onlyMembership &&
             shape.concatLHS && !shape.usesComplementOrInter;
    }
    if (call.name == "isUpperBounded") return isUpperBounded(script);
    if (call.name == "isQuadratic") return isQuadratic(script);
    if (call.name == "isPatternMatching") return isPatternMatching(script);
    if (call.name == "hasAtLeast5Variables")
      return stringVarDeclCount(script) >= 5;
  }

  std::string s1 = resolveSolver(call.args[0], ctx);
  auto r1 = ctx.result(s1);

  if (call.name == "isSAT")
    return r1 && r1->result == SolverResult::Satisfied;
  if (call.name == "isUNSAT")
    return r1 && r1->result == SolverResult::Unsatisfied;
  if (call.name == "hasValidModel") {
    if (!r1 || r1->result != SolverResult::Satisfied) return false;
    auto v = ctx.validation(r1->id);
    return v && v->result == ValidationResult::ModelValid;
  }
  if (call.name == "isCorrect") {
    if (!r1) return false;
    auto v = ctx.validation(r1->id);
    if (!v) return false;
    return v->result == ValidationResult::ModelValid ||
           v->result == ValidationResult::MajorityAgree;
  }
  if (call.name == "isFaster") {
    std::string s2 = resolveSolver(call.args[1], ctx);
    auto r2 = ctx.result(s2);
    return resultUsable(r1) && resultUsable(r2) && r1->time < r2->time;
  }
  throw UnknownPredicate("unknown predicate: " + call.name);
}

}  // namespace smtquery
