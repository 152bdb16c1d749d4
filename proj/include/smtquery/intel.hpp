#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "smtquery/ast.hpp"

namespace smtquery {

struct IntelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One bottom-up pass: value(n) = apply(n, merge(value(c1), ..., value(ck), neutral)).
// merge must be associative with neutral as identity.
struct IntelSpec {
  std::string name;
  int version = 1;
  json neutral;
  std::function<json(const Expr&, const json& mergedChildren)> apply;
  std::function<json(const json&, const json&)> merge;
};

// Annotates every node of the tree with key (spec.name, spec.version) and
// returns the root value. Existing entries for other keys are untouched.
json computeIntel(Expr& root, const IntelSpec& spec);

// Built-in passes.
const IntelSpec& varCountSpec();     // "varcount": variable name -> occurrences
const IntelSpec& kindFlagsSpec();    // "kinds": constraint class flags
const IntelSpec& regexShapeSpec();   // "regexshape": membership fragment shape

struct KindFlags {
  bool hasWEQ = false;
  bool hasRegex = false;
  bool hasLinears = false;
  bool hasHigherOrder = false;
};

struct RegexShapeValue {
  bool onlyMembership = false;
  bool simpleLHS = false;
  bool concatLHS = false;
  bool usesComplementOrInter = false;
  long membershipCount = 0;
};

// variable name -> occurrence count over all assertions
using VarCountValue = std::map<std::string, long>;

// string variable -> length upper bound; nullopt = unbounded
using BoundValue = std::map<std::string, std::optional<long>>;

VarCountValue variableCounts(Script& script);
KindFlags constraintKinds(Script& script);
RegexShapeValue regexClassification(Script& script);
BoundValue upperBounds(const Script& script);

KindFlags kindFlagsFromJson(const json& v);
RegexShapeValue regexShapeFromJson(const json& v);

// Ensures the named built-in passes are present (at current versions) on every
// assertion root; computes the missing ones. Returns true when anything was
// recomputed.
bool ensureBuiltinIntel(Script& script);

// String-term shape helpers shared with the transform layer.
bool isVarFreeStringTerm(const Expr& e);  // literals and concatenations thereof
bool isFlatStringTerm(const Expr& e);     // variables, literals, concatenations

// Maximum word length of the language of a finite regular expression,
// nullopt when the language is unbounded (or the node budget is exhausted).
std::optional<long> regexMaxLength(const Expr& re);

}  // namespace smtquery
