#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "smtquery/intel.hpp"
#include "smtquery/transforms.hpp"

namespace smtquery {

namespace {

ExprPtr clone(const Expr& e) {
  auto out = std::make_shared<Expr>();
  out->kind = e.kind;
  out->decl = e.decl;
  out->sort = e.sort;
  out->params = e.params;
  out->value = e.value;
  for (const auto& c : e.children) out->children.push_back(clone(*c));
  return out;
}

bool isBoolLit(const Expr& e, bool v) {
  return e.decl == kBoolLit && (e.value == "true") == v;
}

// ------------------------------------------------------------- atom classifiers

bool isPureWordEquation(const Expr& e) {
  if (e.decl != "=" || e.children.size() < 2) return false;
  return std::all_of(e.children.begin(), e.children.end(),
                     [](const ExprPtr& c) { return isFlatStringTerm(*c); });
}

bool isLinearIntTerm(const Expr& e) {
  if (e.decl == kIntLit) return true;
  if (e.kind == Kind::Variable) return e.sort == Sort::Integer;
  if (e.decl == "+" || e.decl == "-" || e.decl == "*")
    return std::all_of(e.children.begin(), e.children.end(),
                       [](const ExprPtr& c) { return isLinearIntTerm(*c); });
  if (e.decl == "str.len") return isFlatStringTerm(*e.children[0]);
  return false;
}

bool containsStrLen(const Expr& e) {
  if (e.decl == "str.len") return true;
  return std::any_of(e.children.begin(), e.children.end(),
                     [](const ExprPtr& c) { return containsStrLen(*c); });
}

bool isLinearLengthAtom(const Expr& e) {
  bool cmp = e.decl == "<" || e.decl == "<=" || e.decl == ">" || e.decl == ">=";
  if (!cmp && (e.decl == "=" || e.decl == "distinct"))
    cmp = !e.children.empty() &&
          std::all_of(e.children.begin(), e.children.end(),
                      [](const ExprPtr& c) { return c->sort == Sort::Integer; });
  if (!cmp) return false;
  bool hasLen = false;
  for (const auto& c : e.children) {
    if (!isLinearIntTerm(*c)) return false;
    hasLen = hasLen || containsStrLen(*c);
  }
  return hasLen;
}

bool isMembershipAtom(const Expr& e) { return e.decl == "str.in_re"; }

// -------------------------------------------------------------------- restrict

using AtomKeep = std::function<bool(const Expr&)>;

// Replaces foreign atoms with `true` and simplifies the Boolean skeleton.
ExprPtr restrictBool(const Expr& e, const AtomKeep& keep) {
  if (keep(e)) return clone(e);
  if (e.decl == "and" || e.decl == "or") {
    const bool isAnd = e.decl == "and";
    std::vector<ExprPtr> kept;
    for (const auto& c : e.children) {
      auto r = restrictBool(*c, keep);
      if (isBoolLit(*r, !isAnd)) return makeBoolLit(!isAnd);  // dominating lit
      if (isBoolLit(*r, isAnd)) continue;                     // neutral lit
      kept.push_back(std::move(r));
    }
    if (kept.empty()) return makeBoolLit(isAnd);
    if (kept.size() == 1) return kept[0];
    return makeOp(e.decl, Sort::Bool, std::move(kept));
  }
  if (e.decl == "not") {
    auto r = restrictBool(*e.children[0], keep);
    if (r->decl == kBoolLit) return makeBoolLit(r->value != "true");
    return makeOp("not", Sort::Bool, {std::move(r)});
  }
  if (e.decl == "ite" && e.sort == Sort::Bool) {
    auto c = restrictBool(*e.children[0], keep);
    auto t = restrictBool(*e.children[1], keep);
    auto f = restrictBool(*e.children[2], keep);
    if (isBoolLit(*c, true)) return t;
    if (isBoolLit(*c, false)) return f;
    return makeOp("ite", Sort::Bool, {std::move(c), std::move(t), std::move(f)});
  }
  return makeBoolLit(true);  // foreign atom
}

void collectUsedVariables(const Expr& e, std::set<std::string>& used) {
  if (e.kind == Kind::Variable) used.insert(e.decl);
  for (const auto& c : e.children) collectUsedVariables(*c, used);
}

Script restrictTo(const Script& s, const AtomKeep& keep) {
  Script out;
  out.logic = s.logic;
  out.trailing = s.trailing;
  for (const auto& a : s.assertions) {
    auto r = restrictBool(*a, keep);
    if (isBoolLit(*r, true)) continue;
    out.assertions.push_back(std::move(r));
  }
  std::set<std::string> used;
  for (const auto& a : out.assertions) collectUsedVariables(*a, used);
  for (const auto& d : s.declarations)
    if (used.count(d.first)) out.declarations.push_back(d);
  return out;
}

// ---------------------------------------------------------------- other passes

Script renameVariables(const Script& s) {
  std::map<std::string, std::string> mapping;
  std::map<Sort, int> counters;
  auto prefix = [](Sort sort) {
    switch (sort) {
      case Sort::String: return "str";
      case Sort::Integer: return "int";
      case Sort::Bool: return "bool";
      default: return "var";
    }
  };
  Script out;
  out.logic = s.logic;
  out.trailing = s.trailing;
  for (const auto& [name, sort] : s.declarations) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%02d", prefix(sort), ++counters[sort]);
    mapping[name] = buf;
    out.declarations.emplace_back(buf, sort);
  }
  for (const auto& a : s.assertions) {
    auto r = clone(*a);
    forEachNode(r, [&mapping](Expr& e) {
      if (e.kind == Kind::Variable) e.decl = mapping.at(e.decl);
    });
    out.assertions.push_back(std::move(r));
  }
  return out;
}

Script disjoinConstraints(const Script& s) {
  Script out;
  out.logic = s.logic;
  out.declarations = s.declarations;
  out.trailing = s.trailing;
  std::function<void(const Expr&)> split = [&](const Expr& e) {
    if (e.decl == "and") {
      for (const auto& c : e.children) split(*c);
    } else {
      out.assertions.push_back(clone(e));
    }
  };
  for (const auto& a : s.assertions) split(*a);
  return out;
}

ExprPtr reduceNegations(const Expr& e) {
  if (e.decl == "not" && e.children[0]->decl == "not")
    return reduceNegations(*e.children[0]->children[0]);
  auto out = clone(e);
  out->children.clear();
  for (const auto& c : e.children) out->children.push_back(reduceNegations(*c));
  return out;
}

ExprPtr equalsTrue(const Expr& e) {
  auto out = clone(e);
  out->children.clear();
  for (const auto& c : e.children) out->children.push_back(equalsTrue(*c));
  if (out->decl == "=" && out->children.size() == 2) {
    for (int i = 0; i < 2; ++i) {
      if (isBoolLit(*out->children[i], true) &&
          out->children[1 - i]->sort == Sort::Bool)
        return out->children[1 - i];
    }
  }
  return out;
}

Script mapAssertions(const Script& s, const std::function<ExprPtr(const Expr&)>& f) {
  Script out;
  out.logic = s.logic;
  out.declarations = s.declarations;
  out.trailing = s.trailing;
  for (const auto& a : s.assertions) out.assertions.push_back(f(*a));
  return out;
}

}  // namespace

TransformId transformByName(const std::string& name) {
  static const std::map<std::string, TransformId> byName = {
      {"Restrict2WEQ", TransformId::Restrict2WEQ},
      {"Restrict2Length", TransformId::Restrict2Length},
      {"Restrict2RegEx", TransformId::Restrict2RegEx},
      {"RenameVariables", TransformId::RenameVariables},
      {"DisjoinConstraints", TransformId::DisjoinConstraints},
      {"ReduceNegations", TransformId::ReduceNegations},
      {"EqualsTrue", TransformId::EqualsTrue},
      {"Identity", TransformId::Identity},
  };
  auto it = byName.find(name);
  if (it == byName.end()) throw UnknownTransform("unknown function '" + name + "'");
  return it->second;
}

const char* transformName(TransformId t) {
  switch (t) {
    case TransformId::Restrict2WEQ: return "Restrict2WEQ";
    case TransformId::Restrict2Length: return "Restrict2Length";
    case TransformId::Restrict2RegEx: return "Restrict2RegEx";
    case TransformId::RenameVariables: return "RenameVariables";
    case TransformId::DisjoinConstraints: return "DisjoinConstraints";
    case TransformId::ReduceNegations: return "ReduceNegations";
    case TransformId::EqualsTrue: return "EqualsTrue";
    case TransformId::Identity: return "Identity";
  }
  return "Identity";
}

std::vector<std::string> transformCatalog() {
  return {"Restrict2WEQ",       "Restrict2Length", "Restrict2RegEx",
          "RenameVariables",    "DisjoinConstraints", "ReduceNegations",
          "EqualsTrue",         "Identity"};
}

Script applyTransform(TransformId t, const Script& s) {
  Script out;
  switch (t) {
    case TransformId::Restrict2WEQ:
      out = restrictTo(s, isPureWordEquation);
      break;
    case TransformId::Restrict2Length:
      out = restrictTo(s, isLinearLengthAtom);
      break;
    case TransformId::Restrict2RegEx:
      out = restrictTo(s, isMembershipAtom);
      break;
    case TransformId::RenameVariables:
      out = renameVariables(s);
      break;
    case TransformId::DisjoinConstraints:
      out = disjoinConstraints(s);
      break;
    case TransformId::ReduceNegations:
      out = mapAssertions(s, [](const Expr& e) { return reduceNegations(e); });
      break;
    case TransformId::EqualsTrue:
      out = mapAssertions(s, [](const Expr& e) { return equalsTrue(e); });
      break;
    case TransformId::Identity:
      out = mapAssertions(s, [](const Expr& e) { return clone(e); });
      break;
  }
  for (const auto& a : out.assertions)
    if (a->sort != Sort::Bool && a->sort != Sort::Unknown)
      throw TransformError("transform produced a non-Bool assertion");
  out.renumber();
  return out;
}

}  // namespace smtquery
