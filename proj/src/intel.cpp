#include <algorithm>
#include <set>

#include "smtquery/intel.hpp"

namespace smtquery {

namespace {

json computeRec(Expr& node, const IntelSpec& spec) {
  json merged = spec.neutral;
  for (auto& c : node.children)
    merged = spec.merge(merged, computeRec(*c, spec));
  json value;
  try {
    value = spec.apply(node, merged);
  } catch (const std::exception& e) {
    throw IntelError("intel pass '" + spec.name + "' failed on node '" +
                     node.decl + "': " + e.what());
  }
  node.intel[spec.name] = IntelEntry{spec.version, value};
  return value;
}

bool isHigherOrder(const std::string& decl) {
  static const std::set<std::string> ho = {
      "str.substr",   "str.indexof", "str.replace",  "str.at",
      "str.contains", "str.prefixof", "str.suffixof", "str.to_int",
      "str.from_int"};
  return ho.count(decl) > 0;
}

bool allChildrenSort(const Expr& e, Sort s) {
  if (e.children.empty()) return false;
  return std::all_of(e.children.begin(), e.children.end(),
                     [s](const ExprPtr& c) { return c->sort == s; });
}

long codepointLength(const std::string& utf8) {
  long n = 0;
  for (unsigned char c : utf8)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

constexpr int kRegexNodeBudget = 10000;

std::optional<long> regexMaxLengthRec(const Expr& re, int& budget) {
  if (--budget <= 0) return std::nullopt;
  const std::string& d = re.decl;
  if (d == "re.none") return 0;
  if (d == "re.allchar" || d == "re.range") return 1;
  if (d == "str.to_re") {
    const Expr& arg = *re.children[0];
    if (arg.decl == kStrLit) return codepointLength(arg.value);
    return std::nullopt;
  }
  if (d == "re.++") {
    long sum = 0;
    for (const auto& c : re.children) {
      auto v = regexMaxLengthRec(*c, budget);
      if (!v) return std::nullopt;
      sum += *v;
    }
    return sum;
  }
  if (d == "re.union") {
    long mx = 0;
    for (const auto& c : re.children) {
      auto v = regexMaxLengthRec(*c, budget);
      if (!v) return std::nullopt;
      mx = std::max(mx, *v);
    }
    return mx;
  }
  if (d == "re.inter") {
    std::optional<long> mn;
    for (const auto& c : re.children) {
      auto v = regexMaxLengthRec(*c, budget);
      if (v && (!mn || *v < *mn)) mn = v;
    }
    return mn;
  }
  if (d == "re.opt") return regexMaxLengthRec(*re.children[0], budget);
  if (d == "re.loop" && re.params.size() == 2) {
    auto v = regexMaxLengthRec(*re.children[0], budget);
    if (!v) return std::nullopt;
    return re.params[1] * *v;
  }
  // re.all, re.*, re.+, re.comp, generic: unbounded
  return std::nullopt;
}

}  // namespace

bool isVarFreeStringTerm(const Expr& e) {
  if (e.decl == kStrLit) return true;
  if (e.decl == "str.++")
    return std::all_of(e.children.begin(), e.children.end(),
                       [](const ExprPtr& c) { return isVarFreeStringTerm(*c); });
  return false;
}

bool isFlatStringTerm(const Expr& e) {
  if (e.kind == Kind::Variable && e.sort == Sort::String) return true;
  if (e.decl == kStrLit) return true;
  if (e.decl == "str.++")
    return std::all_of(e.children.begin(), e.children.end(),
                       [](const ExprPtr& c) { return isFlatStringTerm(*c); });
  return false;
}

json computeIntel(Expr& root, const IntelSpec& spec) {
  return computeRec(root, spec);
}

std::optional<long> regexMaxLength(const Expr& re) {
  int budget = kRegexNodeBudget;
  return regexMaxLengthRec(re, budget);
}

// -------------------------------------------------------------------- varcount

const IntelSpec& varCountSpec() {
  static const IntelSpec spec = {
      "varcount",
      1,
      json::object(),
      [](const Expr& n, const json& merged) -> json {
        if (n.kind != Kind::Variable) return merged;
        json out = merged;
        out[n.decl] = out.value(n.decl, 0L) + 1;
        return out;
      },
      [](const json& a, const json& b) -> json {
        json out = a;
        for (const auto& [k, v] : b.items())
          out[k] = out.value(k, 0L) + v.get<long>();
        return out;
      },
  };
  return spec;
}

// ----------------------------------------------------------------------- kinds
//
// Aside from the four exposed flags the value carries fold-state:
//   aLin: the whole subtree is a linear length/integer term
//   aStr: the whole subtree is a flat string term (vars, literals, concat)
//   len:  the subtree contains a well-formed str.len application

const IntelSpec& kindFlagsSpec() {
  static const json neutral = {{"weq", false}, {"regex", false},
                               {"lin", false}, {"ho", false},
                               {"aLin", true}, {"aStr", true},
                               {"len", false}};
  static const IntelSpec spec = {
      "kinds",
      1,
      neutral,
      [](const Expr& n, const json& m) -> json {
        json out = m;
        const std::string& d = n.decl;
        bool aLin = false, aStr = false;
        if (n.kind == Kind::Variable) {
          aLin = n.sort == Sort::Integer;
          aStr = n.sort == Sort::String;
        } else if (d == kIntLit) {
          aLin = true;
        } else if (d == kStrLit) {
          aStr = true;
        } else if (d == "+" || d == "-" || d == "*") {
          aLin = m["aLin"].get<bool>();
        } else if (d == "str.len") {
          aLin = m["aStr"].get<bool>();
          out["len"] = true;
        } else if (d == "str.++") {
          aStr = m["aStr"].get<bool>();
        }
        bool cmp = d == "<" || d == "<=" || d == ">" || d == ">=" ||
                   ((d == "=" || d == "distinct") &&
                    allChildrenSort(n, Sort::Integer));
        if (cmp && m["aLin"].get<bool>() && out["len"].get<bool>())
          out["lin"] = true;
        if (d == "=" && allChildrenSort(n, Sort::String)) out["weq"] = true;
        if (d == "str.in_re") out["regex"] = true;
        if (isHigherOrder(d)) out["ho"] = true;
        out["aLin"] = aLin;
        out["aStr"] = aStr;
        return out;
      },
      [](const json& a, const json& b) -> json {
        return json{{"weq", a["weq"].get<bool>() || b["weq"].get<bool>()},
                    {"regex", a["regex"].get<bool>() || b["regex"].get<bool>()},
                    {"lin", a["lin"].get<bool>() || b["lin"].get<bool>()},
                    {"ho", a["ho"].get<bool>() || b["ho"].get<bool>()},
                    {"aLin", a["aLin"].get<bool>() && b["aLin"].get<bool>()},
                    {"aStr", a["aStr"].get<bool>() && b["aStr"].get<bool>()},
                    {"len", a["len"].get<bool>() || b["len"].get<bool>()}};
      },
  };
  return spec;
}

// ------------------------------------------------------------------ regexshape
//
//   mem:  every Boolean atom in the subtree is a membership predicate
//   simp: every membership left side is a variable or a variable-free string
//   conc: every membership left side is a concatenation of vars and constants
//   ci:   the subtree contains re.comp or re.inter
//   cnt:  number of membership atoms

const IntelSpec& regexShapeSpec() {
  static const json neutral = {{"mem", true}, {"simp", true}, {"conc", true},
                               {"ci", false}, {"cnt", 0L}};
  static const IntelSpec spec = {
      "regexshape",
      1,
      neutral,
      [](const Expr& n, const json& m) -> json {
        json out = m;
        const std::string& d = n.decl;
        if (d == "str.in_re") {
          const Expr& lhs = *n.children[0];
          bool simple = (lhs.kind == Kind::Variable && lhs.sort == Sort::String) ||
                        isVarFreeStringTerm(lhs);
          out["simp"] = m["simp"].get<bool>() && simple;
          out["conc"] = m["conc"].get<bool>() && isFlatStringTerm(lhs);
          out["cnt"] = m["cnt"].get<long>() + 1;
          return out;
        }
        if (d == "re.comp" || d == "re.inter") {
          out["ci"] = true;
          return out;
        }
        if (d == "and" || d == "or" || d == "not" || d == kBoolLit ||
            n.kind == Kind::Variable || n.isLiteral())
          return out;
        if (n.sort == Sort::Bool) out["mem"] = false;  // some other atom
        return out;
      },
      [](const json& a, const json& b) -> json {
        return json{{"mem", a["mem"].get<bool>() && b["mem"].get<bool>()},
                    {"simp", a["simp"].get<bool>() && b["simp"].get<bool>()},
                    {"conc", a["conc"].get<bool>() && b["conc"].get<bool>()},
                    {"ci", a["ci"].get<bool>() || b["ci"].get<bool>()},
                    {"cnt", a["cnt"].get<long>() + b["cnt"].get<long>()}};
      },
  };
  return spec;
}

// --------------------------------------------------------- script-level wrappers

namespace {

json ensurePass(Script& script, const IntelSpec& spec, bool* changed) {
  json folded = spec.neutral;
  for (auto& a : script.assertions) {
    auto it = a->intel.find(spec.name);
    if (it == a->intel.end() || it->second.version != spec.version) {
      computeIntel(*a, spec);
      if (changed) *changed = true;
      it = a->intel.find(spec.name);
    }
    folded = spec.merge(folded, it->second.value);
  }
  return folded;
}

}  // namespace

bool ensureBuiltinIntel(Script& script) {
  bool changed = false;
  ensurePass(script, varCountSpec(), &changed);
  ensurePass(script, kindFlagsSpec(), &changed);
  ensurePass(script, regexShapeSpec(), &changed);
  return changed;
}

VarCountValue variableCounts(Script& script) {
  json folded = ensurePass(script, varCountSpec(), nullptr);
  VarCountValue out;
  for (const auto& [k, v] : folded.items()) out[k] = v.get<long>();
  return out;
}

KindFlags kindFlagsFromJson(const json& v) {
  return {v["weq"].get<bool>(), v["regex"].get<bool>(), v["lin"].get<bool>(),
          v["ho"].get<bool>()};
}

KindFlags constraintKinds(Script& script) {
  return kindFlagsFromJson(ensurePass(script, kindFlagsSpec(), nullptr));
}

RegexShapeValue regexShapeFromJson(const json& v) {
  return {v["mem"].get<bool>(), v["simp"].get<bool>(), v["conc"].get<bool>(),
          v["ci"].get<bool>(), v["cnt"].get<long>()};
}

RegexShapeValue regexClassification(Script& script) {
  return regexShapeFromJson(ensurePass(script, regexShapeSpec(), nullptr));
}

BoundValue upperBounds(const Script& script) {
  BoundValue bounds;
  for (const auto& [name, sort] : script.declarations)
    if (sort == Sort::String) bounds[name] = std::nullopt;

  auto record = [&bounds](const std::string& var, long bound) {
    bound = std::max(bound, 0L);
    auto it = bounds.find(var);
    if (it == bounds.end()) return;
    if (!it->second || bound < *it->second) it->second = bound;
  };

  std::vector<const Expr*> conjuncts;
  std::function<void(const Expr&)> flatten = [&](const Expr& e) {
    if (e.decl == "and") {
      for (const auto& c : e.children) flatten(*c);
    } else {
      conjuncts.push_back(&e);
    }
  };
  for (const auto& a : script.assertions) flatten(*a);

  for (const Expr* c : conjuncts) {
    const Expr& e = *c;
    if ((e.decl == "<=" || e.decl == "<") && e.children.size() == 2 &&
        e.children[0]->decl == "str.len" &&
        e.children[0]->children[0]->isVariable() &&
        e.children[1]->decl == kIntLit) {
      long k = e.children[1]->params[0];
      record(e.children[0]->children[0]->decl, e.decl == "<" ? k - 1 : k);
    } else if (e.decl == "=" && e.children.size() == 2) {
      const Expr* var = nullptr;
      const Expr* lit = nullptr;
      for (int i = 0; i < 2; ++i) {
        if (e.children[i]->isVariable()) var = e.children[i].get();
        if (e.children[i]->decl == kStrLit) lit = e.children[i].get();
      }
      if (var && lit && var->sort == Sort::String)
        record(var->decl, codepointLength(lit->value));
    } else if (e.decl == "str.in_re" && e.children[0]->isVariable()) {
      if (auto k = regexMaxLength(*e.children[1]))
        record(e.children[0]->decl, *k);
    }
  }
  return bounds;
}

}  // namespace smtquery
