#include "smtquery/ast.hpp"

namespace smtquery {

const char* sortName(Sort s) {
  switch (s) {
    case Sort::String: return "String";
    case Sort::Bool: return "Bool";
    case Sort::RE: return "RE";
    case Sort::Integer: return "Integer";
    case Sort::Unknown: return "Unknown";
  }
  return "Unknown";
}

ExprPtr makeVariable(const std::string& name, Sort sort) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Variable;
  e->decl = name;
  e->sort = sort;
  return e;
}

ExprPtr makeStrLit(const std::string& decoded) {
  auto e = std::make_shared<Expr>();
  e->decl = kStrLit;
  e->sort = Sort::String;
  e->value = decoded;
  return e;
}

ExprPtr makeIntLit(std::int64_t v) {
  auto e = std::make_shared<Expr>();
  e->decl = kIntLit;
  e->sort = Sort::Integer;
  e->value = std::to_string(v);
  e->params.push_back(v);
  return e;
}

ExprPtr makeBoolLit(bool v) {
  auto e = std::make_shared<Expr>();
  e->decl = kBoolLit;
  e->sort = Sort::Bool;
  e->value = v ? "true" : "false";
  return e;
}

ExprPtr makeOp(const std::string& decl, Sort sort, std::vector<ExprPtr> children,
               std::vector<std::int64_t> params) {
  // unary minus over an integer literal is just a negative literal; keeping
  // it folded makes printing and parsing inverses
  if (decl == "-" && children.size() == 1 && children[0]->decl == kIntLit)
    return makeIntLit(-children[0]->params[0]);
  auto e = std::make_shared<Expr>();
  e->decl = decl;
  e->sort = sort;
  e->children = std::move(children);
  e->params = std::move(params);
  return e;
}

std::optional<Sort> Script::declaredSort(const std::string& name) const {
  for (const auto& [n, s] : declarations)
    if (n == name) return s;
  return std::nullopt;
}

namespace {
void renumberRec(Expr& e, int& next) {
  e.id = next++;
  for (auto& c : e.children) renumberRec(*c, next);
}
}  // namespace

void Script::renumber() {
  int next = 0;
  for (auto& a : assertions) renumberRec(*a, next);
}

bool structuralEqual(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.decl != b.decl || a.sort != b.sort ||
      a.params != b.params || a.value != b.value ||
      a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!structuralEqual(*a.children[i], *b.children[i])) return false;
  return true;
}

bool structuralEqual(const Script& a, const Script& b) {
  if (a.logic != b.logic || a.declarations != b.declarations ||
      a.trailing != b.trailing || a.assertions.size() != b.assertions.size())
    return false;
  for (std::size_t i = 0; i < a.assertions.size(); ++i)
    if (!structuralEqual(*a.assertions[i], *b.assertions[i])) return false;
  return true;
}

std::uint64_t subtreeHash(const Expr& e) {
  // FNV-1a over the node's shape.
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ull;
    return h;
  };
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : e.decl) h = mix(h, static_cast<unsigned char>(c));
  h = mix(h, static_cast<std::uint64_t>(e.kind));
  h = mix(h, static_cast<std::uint64_t>(e.sort));
  for (char c : e.value) h = mix(h, static_cast<unsigned char>(c) + 0x80);
  for (auto p : e.params) h = mix(h, static_cast<std::uint64_t>(p));
  for (const auto& c : e.children) h = mix(h, subtreeHash(*c));
  return h;
}

void forEachNode(const ExprPtr& root, const std::function<void(Expr&)>& fn) {
  fn(*root);
  for (auto& c : root->children) forEachNode(c, fn);
}

void forEachNode(const Expr& root, const std::function<void(const Expr&)>& fn) {
  fn(root);
  for (const auto& c : root.children) forEachNode(*c, fn);
}

}  // namespace smtquery
