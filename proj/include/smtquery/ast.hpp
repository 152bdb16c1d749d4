#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace smtquery {

using json = nlohmann::json;

enum class Sort { String, Bool, RE, Integer, Unknown };
enum class Kind { Variable, Other };

const char* sortName(Sort s);

// Literal markers used in Expr::decl.
inline constexpr const char* kStrLit = "str-lit";
inline constexpr const char* kIntLit = "int-lit";
inline constexpr const char* kBoolLit = "bool-lit";
inline constexpr const char* kGeneric = "generic";

struct IntelEntry {
  int version = 0;
  json value;
};

// name -> (version, value)
using IntelDictionary = std::map<std::string, IntelEntry>;

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
  int id = -1;
  Kind kind = Kind::Other;
  std::string decl;              // operator name, variable name, or literal marker
  Sort sort = Sort::Unknown;
  std::vector<std::int64_t> params;  // e.g. re.loop bounds
  std::string value;             // literal payload (decoded string, decimal int, "true"/"false")
  std::vector<ExprPtr> children;
  IntelDictionary intel;

  bool isVariable() const { return kind == Kind::Variable; }
  bool isLiteral() const {
    return decl == kStrLit || decl == kIntLit || decl == kBoolLit;
  }
};

ExprPtr makeVariable(const std::string& name, Sort sort);
ExprPtr makeStrLit(const std::string& decoded);
ExprPtr makeIntLit(std::int64_t v);
ExprPtr makeBoolLit(bool v);
ExprPtr makeOp(const std::string& decl, Sort sort, std::vector<ExprPtr> children,
               std::vector<std::int64_t> params = {});

struct Script {
  std::optional<std::string> logic;
  std::vector<std::pair<std::string, Sort>> declarations;
  std::vector<ExprPtr> assertions;
  std::vector<std::string> trailing;  // raw commands (check-sat, get-model, set-option, ...)

  std::optional<Sort> declaredSort(const std::string& name) const;
  // Reassigns node ids in preorder, unique within the script.
  void renumber();
};

// Structural equality modulo ids and intel.
bool structuralEqual(const Expr& a, const Expr& b);
bool structuralEqual(const Script& a, const Script& b);

// Hash of the subtree shape (ids and intel excluded); equal subtrees collide on purpose.
std::uint64_t subtreeHash(const Expr& e);

void forEachNode(const ExprPtr& root, const std::function<void(Expr&)>& fn);
void forEachNode(const Expr& root, const std::function<void(const Expr&)>& fn);

}  // namespace smtquery
