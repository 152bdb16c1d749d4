#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "smtquery/extract.hpp"
#include "smtquery/harness.hpp"
#include "smtquery/predicates.hpp"
#include "smtquery/store.hpp"
#include "smtquery/transforms.hpp"

namespace smtquery {

struct SyntaxError : std::runtime_error {
  SyntaxError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at column " + std::to_string(position + 1)),
        position(position) {}
  std::size_t position;
};

struct Condition {
  enum class Type { Pred, And, Or, Not, True, False };
  Type type = Type::True;
  PredicateCall pred;                                  // Type::Pred
  std::vector<std::shared_ptr<Condition>> children;    // 2 for And/Or, 1 for Not
};
using ConditionPtr = std::shared_ptr<Condition>;

enum class SelectOutput { Name, Hash, Content };

struct Query {
  bool isSelect = true;
  SelectOutput output = SelectOutput::Name;        // Select only
  ExtractorId extractor = ExtractorId::Count;      // Extract only
  TransformId function = TransformId::Identity;    // Extract only
  DatasetSelector dataset;
  ConditionPtr condition;  // never null after parsing
};

// Keywords are case-insensitive, names are not. An omitted Apply clause means
// Identity; an omitted Where clause means True.
Query parseQuery(const std::string& text);

struct QueryEnv {
  Store* store = nullptr;
  AstCache* cache = nullptr;
  std::vector<SolverConfig> solvers;
  std::filesystem::path outputDir = "output";
  bool translate25 = false;
  // run missing solvers on demand when a solver predicate needs them
  bool scheduleOnDemand = true;
  int jobs = 1;
  std::ostream* out = nullptr;  // defaults to std::cout
  std::ostream* err = nullptr;  // defaults to std::cerr
};

// Evaluates the query with its side effects (printed lines, exported files)
// and returns the match set. Instances that fail to parse are skipped with a
// warning.
QueryResult runQuery(const Query& q, QueryEnv& env);

// One query per line until end-of-input or `exit`; errors are reported and the
// loop continues.
void repl(QueryEnv& env, std::istream& in, std::ostream& out);

}  // namespace smtquery
