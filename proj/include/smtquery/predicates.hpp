#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smtquery/intel.hpp"
#include "smtquery/store.hpp"

namespace smtquery {

struct UnknownPredicate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownSolver : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PredicateCall {
  std::string name;
  std::vector<std::string> args;  // solver names
};

// Plumbing handed to eval_predicate. The hooks hide where the data comes
// from: script() may parse on demand, result() may schedule a solver run.
struct EvalContext {
  std::function<Script&()> script;
  std::function<std::optional<ResultRec>(const std::string& solver)> result;
  std::function<std::optional<ValidationRec>(std::int64_t resultId)> validation;
  std::vector<std::string> solvers;  // configured solver names
};

struct PredicateInfo {
  std::string name;
  int arity;  // number of solver-name arguments
  std::string description;
};

const std::vector<PredicateInfo>& predicateCatalog();

// Throws UnknownPredicate on a name/arity mismatch, UnknownSolver when an
// argument is not a configured solver (matched case-insensitively).
bool evalPredicate(const PredicateCall& call, EvalContext& ctx);

}  // namespace smtquery
