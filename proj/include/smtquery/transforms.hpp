#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "smtquery/ast.hpp"

namespace smtquery {

enum class TransformId {
  Restrict2WEQ,
  Restrict2Length,
  Restrict2RegEx,
  RenameVariables,
  DisjoinConstraints,
  ReduceNegations,
  EqualsTrue,
  Identity,
};

struct TransformError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownTransform : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TransformId transformByName(const std::string& name);
const char* transformName(TransformId t);
std::vector<std::string> transformCatalog();

Script applyTransform(TransformId t, const Script& s);

}  // namespace smtquery
