#pragma once

#include <stdexcept>
#include <string>

#include "smtquery/ast.hpp"

namespace smtquery {

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                           std::to_string(column)),
        line(line),
        column(column) {}
};

// Rewrites SMT-LIB 2.5 keywords and \xHH string escapes to their 2.6 forms.
// Pure token-level rewrite; malformed input passes through unchanged.
std::string translate25to26(const std::string& text);

struct ParseOptions {
  bool translate25 = false;  // run translate25to26 as a pre-pass
};

Script parseScript(const std::string& text, const ParseOptions& opts = {});

std::string printScript(const Script& s);
std::string printExpr(const Expr& e);

// SMT-LIB 2.6 string literal form of a decoded string (quotes doubled,
// control characters as \u{..}).
std::string quoteStringLit(const std::string& decoded);

// Lowercase hex SHA-256 of the exact bytes.
std::string contentHash(const std::string& bytes);

}  // namespace smtquery
