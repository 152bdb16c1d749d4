#include <cctype>
#include <cstdio>
#include <sstream>
#include <string_view>

#include "smtquery/smtlib.hpp"

namespace smtquery {

namespace {

const char* sortToken(Sort s) {
  switch (s) {
    case Sort::String: return "String";
    case Sort::Bool: return "Bool";
    case Sort::Integer: return "Int";
    case Sort::RE: return "RegLan";
    case Sort::Unknown: return "Unknown";
  }
  return "Unknown";
}

bool needsQuoting(const std::string& sym) {
  if (sym.empty()) return true;
  for (char c : sym) {
    bool plain = std::isalnum(static_cast<unsigned char>(c)) ||
                 std::string_view("~!@$%^&*_-+=<>.?/").find(c) !=
                     std::string_view::npos;
    if (!plain) return true;
  }
  return false;
}

std::string printSymbol(const std::string& sym) {
  if (needsQuoting(sym)) return "|" + sym + "|";
  return sym;
}

void printRec(const Expr& e, std::string& out) {
  if (e.kind == Kind::Variable) {
    out += printSymbol(e.decl);
    return;
  }
  if (e.decl == kStrLit) {
    out += quoteStringLit(e.value);
    return;
  }
  if (e.decl == kIntLit) {
    long long v = std::stoll(e.value);
    if (v < 0) {
      out += "(- " + std::to_string(-v) + ")";
    } else {
      out += e.value;
    }
    return;
  }
  if (e.decl == kBoolLit) {
    out += e.value;
    return;
  }
  if (e.decl == kGeneric) {
    if (e.children.empty()) {
      // raw leaf kept verbatim (e.g. an indexed identifier)
      out += e.value.empty() ? "generic" : e.value;
      return;
    }
    out += '(';
    out += e.value.empty() ? "generic" : e.value;
    for (const auto& c : e.children) {
      out += ' ';
      printRec(*c, out);
    }
    out += ')';
    return;
  }
  if (e.children.empty()) {  // nullary operators such as re.none
    out += e.decl;
    return;
  }
  if (e.decl == "re.loop" && e.params.size() == 2) {
    out += "((_ re.loop " + std::to_string(e.params[0]) + " " +
           std::to_string(e.params[1]) + ") ";
    printRec(*e.children[0], out);
    out += ')';
    return;
  }
  out += '(';
  out += e.decl;
  for (const auto& c : e.children) {
    out += ' ';
    printRec(*c, out);
  }
  out += ')';
}

}  // namespace

std::string quoteStringLit(const std::string& decoded) {
  std::string out = "\"";
  for (unsigned char c : decoded) {
    if (c == '"') {
      out += "\"\"";
    } else if (c < 0x20 || c == 0x7f) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "\\u{%x}", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  out += '"';
  return out;
}

std::string printExpr(const Expr& e) {
  std::string out;
  printRec(e, out);
  return out;
}

std::string printScript(const Script& s) {
  std::ostringstream out;
  if (s.logic) out << "(set-logic " << *s.logic << ")\n";
  for (const auto& [name, sort] : s.declarations)
    out << "(declare-fun " << printSymbol(name) << " () " << sortToken(sort)
        << ")\n";
  for (const auto& a : s.assertions)
    out << "(assert " << printExpr(*a) << ")\n";
  for (const auto& t : s.trailing) out << t << "\n";
  return out.str();
}

}  // namespace smtquery
