#include <array>
#include <cctype>
#include <string>
#include <utility>

#include "smtquery/smtlib.hpp"

namespace smtquery {

namespace {

constexpr std::array<std::pair<const char*, const char*>, 6> kKeywordMap{{
    {"int.to.str", "str.from_int"},
    {"str.to.int", "str.to_int"},
    {"str.in.re", "str.in_re"},
    {"str.to.re", "str.to_re"},
    {"re.nostr", "re.none"},
    {"re.empty", "re.none"},
}};

bool isSymbolChar(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  return std::string_view("~!@$%^&*_-+=<>.?/:").find(c) != std::string_view::npos;
}

bool isHexDigit(char c) { return std::isxdigit(static_cast<unsigned char>(c)); }

const char* mapKeyword(const std::string& tok) {
  for (const auto& [from, to] : kKeywordMap)
    if (tok == from) return to;
  return nullptr;
}

}  // namespace

std::string translate25to26(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c == '"') {
      // String literal: copy up to the closing quote, rewriting \xHH escapes.
      out += c;
      ++i;
      while (i < n) {
        if (text[i] == '"') {
          if (i + 1 < n && text[i + 1] == '"') {  // "" escape
            out += "\"\"";
            i += 2;
            continue;
          }
          out += '"';
          ++i;
          break;
        }
        if (text[i] == '\\' && i + 3 < n && text[i + 1] == 'x' &&
            isHexDigit(text[i + 2]) && isHexDigit(text[i + 3])) {
          char h1 = text[i + 2], h2 = text[i + 3];
          out += "\\u{";
          if (h1 == '0')
            out += h2;  // leading zero dropped
          else {
            out += h1;
            out += h2;
          }
          out += '}';
          i += 4;
          continue;
        }
        out += text[i];
        ++i;
      }
      continue;
    }
    if (c == ';') {  // comment runs to end of line, no rewriting inside
      while (i < n && text[i] != '\n') out += text[i++];
      continue;
    }
    if (isSymbolChar(c)) {
      std::size_t start = i;
      while (i < n && isSymbolChar(text[i])) ++i;
      std::string tok = text.substr(start, i - start);
      if (const char* to = mapKeyword(tok))
        out += to;
      else
        out += tok;
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

}  // namespace smtquery
