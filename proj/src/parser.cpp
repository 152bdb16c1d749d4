#include <cctype>
#include <map>
#include <sstream>
#include <string_view>

#include "smtquery/smtlib.hpp"

namespace smtquery {

namespace {

// ---------------------------------------------------------------- s-expressions

struct Sexp {
  enum class Type { Symbol, String, Numeral, List } type = Type::List;
  std::string text;  // symbol name, decoded string, or numeral digits
  std::vector<Sexp> items;
  int line = 0, col = 0;

  bool isSym(std::string_view s) const {
    return type == Type::Symbol && text == s;
  }
};

void appendUtf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  struct Token {
    enum class Type { LParen, RParen, Symbol, String, Numeral, End } type;
    std::string text;
    int line, col;
  };

  Token next() {
    skipTrivia();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {Token::Type::End, "", line, col};
    char c = text_[pos_];
    if (c == '(') {
      advance();
      return {Token::Type::LParen, "(", line, col};
    }
    if (c == ')') {
      advance();
      return {Token::Type::RParen, ")", line, col};
    }
    if (c == '"') return lexString(line, col);
    if (c == '|') return lexQuotedSymbol(line, col);
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string t;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        t += text_[pos_];
        advance();
      }
      // "123abc" is a symbol, not a numeral
      if (pos_ < text_.size() && isSymbolChar(text_[pos_])) {
        while (pos_ < text_.size() && isSymbolChar(text_[pos_])) {
          t += text_[pos_];
          advance();
        }
        return {Token::Type::Symbol, t, line, col};
      }
      return {Token::Type::Numeral, t, line, col};
    }
    if (isSymbolChar(c)) {
      std::string t;
      while (pos_ < text_.size() && isSymbolChar(text_[pos_])) {
        t += text_[pos_];
        advance();
      }
      return {Token::Type::Symbol, t, line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  static bool isSymbolChar(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    return std::string_view("~!@$%^&*_-+=<>.?/:#").find(c) !=
           std::string_view::npos;
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipTrivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token lexString(int line, int col) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= text_.size())
        throw ParseError("unterminated string literal", line, col);
      char c = text_[pos_];
      if (c == '"') {
        advance();
        if (pos_ < text_.size() && text_[pos_] == '"') {  // "" escape
          out += '"';
          advance();
          continue;
        }
        return {Token::Type::String, out, line, col};
      }
      if (c == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'u') {
        std::size_t p = pos_ + 2;
        std::string hex;
        bool braced = p < text_.size() && text_[p] == '{';
        if (braced) {
          ++p;
          while (p < text_.size() && text_[p] != '}') hex += text_[p++];
          if (p < text_.size()) ++p;  // '}'
        } else {
          while (p < text_.size() && hex.size() < 4 &&
                 std::isxdigit(static_cast<unsigned char>(text_[p])))
            hex += text_[p++];
        }
        bool ok = !hex.empty() && hex.size() <= 6;
        for (char h : hex)
          ok = ok && std::isxdigit(static_cast<unsigned char>(h));
        if (ok && (!braced || hex.size() >= 1) && (braced || hex.size() == 4)) {
          std::uint32_t cp = std::stoul(hex, nullptr, 16);
          appendUtf8(out, cp);
          while (pos_ < text_.size() && pos_ < p) advance();
          continue;
        }
      }
      out += c;
      advance();
    }
  }

  Token lexQuotedSymbol(int line, int col) {
    advance();  // opening pipe
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '|') {
      out += text_[pos_];
      advance();
    }
    if (pos_ >= text_.size())
      throw ParseError("unterminated quoted symbol", line, col);
    advance();
    return {Token::Type::Symbol, out, line, col};
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class SexpReader {
 public:
  explicit SexpReader(const std::string& text) : lexer_(text) { bump(); }

  bool atEnd() const { return tok_.type == Lexer::Token::Type::End; }

  Sexp read() {
    switch (tok_.type) {
      case Lexer::Token::Type::LParen: {
        Sexp list;
        list.type = Sexp::Type::List;
        list.line = tok_.line;
        list.col = tok_.col;
        bump();
        while (tok_.type != Lexer::Token::Type::RParen) {
          if (tok_.type == Lexer::Token::Type::End)
            throw ParseError("unbalanced parentheses: missing ')'", list.line,
                             list.col);
          list.items.push_back(read());
        }
        bump();
        return list;
      }
      case Lexer::Token::Type::RParen:
        throw ParseError("unbalanced parentheses: unexpected ')'", tok_.line,
                         tok_.col);
      case Lexer::Token::Type::End:
        throw ParseError("unexpected end of input", tok_.line, tok_.col);
      default: {
        Sexp atom;
        atom.type = tok_.type == Lexer::Token::Type::String ? Sexp::Type::String
                    : tok_.type == Lexer::Token::Type::Numeral
                        ? Sexp::Type::Numeral
                        : Sexp::Type::Symbol;
        atom.text = tok_.text;
        atom.line = tok_.line;
        atom.col = tok_.col;
        bump();
        return atom;
      }
    }
  }

 private:
  void bump() { tok_ = lexer_.next(); }
  Lexer lexer_;
  Lexer::Token tok_{Lexer::Token::Type::End, "", 0, 0};
};

std::string renderSexp(const Sexp& s) {
  switch (s.type) {
    case Sexp::Type::Symbol:
    case Sexp::Type::Numeral:
      return s.text;
    case Sexp::Type::String:
      return quoteStringLit(s.text);
    case Sexp::Type::List: {
      std::string out = "(";
      for (std::size_t i = 0; i < s.items.size(); ++i) {
        if (i) out += ' ';
        out += renderSexp(s.items[i]);
      }
      out += ')';
      return out;
    }
  }
  return "";
}

// ---------------------------------------------------------------- operator table

struct OpSig {
  int minArity;
  int maxArity;  // -1 for unbounded
  enum class Shape {
    AllBool,       // -> Bool
    NotOp,         // 1 Bool -> Bool
    Ite,           // Bool T T -> T
    EqChain,       // >=2 same sort -> Bool
    IntCmp,        // >=2 Int -> Bool
    IntArith,      // >=1 Int -> Int
    StrConcat,     // >=1 String -> String
    StrToInt,      // String... -> Int (str.len, str.to_int, str.indexof)
    StrToStr,      // per-op child sorts -> String
    StrPred,       // String String -> Bool
    StrInRe,       // String RE -> Bool
    StrToRe,       // String -> RE
    ReNullary,     // -> RE
    ReNary,        // >=1 RE -> RE
    ReUnary,       // RE -> RE
    ReRange,       // String String -> RE
    ReLoop,        // RE -> RE with params
  } shape;
};

const std::map<std::string, OpSig>& opTable() {
  using S = OpSig::Shape;
  static const std::map<std::string, OpSig> table = {
      {"and", {1, -1, S::AllBool}},
      {"or", {1, -1, S::AllBool}},
      {"=>", {2, -1, S::AllBool}},
      {"not", {1, 1, S::NotOp}},
      {"ite", {3, 3, S::Ite}},
      {"=", {2, -1, S::EqChain}},
      {"distinct", {2, -1, S::EqChain}},
      {"<", {2, -1, S::IntCmp}},
      {"<=", {2, -1, S::IntCmp}},
      {">", {2, -1, S::IntCmp}},
      {">=", {2, -1, S::IntCmp}},
      {"+", {1, -1, S::IntArith}},
      {"-", {1, -1, S::IntArith}},
      {"*", {1, -1, S::IntArith}},
      {"str.++", {1, -1, S::StrConcat}},
      {"str.len", {1, 1, S::StrToInt}},
      {"str.at", {2, 2, S::StrToStr}},
      {"str.substr", {3, 3, S::StrToStr}},
      {"str.indexof", {2, 3, S::StrToInt}},
      {"str.contains", {2, 2, S::StrPred}},
      {"str.prefixof", {2, 2, S::StrPred}},
      {"str.suffixof", {2, 2, S::StrPred}},
      {"str.replace", {3, 3, S::StrToStr}},
      {"str.to_int", {1, 1, S::StrToInt}},
      {"str.from_int", {1, 1, S::StrToStr}},
      {"str.in_re", {2, 2, S::StrInRe}},
      {"str.to_re", {1, 1, S::StrToRe}},
      {"re.none", {0, 0, S::ReNullary}},
      {"re.all", {0, 0, S::ReNullary}},
      {"re.allchar", {0, 0, S::ReNullary}},
      {"re.++", {1, -1, S::ReNary}},
      {"re.union", {1, -1, S::ReNary}},
      {"re.inter", {1, -1, S::ReNary}},
      {"re.comp", {1, 1, S::ReUnary}},
      {"re.*", {1, 1, S::ReUnary}},
      {"re.+", {1, 1, S::ReUnary}},
      {"re.opt", {1, 1, S::ReUnary}},
      {"re.range", {2, 2, S::ReRange}},
      {"re.loop", {1, 1, S::ReLoop}},
  };
  return table;
}

// ---------------------------------------------------------------- interpretation

class ScriptBuilder {
 public:
  explicit ScriptBuilder(Script& script) : script_(script) {}

  void command(const Sexp& s) {
    if (s.type != Sexp::Type::List || s.items.empty() ||
        s.items[0].type != Sexp::Type::Symbol)
      throw ParseError("expected a command", s.line, s.col);
    const std::string& head = s.items[0].text;
    if (head == "set-logic") {
      if (s.items.size() == 2 && s.items[1].type == Sexp::Type::Symbol)
        script_.logic = s.items[1].text;
    } else if (head == "declare-fun") {
      if (s.items.size() != 4 || s.items[1].type != Sexp::Type::Symbol ||
          s.items[2].type != Sexp::Type::List || !s.items[2].items.empty())
        throw ParseError("malformed declare-fun", s.line, s.col);
      declare(s.items[1].text, parseSort(s.items[3]));
    } else if (head == "declare-const") {
      if (s.items.size() != 3 || s.items[1].type != Sexp::Type::Symbol)
        throw ParseError("malformed declare-const", s.line, s.col);
      declare(s.items[1].text, parseSort(s.items[2]));
    } else if (head == "assert") {
      if (s.items.size() != 2)
        throw ParseError("malformed assert", s.line, s.col);
      auto e = expr(s.items[1]);
      if (e->sort != Sort::Bool && e->sort != Sort::Unknown)
        throw ParseError("sort mismatch: assertion is not Bool", s.items[1].line,
                         s.items[1].col);
      script_.assertions.push_back(std::move(e));
    } else if (head == "set-info") {
      // dropped: does not affect solver behaviour
    } else {
      script_.trailing.push_back(renderSexp(s));
    }
  }

 private:
  void declare(const std::string& name, Sort sort) {
    script_.declarations.emplace_back(name, sort);
    env_[name] = sort;
  }

  static Sort parseSort(const Sexp& s) {
    if (s.type == Sexp::Type::Symbol) {
      if (s.text == "String") return Sort::String;
      if (s.text == "Bool") return Sort::Bool;
      if (s.text == "Int") return Sort::Integer;
      if (s.text == "RegLan") return Sort::RE;
    }
    return Sort::Unknown;
  }

  static void expectSort(const Sexp& where, Sort got, Sort want,
                         const std::string& op) {
    if (got != want && got != Sort::Unknown)
      throw ParseError("sort mismatch in argument of '" + op + "' (expected " +
                           sortName(want) + ", got " + sortName(got) + ")",
                       where.line, where.col);
  }

  ExprPtr expr(const Sexp& s) {
    switch (s.type) {
      case Sexp::Type::Numeral:
        return makeIntLit(std::stoll(s.text));
      case Sexp::Type::String:
        return makeStrLit(s.text);
      case Sexp::Type::Symbol: {
        if (s.text == "true") return makeBoolLit(true);
        if (s.text == "false") return makeBoolLit(false);
        if (s.text == "re.none" || s.text == "re.all" || s.text == "re.allchar")
          return makeOp(s.text, Sort::RE, {});
        auto it = env_.find(s.text);
        if (it == env_.end())
          throw ParseError("undeclared symbol '" + s.text + "'", s.line, s.col);
        return makeVariable(s.text, it->second);
      }
      case Sexp::Type::List:
        return application(s);
    }
    throw ParseError("unexpected expression", s.line, s.col);
  }

  ExprPtr application(const Sexp& s) {
    if (s.items.empty())
      throw ParseError("empty application", s.line, s.col);
    const Sexp& head = s.items[0];

    // ((_ re.loop l u) r)
    if (head.type == Sexp::Type::List && head.items.size() == 4 &&
        head.items[0].isSym("_") && head.items[1].isSym("re.loop") &&
        head.items[2].type == Sexp::Type::Numeral &&
        head.items[3].type == Sexp::Type::Numeral) {
      if (s.items.size() != 2)
        throw ParseError("arity violation on 're.loop'", s.line, s.col);
      auto r = expr(s.items[1]);
      expectSort(s.items[1], r->sort, Sort::RE, "re.loop");
      return makeOp("re.loop", Sort::RE, {std::move(r)},
                    {std::stoll(head.items[2].text),
                     std::stoll(head.items[3].text)});
    }

    if (head.type != Sexp::Type::Symbol || head.text == "_") {
      // indexed identifiers and other exotic heads become generic leaves
      auto g = makeOp(kGeneric, Sort::Unknown, {});
      g->value = renderSexp(s);
      return g;
    }

    const std::string& op = head.text;
    std::vector<ExprPtr> args;
    args.reserve(s.items.size() - 1);

    // legacy 2.5 style (re.loop r l u)
    if (op == "re.loop" && s.items.size() == 4 &&
        s.items[2].type == Sexp::Type::Numeral &&
        s.items[3].type == Sexp::Type::Numeral) {
      auto r = expr(s.items[1]);
      expectSort(s.items[1], r->sort, Sort::RE, "re.loop");
      return makeOp("re.loop", Sort::RE, {std::move(r)},
                    {std::stoll(s.items[2].text), std::stoll(s.items[3].text)});
    }

    auto it = opTable().find(op);
    if (it == opTable().end()) {
      // unknown construct: generic node, children still parsed recursively
      for (std::size_t i = 1; i < s.items.size(); ++i)
        args.push_back(expr(s.items[i]));
      auto g = makeOp(kGeneric, Sort::Unknown, std::move(args));
      g->value = op;
      return g;
    }

    const OpSig& sig = it->second;
    int arity = static_cast<int>(s.items.size()) - 1;
    if (arity < sig.minArity || (sig.maxArity >= 0 && arity > sig.maxArity))
      throw ParseError("arity violation on '" + op + "'", s.line, s.col);
    for (std::size_t i = 1; i < s.items.size(); ++i)
      args.push_back(expr(s.items[i]));

    using S = OpSig::Shape;
    Sort result = Sort::Unknown;
    switch (sig.shape) {
      case S::AllBool:
      case S::NotOp:
        for (std::size_t i = 0; i < args.size(); ++i)
          expectSort(s.items[i + 1], args[i]->sort, Sort::Bool, op);
        result = Sort::Bool;
        break;
      case S::Ite: {
        expectSort(s.items[1], args[0]->sort, Sort::Bool, op);
        Sort t = args[1]->sort != Sort::Unknown ? args[1]->sort : args[2]->sort;
        if (t != Sort::Unknown) expectSort(s.items[3], args[2]->sort, t, op);
        result = t;
        break;
      }
      case S::EqChain: {
        Sort t = Sort::Unknown;
        for (const auto& a : args)
          if (a->sort != Sort::Unknown) {
            t = a->sort;
            break;
          }
        if (t != Sort::Unknown)
          for (std::size_t i = 0; i < args.size(); ++i)
            expectSort(s.items[i + 1], args[i]->sort, t, op);
        result = Sort::Bool;
        break;
      }
      case S::IntCmp:
      case S::IntArith:
        for (std::size_t i = 0; i < args.size(); ++i)
          expectSort(s.items[i + 1], args[i]->sort, Sort::Integer, op);
        result = sig.shape == S::IntCmp ? Sort::Bool : Sort::Integer;
        break;
      case S::StrConcat:
        for (std::size_t i = 0; i < args.size(); ++i)
          expectSort(s.items[i + 1], args[i]->sort, Sort::String, op);
        result = Sort::String;
        break;
      case S::StrToInt:
        expectSort(s.items[1], args[0]->sort, Sort::String, op);
        if (op == "str.indexof") {
          expectSort(s.items[2], args[1]->sort, Sort::String, op);
          if (args.size() == 3)
            expectSort(s.items[3], args[2]->sort, Sort::Integer, op);
        }
        result = Sort::Integer;
        break;
      case S::StrToStr:
        if (op == "str.from_int") {
          expectSort(s.items[1], args[0]->sort, Sort::Integer, op);
        } else if (op == "str.at") {
          expectSort(s.items[1], args[0]->sort, Sort::String, op);
          expectSort(s.items[2], args[1]->sort, Sort::Integer, op);
        } else if (op == "str.substr") {
          expectSort(s.items[1], args[0]->sort, Sort::String, op);
          expectSort(s.items[2], args[1]->sort, Sort::Integer, op);
          expectSort(s.items[3], args[2]->sort, Sort::Integer, op);
        } else {  // str.replace
          for (std::size_t i = 0; i < args.size(); ++i)
            expectSort(s.items[i + 1], args[i]->sort, Sort::String, op);
        }
        result = Sort::String;
        break;
      case S::StrPred:
        for (std::size_t i = 0; i < args.size(); ++i)
          expectSort(s.items[i + 1], args[i]->sort, Sort::String, op);
        result = Sort::Bool;
        break;
      case S::StrInRe:
        expectSort(s.items[1], args[0]->sort, Sort::String, op);
        expectSort(s.items[2], args[1]->sort, Sort::RE, op);
        result = Sort::Bool;
        break;
      case S::StrToRe:
        expectSort(s.items[1], args[0]->sort, Sort::String, op);
        result = Sort::RE;
        break;
      case S::ReNullary:
        result = Sort::RE;
        break;
      case S::ReNary:
      case S::ReUnary:
      case S::ReLoop:
        for (std::size_t i = 0; i < args.size(); ++i)
          expectSort(s.items[i + 1], args[i]->sort, Sort::RE, op);
        result = Sort::RE;
        break;
      case S::ReRange:
        for (std::size_t i = 0; i < args.size(); ++i)
          expectSort(s.items[i + 1], args[i]->sort, Sort::String, op);
        result = Sort::RE;
        break;
    }
    // (- 5) is the SMT-LIB spelling of a negative integer literal
    if (op == "-" && args.size() == 1 && args[0]->decl == kIntLit)
      return makeIntLit(-std::stoll(args[0]->value));
    return makeOp(op, result, std::move(args));
  }

  Script& script_;
  std::map<std::string, Sort> env_;
};

}  // namespace

Script parseScript(const std::string& text, const ParseOptions& opts) {
  const std::string source = opts.translate25 ? translate25to26(text) : text;
  Script script;
  SexpReader reader(source);
  ScriptBuilder builder(script);
  while (!reader.atEnd()) builder.command(reader.read());
  script.renumber();
  return script;
}

}  // namespace smtquery
