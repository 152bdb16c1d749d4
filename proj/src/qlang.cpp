#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "smtquery/qlang.hpp"
#include "smtquery/smtlib.hpp"

namespace smtquery {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Token {
  enum class Type { Ident, LParen, RParen, Comma, Colon, Star, End };
  Type type = Type::End;
  std::string text;
  std::size_t pos = 0;
};

class Tokenizer {
 public:
  explicit Tokenizer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }
  bool atKeyword(const char* kw) const {
    return tok_.type == Token::Type::Ident && lower(tok_.text) == kw;
  }
  void expect(Token::Type type, const char* what) {
    if (tok_.type != type)
      throw SyntaxError(std::string("expected ") + what, tok_.pos);
    advance();
  }
  void expectKeyword(const char* kw) {
    if (!atKeyword(kw))
      throw SyntaxError(std::string("expected '") + kw + "'", tok_.pos);
    advance();
  }

 private:
  void advance() {
    while (i_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[i_])))
      ++i_;
    tok_.pos = i_;
    tok_.text.clear();
    if (i_ >= text_.size()) {
      tok_.type = Token::Type::End;
      return;
    }
    char c = text_[i_];
    switch (c) {
      case '(': tok_.type = Token::Type::LParen; ++i_; return;
      case ')': tok_.type = Token::Type::RParen; ++i_; return;
      case ',': tok_.type = Token::Type::Comma; ++i_; return;
      case ':': tok_.type = Token::Type::Colon; ++i_; return;
      case '*': tok_.type = Token::Type::Star; ++i_; return;
      default: break;
    }
    auto isIdentChar = [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
             ch == '-' || ch == '.';
    };
    if (!isIdentChar(c))
      throw SyntaxError("unexpected character", i_);
    while (i_ < text_.size() && isIdentChar(text_[i_]))
      tok_.text.push_back(text_[i_++]);
    tok_.type = Token::Type::Ident;
  }

  const std::string& text_;
  std::size_t i_ = 0;
  Token tok_;
};

ConditionPtr makeCond(Condition::Type type) {
  auto c = std::make_shared<Condition>();
  c->type = type;
  return c;
}

ConditionPtr parseCondition(Tokenizer& tk) {
  const Token& t = tk.peek();
  if (t.type == Token::Type::LParen) {
    tk.take();
    if (tk.atKeyword("not")) {
      tk.take();
      auto c = makeCond(Condition::Type::Not);
      c->children.push_back(parseCondition(tk));
      tk.expect(Token::Type::RParen, "')'");
      return c;
    }
    auto lhs = parseCondition(tk);
    Condition::Type op;
    if (tk.atKeyword("and"))
      op = Condition::Type::And;
    else if (tk.atKeyword("or"))
      op = Condition::Type::Or;
    else
      throw SyntaxError("expected 'And' or 'Or'", tk.peek().pos);
    tk.take();
    auto c = makeCond(op);
    c->children.push_back(std::move(lhs));
    c->children.push_back(parseCondition(tk));
    tk.expect(Token::Type::RParen, "')'");
    return c;
  }
  if (t.type != Token::Type::Ident)
    throw SyntaxError("expected condition", t.pos);
  if (tk.atKeyword("true")) {
    tk.take();
    return makeCond(Condition::Type::True);
  }
  if (tk.atKeyword("false")) {
    tk.take();
    return makeCond(Condition::Type::False);
  }
  Token name = tk.take();
  auto c = makeCond(Condition::Type::Pred);
  c->pred.name = name.text;
  if (tk.peek().type == Token::Type::LParen) {
    tk.take();
    while (true) {
      if (tk.peek().type != Token::Type::Ident)
        throw SyntaxError("expected solver name", tk.peek().pos);
      c->pred.args.push_back(tk.take().text);
      if (tk.peek().type == Token::Type::Comma) {
        tk.take();
        continue;
      }
      break;
    }
    tk.expect(Token::Type::RParen, "')'");
  }
  // arity/name errors surface with a position
  bool known = false;
  for (const auto& p : predicateCatalog())
    if (p.name == c->pred.name) {
      known = true;
      if (static_cast<int>(c->pred.args.size()) != p.arity)
        throw SyntaxError(c->pred.name + " expects " +
                              std::to_string(p.arity) + " argument(s)",
                          name.pos);
    }
  if (!known) throw SyntaxError("unknown predicate " + c->pred.name, name.pos);
  return c;
}

DatasetSelector parseDataset(Tokenizer& tk) {
  DatasetSelector sel;
  while (true) {
    DatasetSelector::Atom atom;
    if (tk.peek().type == Token::Type::Star) {
      tk.take();
      atom.kind = DatasetSelector::Atom::Kind::All;
    } else if (tk.peek().type == Token::Type::Ident) {
      atom.set = tk.take().text;
      atom.kind = DatasetSelector::Atom::Kind::Set;
      if (tk.peek().type == Token::Type::Colon) {
        tk.take();
        if (tk.peek().type != Token::Type::Ident)
          throw SyntaxError("expected track name", tk.peek().pos);
        atom.track = tk.take().text;
        atom.kind = DatasetSelector::Atom::Kind::SetTrack;
      }
    } else {
      throw SyntaxError("expected dataset", tk.peek().pos);
    }
    sel.atoms.push_back(std::move(atom));
    if (tk.peek().type == Token::Type::Comma) {
      tk.take();
      continue;
    }
    break;
  }
  return sel;
}

}  // namespace

Query parseQuery(const std::string& text) {
  Tokenizer tk(text);
  Query q;
  if (tk.atKeyword("select")) {
    tk.take();
    q.isSelect = true;
    Token out = tk.take();
    if (out.text == "Name")
      q.output = SelectOutput::Name;
    else if (out.text == "Hash")
      q.output = SelectOutput::Hash;
    else if (out.text == "Content")
      q.output = SelectOutput::Content;
    else
      throw SyntaxError("expected Name, Hash or Content", out.pos);
    tk.expectKeyword("from");
    q.dataset = parseDataset(tk);
    tk.expectKeyword("where");
    q.condition = parseCondition(tk);
  } else if (tk.atKeyword("extract")) {
    tk.take();
    q.isSelect = false;
    Token ext = tk.take();
    if (ext.type != Token::Type::Ident)
      throw SyntaxError("expected extractor name", ext.pos);
    auto id = extractorByName(ext.text);
    if (!id) throw SyntaxError("unknown extractor " + ext.text, ext.pos);
    q.extractor = *id;
    tk.expectKeyword("from");
    q.dataset = parseDataset(tk);
    if (tk.atKeyword("where")) {
      tk.take();
      q.condition = parseCondition(tk);
    } else {
      q.condition = makeCond(Condition::Type::True);
    }
    if (tk.atKeyword("apply")) {
      tk.take();
      Token fn = tk.take();
      if (fn.type != Token::Type::Ident)
        throw SyntaxError("expected function name", fn.pos);
      try {
        q.function = transformByName(fn.text);
      } catch (const std::exception&) {
        throw SyntaxError("unknown function " + fn.text, fn.pos);
      }
    }
  } else {
    throw SyntaxError("expected 'Select' or 'Extract'", tk.peek().pos);
  }
  if (tk.peek().type != Token::Type::End)
    throw SyntaxError("trailing input", tk.peek().pos);
  return q;
}

namespace {

bool evalCondition(const Condition& c, EvalContext& ctx) {
  switch (c.type) {
    case Condition::Type::True: return true;
    case Condition::Type::False: return false;
    case Condition::Type::Pred: {
      PredicateCall call = c.pred;
      return evalPredicate(call, ctx);
    }
    case Condition::Type::And:
      return evalCondition(*c.children[0], ctx) &&
             evalCondition(*c.children[1], ctx);
    case Condition::Type::Or:
      return evalCondition(*c.children[0], ctx) ||
             evalCondition(*c.children[1], ctx);
    case Condition::Type::Not: return !evalCondition(*c.children[0], ctx);
  }
  return false;
}

std::string readFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool conditionNeedsResults(const Condition& c) {
  if (c.type == Condition::Type::Pred) return !c.pred.args.empty();
  for (const auto& k : c.children)
    if (conditionNeedsResults(*k)) return true;
  return false;
}

}  // namespace

QueryResult runQuery(const Query& q, QueryEnv& env) {
  std::ostream& out = env.out ? *env.out : std::cout;
  std::ostream& err = env.err ? *env.err : std::cerr;

  auto candidates = env.store->selectInstances(q.dataset);
  QueryResult result;
  result.universeSize = candidates.size();
  for (const auto& inst : candidates) ++result.perBenchmark[inst.benchmark].second;

  std::vector<std::string> solverNames;
  for (const auto& s : env.solvers) solverNames.push_back(s.name);

  for (const auto& inst : candidates) {
    std::optional<Script> script;
    EvalContext ctx;
    ctx.solvers = solverNames;
    ctx.script = [&]() -> Script& {
      if (!script) {
        if (env.cache) {
          script = loadAst(inst, *env.cache, env.translate25);
        } else {
          ParseOptions opts;
          opts.translate25 = env.translate25;
          script = parseScript(readFileBytes(inst.path), opts);
        }
      }
      return *script;
    };
    ctx.result = [&](const std::string& solver) {
      auto r = env.store->newestResult(inst.id, solver);
      if (!r && env.scheduleOnDemand && !env.solvers.empty()) {
        scheduleRuns(*env.store, {inst}, env.solvers, env.jobs, true);
        r = env.store->newestResult(inst.id, solver);
      }
      return r;
    };
    ctx.validation = [&](std::int64_t resultId) {
      return env.store->validationForResult(resultId);
    };
    bool match;
    try {
      match = evalCondition(*q.condition, ctx);
      if (match && !q.isSelect) ctx.script();  // extractors need the tree
    } catch (const ParseError& e) {
      err << "warning: skipping " << inst.qualifiedName() << ": " << e.what()
          << "\n";
      continue;
    }
    if (!match) continue;
    ++result.perBenchmark[inst.benchmark].first;
    result.matched.emplace_back(inst, script ? std::move(*script) : Script{});
  }

  if (q.isSelect) {
    for (const auto& [inst, script] : result.matched) {
      switch (q.output) {
        case SelectOutput::Name: out << inst.qualifiedName() << "\n"; break;
        case SelectOutput::Hash:
          out << contentHash(readFileBytes(inst.path)) << "\n";
          break;
        case SelectOutput::Content: out << readFileBytes(inst.path); break;
      }
    }
    return result;
  }

  if (q.function != TransformId::Identity)
    for (auto& [inst, script] : result.matched)
      script = applyTransform(q.function, script);

  // the table and plot extractors expect results for every matched instance
  if ((q.extractor == ExtractorId::InstanceTable ||
       q.extractor == ExtractorId::ResultsTable ||
       q.extractor == ExtractorId::CactusPlot) &&
      env.scheduleOnDemand && !env.solvers.empty() && !result.matched.empty()) {
    std::vector<InstanceRec> recs;
    for (const auto& [inst, script] : result.matched) recs.push_back(inst);
    scheduleRuns(*env.store, recs, env.solvers, env.jobs, true);
  }

  ResultLookup lookup = [&](std::int64_t id, const std::string& solver) {
    return env.store->newestResult(id, solver);
  };
  switch (q.extractor) {
    case ExtractorId::Count: out << extractCount(result); break;
    case ExtractorId::InstanceTable:
      out << extractInstanceTable(result, solverNames, lookup);
      break;
    case ExtractorId::ResultsTable:
      out << extractResultsTable(result, solverNames, lookup);
      break;
    case ExtractorId::SMTLib: {
      auto files = extractSmtlib(result, env.outputDir);
      out << "Exported " << files.size() << " file(s) to "
          << env.outputDir.string() << "\n";
      break;
    }
    case ExtractorId::CactusPlot:
      out << extractCactus(result, solverNames, lookup, env.outputDir).string()
          << "\n";
      break;
    case ExtractorId::MatchingPie:
      out << extractMatchingPie(result, env.outputDir).string() << "\n";
      break;
    case ExtractorId::SMTPlot: {
      auto files = extractSmtPlot(result, env.outputDir);
      out << "Exported " << files.size() << " graph(s) to "
          << env.outputDir.string() << "\n";
      break;
    }
    case ExtractorId::VarDepPlot: {
      auto files = extractVarDepPlot(result, env.outputDir);
      out << "Exported " << files.size() << " graph(s) to "
          << env.outputDir.string() << "\n";
      break;
    }
  }
  return result;
}

void repl(QueryEnv& env, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    auto end = line.find_last_not_of(" \t\r");
    std::string text = line.substr(begin, end - begin + 1);
    if (lower(text) == "exit") break;
    try {
      QueryEnv local = env;
      local.out = &out;
      runQuery(parseQuery(text), local);
    } catch (const std::exception& e) {
      out << "error: " << e.what() << "\n";
    }
  }
}

}  // namespace smtquery
