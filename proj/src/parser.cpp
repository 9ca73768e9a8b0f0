#include "pathforge/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <set>
#include <unordered_set>

namespace pathforge {

namespace {

enum class Tok {
  End,
  Newline,
  Indent,
  Dedent,
  Name,
  Int,
  Float,
  // punctuation / operators
  LParen,
  RParen,
  LBracket,
  RBracket,
  Colon,
  Comma,
  Dot,
  Arrow,
  Assign,
  Plus,
  Minus,
  Star,
  Slash,
  DSlash,
  Percent,
  PlusEq,
  MinusEq,
  StarEq,
  DSlashEq,
  PercentEq,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
};

struct Token {
  Tok kind;
  std::string text;
  long long int_val = 0;
  double float_val = 0.0;
  SourceSpan span;
};

[[noreturn]] void syntax_error(const std::string& msg, SourceSpan sp) {
  throw ParseError("syntax-error", msg, sp);
}

[[noreturn]] void unsupported(const std::string& construct, SourceSpan sp) {
  throw ParseError("unsupported-construct", construct, sp);
}

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { tokenize(); }
  const std::vector<Token>& tokens() const { return tokens_; }

 private:
  void tokenize() {
    size_t pos = 0;
    int line = 1;
    std::vector<int> indents{0};
    bool at_line_start = true;
    int bracket_depth = 0;

    while (pos <= src_.size()) {
      if (at_line_start && bracket_depth == 0) {
        // Measure indentation; skip blank and comment-only lines.
        size_t start = pos;
        int width = 0;
        while (pos < src_.size() && (src_[pos] == ' ' || src_[pos] == '\t')) {
          if (src_[pos] == '\t')
            unsupported("tab indentation", {line, int(pos - start), 1});
          width++;
          pos++;
        }
        if (pos >= src_.size()) break;
        if (src_[pos] == '\n') {
          pos++;
          line++;
          continue;
        }
        if (src_[pos] == '#') {
          while (pos < src_.size() && src_[pos] != '\n') pos++;
          continue;
        }
        if (width > indents.back()) {
          indents.push_back(width);
          push(Tok::Indent, "", {line, 0, width});
        }
        while (width < indents.back()) {
          indents.pop_back();
          push(Tok::Dedent, "", {line, 0, 0});
        }
        if (width != indents.back())
          syntax_error("inconsistent indentation", {line, 0, width});
        at_line_start = false;
      }

      if (pos >= src_.size()) break;
      char c = src_[pos];
      SourceSpan sp{line, int(pos), 1};
      sp.col = column_of(pos, line);

      if (c == '\n') {
        pos++;
        if (bracket_depth == 0) {
          push(Tok::Newline, "", sp);
          at_line_start = true;
        }
        line++;
        continue;
      }
      if (c == ' ' || c == '\t') {
        pos++;
        continue;
      }
      if (c == '#') {
        while (pos < src_.size() && src_[pos] != '\n') pos++;
        continue;
      }
      if (c == '"' || c == '\'') unsupported("string literal", sp);
      if (c == '{') unsupported("dictionary or set literal", sp);
      if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(pos, line);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t s = pos;
        while (pos < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos])) || src_[pos] == '_'))
          pos++;
        Token t{Tok::Name, src_.substr(s, pos - s), 0, 0, sp};
        t.span.length = int(pos - s);
        tokens_.push_back(t);
        continue;
      }

      auto two = src_.substr(pos, 2);
      auto push2 = [&](Tok k) {
        sp.length = 2;
        push(k, two, sp);
        pos += 2;
      };
      if (two == "//") {
        if (pos + 2 < src_.size() && src_[pos + 2] == '=') {
          sp.length = 3;
          push(Tok::DSlashEq, "//=", sp);
          pos += 3;
        } else {
          push2(Tok::DSlash);
        }
        continue;
      }
      if (two == "->") { push2(Tok::Arrow); continue; }
      if (two == "==") { push2(Tok::Eq); continue; }
      if (two == "!=") { push2(Tok::Ne); continue; }
      if (two == "<=") { push2(Tok::Le); continue; }
      if (two == ">=") { push2(Tok::Ge); continue; }
      if (two == "+=") { push2(Tok::PlusEq); continue; }
      if (two == "-=") { push2(Tok::MinusEq); continue; }
      if (two == "*=") { push2(Tok::StarEq); continue; }
      if (two == "%=") { push2(Tok::PercentEq); continue; }
      if (two == "**") unsupported("power operator", sp);

      auto push1 = [&](Tok k) {
        push(k, std::string(1, c), sp);
        pos++;
      };
      switch (c) {
        case '(': bracket_depth++; push1(Tok::LParen); break;
        case ')': bracket_depth--; push1(Tok::RParen); break;
        case '[': bracket_depth++; push1(Tok::LBracket); break;
        case ']': bracket_depth--; push1(Tok::RBracket); break;
        case ':': push1(Tok::Colon); break;
        case ',': push1(Tok::Comma); break;
        case '.': push1(Tok::Dot); break;
        case '=': push1(Tok::Assign); break;
        case '+': push1(Tok::Plus); break;
        case '-': push1(Tok::Minus); break;
        case '*': push1(Tok::Star); break;
        case '/': push1(Tok::Slash); break;
        case '%': push1(Tok::Percent); break;
        case '<': push1(Tok::Lt); break;
        case '>': push1(Tok::Gt); break;
        default:
          syntax_error(std::string("unexpected character '") + c + "'", sp);
      }
    }

    SourceSpan end_sp{line, 0, 0};
    if (!tokens_.empty() && tokens_.back().kind != Tok::Newline)
      push(Tok::Newline, "", end_sp);
    while (indents.size() > 1) {
      indents.pop_back();
      push(Tok::Dedent, "", end_sp);
    }
    push(Tok::End, "", end_sp);
  }

  void lex_number(size_t& pos, int line) {
    size_t s = pos;
    SourceSpan sp{line, column_of(pos, line), 0};
    while (pos < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos]))) pos++;
    bool is_float = false;
    if (pos < src_.size() && src_[pos] == '.' &&
        !(pos + 1 < src_.size() &&
          (std::isalpha(static_cast<unsigned char>(src_[pos + 1])) || src_[pos + 1] == '_'))) {
      is_float = true;
      pos++;
      while (pos < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos]))) pos++;
    }
    std::string text = src_.substr(s, pos - s);
    sp.length = int(text.size());
    Token t{is_float ? Tok::Float : Tok::Int, text, 0, 0, sp};
    if (is_float)
      t.float_val = std::strtod(text.c_str(), nullptr);
    else
      t.int_val = std::stoll(text);
    tokens_.push_back(t);
  }

  int column_of(size_t pos, int line) const {
    // Column = offset from the last newline before pos.
    size_t ls = src_.rfind('\n', pos == 0 ? 0 : pos - 1);
    size_t start = (ls == std::string::npos || pos == 0) ? 0 : ls + 1;
    if (ls != std::string::npos && pos > 0 && src_[pos - 1] == '\n') start = pos;
    (void)line;
    return int(pos - start);
  }

  void push(Tok k, std::string text, SourceSpan sp) {
    tokens_.push_back(Token{k, std::move(text), 0, 0, sp});
  }

  const std::string& src_;
  std::vector<Token> tokens_;
};

const std::unordered_set<std::string> kUnsupportedKeywords = {
    "lambda", "import",  "from",   "try",    "except", "raise",  "with",
    "global", "nonlocal", "assert", "del",    "yield",  "pass",   "is",
    "elif_",  "match",   "async",  "await",  "print",
};

class Parser {
 public:
  Parser(const std::string& source, const std::string& path)
      : lexer_(source) {
    unit_.source_text = source;
    unit_.path = path;
  }

  SourceUnit parse() {
    skip_newlines();
    while (!at(Tok::End)) {
      if (at_keyword("def")) {
        unit_.functions.push_back(parse_function(false));
      } else if (at_keyword("class")) {
        parse_class();
      } else {
        syntax_error("expected 'def' or 'class' at top level", peek().span);
      }
      skip_newlines();
    }
    std::set<std::string> names;
    for (const auto& f : unit_.functions)
      if (!names.insert(f.name).second)
        syntax_error("duplicate function name '" + f.name + "'", f.span);
    return std::move(unit_);
  }

 private:
  const Token& peek(int ahead = 0) const {
    size_t i = idx_ + static_cast<size_t>(ahead);
    return i < lexer_.tokens().size() ? lexer_.tokens()[i] : lexer_.tokens().back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(const std::string& kw) const {
    return at(Tok::Name) && peek().text == kw;
  }
  Token advance() { return lexer_.tokens()[idx_++]; }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) syntax_error("expected " + what, peek().span);
    return advance();
  }
  void expect_keyword(const std::string& kw) {
    if (!at_keyword(kw)) syntax_error("expected '" + kw + "'", peek().span);
    advance();
  }
  void skip_newlines() {
    while (at(Tok::Newline)) advance();
  }

  void parse_class() {
    expect_keyword("class");
    Token name = expect(Tok::Name, "class name");
    unit_.enclosing_class_name = name.text;
    if (at(Tok::LParen)) {  // base list; only object / empty tolerated
      advance();
      if (at(Tok::Name)) advance();
      expect(Tok::RParen, "')'");
    }
    expect(Tok::Colon, "':'");
    expect(Tok::Newline, "newline");
    expect(Tok::Indent, "indented class body");
    skip_newlines();
    while (!at(Tok::Dedent) && !at(Tok::End)) {
      if (!at_keyword("def"))
        unsupported("class-level statement", peek().span);
      unit_.functions.push_back(parse_function(true));
      skip_newlines();
    }
    if (at(Tok::Dedent)) advance();
  }

  FunctionDef parse_function(bool in_class) {
    FunctionDef fn;
    fn.span = peek().span;
    expect_keyword("def");
    fn.name = expect(Tok::Name, "function name").text;
    expect(Tok::LParen, "'('");
    bool first = true;
    std::set<std::string> pnames;
    while (!at(Tok::RParen)) {
      if (!first) expect(Tok::Comma, "','");
      first = false;
      Token pname = expect(Tok::Name, "parameter name");
      Param p;
      p.name = pname.text;
      p.span = pname.span;
      if (at(Tok::Colon)) {
        advance();
        p.annot = parse_annotation();
      }
      if (at(Tok::Assign)) unsupported("default parameter value", peek().span);
      if (in_class && p.name == "self" && pnames.empty() && fn.params.empty()) {
        // Leading self parameter of a method: dropped. Uses of self in the
        // body are rejected during statement parsing.
        self_dropped_ = true;
      } else {
        if (!pnames.insert(p.name).second)
          syntax_error("duplicate parameter '" + p.name + "'", p.span);
        fn.params.push_back(std::move(p));
      }
    }
    expect(Tok::RParen, "')'");
    if (at(Tok::Arrow)) {
      advance();
      fn.return_annot = parse_annotation();
    }
    expect(Tok::Colon, "':'");
    expect(Tok::Newline, "newline");
    fn.body = parse_block();
    if (fn.body.empty())
      syntax_error("function body is empty", fn.span);
    return fn;
  }

  std::optional<SubsetType> parse_annotation() {
    Token t = expect(Tok::Name, "type annotation");
    if (t.text == "int") return SubsetType::scalar(Scalar::Int);
    if (t.text == "float") return SubsetType::scalar(Scalar::Float);
    if (t.text == "bool") return SubsetType::scalar(Scalar::Bool);
    if (t.text == "List" || t.text == "list") {
      expect(Tok::LBracket, "'['");
      Token el = expect(Tok::Name, "element type");
      expect(Tok::RBracket, "']'");
      if (el.text == "int") return SubsetType::list_of(Scalar::Int);
      if (el.text == "float") return SubsetType::list_of(Scalar::Float);
      if (el.text == "bool") return SubsetType::list_of(Scalar::Bool);
      unsupported("list element type '" + el.text + "'", el.span);
    }
    if (t.text == "None") return std::nullopt;
    // Unknown scalar annotation: treat as unannotated so the body gets a
    // chance to produce a more precise unsupported-construct diagnostic
    // (e.g. str(s) -> "str conversion").
    return std::nullopt;
  }

  std::vector<StmtPtr> parse_block() {
    expect(Tok::Indent, "indented block");
    std::vector<StmtPtr> body;
    skip_newlines();
    while (!at(Tok::Dedent) && !at(Tok::End)) {
      body.push_back(parse_statement());
      skip_newlines();
    }
    if (at(Tok::Dedent)) advance();
    if (body.empty()) syntax_error("empty block", peek().span);
    return body;
  }

  StmtPtr parse_statement() {
    const Token& t = peek();
    if (t.kind == Tok::Name) {
      const std::string& kw = t.text;
      if (kw == "if") return parse_if();
      if (kw == "while") return parse_while();
      if (kw == "for") return parse_for();
      if (kw == "return") return parse_return();
      if (kw == "break" || kw == "continue") {
        auto s = std::make_shared<Stmt>();
        s->kind = kw == "break" ? Stmt::Kind::Break : Stmt::Kind::Continue;
        s->span = t.span;
        advance();
        expect(Tok::Newline, "newline");
        return s;
      }
      if (kw == "def") unsupported("nested function definition", t.span);
      if (kw == "self") unsupported("self-referencing method", t.span);
      if (kUnsupportedKeywords.count(kw)) unsupported("'" + kw + "' statement", t.span);
      if (kw == "elif" || kw == "else")
        syntax_error("'" + kw + "' without matching 'if'", t.span);
    }
    return parse_simple();
  }

  StmtPtr parse_if() {
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::If;
    s->span = peek().span;
    advance();  // if / elif
    s->value = parse_expr();
    expect(Tok::Colon, "':'");
    expect(Tok::Newline, "newline");
    s->body = parse_block();
    skip_newlines();
    if (at_keyword("elif")) {
      s->orelse.push_back(parse_if());
    } else if (at_keyword("else")) {
      advance();
      expect(Tok::Colon, "':'");
      expect(Tok::Newline, "newline");
      s->orelse = parse_block();
    }
    return s;
  }

  StmtPtr parse_while() {
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::While;
    s->span = peek().span;
    advance();
    s->value = parse_expr();
    expect(Tok::Colon, "':'");
    expect(Tok::Newline, "newline");
    s->body = parse_block();
    return s;
  }

  StmtPtr parse_for() {
    auto s = std::make_shared<Stmt>();
    s->span = peek().span;
    advance();  // for
    s->loop_var = expect(Tok::Name, "loop variable").text;
    if (at(Tok::Comma)) unsupported("multiple loop targets", peek().span);
    expect_keyword("in");
    if (at_keyword("range")) {
      s->kind = Stmt::Kind::ForRange;
      advance();
      expect(Tok::LParen, "'('");
      std::vector<ExprPtr> args;
      args.push_back(parse_expr());
      while (at(Tok::Comma)) {
        advance();
        args.push_back(parse_expr());
      }
      expect(Tok::RParen, "')'");
      if (args.size() > 3)
        syntax_error("range() takes at most 3 arguments", s->span);
      if (args.size() == 1) {
        s->start = make_int(0, s->span);
        s->stop = args[0];
        s->step = make_int(1, s->span);
      } else if (args.size() == 2) {
        s->start = args[0];
        s->stop = args[1];
        s->step = make_int(1, s->span);
      } else {
        s->start = args[0];
        s->stop = args[1];
        s->step = args[2];
      }
    } else {
      s->kind = Stmt::Kind::ForEach;
      s->value = parse_expr();
    }
    expect(Tok::Colon, "':'");
    expect(Tok::Newline, "newline");
    s->body = parse_block();
    return s;
  }

  StmtPtr parse_return() {
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Return;
    s->span = peek().span;
    advance();
    if (!at(Tok::Newline)) {
      if (at_keyword("None"))
        advance();
      else
        s->value = parse_expr();
    }
    expect(Tok::Newline, "newline");
    return s;
  }

  // Assignment, augmented assignment, or a bare append/pop call.
  StmtPtr parse_simple() {
    SourceSpan sp = peek().span;
    ExprPtr first = parse_expr();

    auto make_lvalue = [&](const ExprPtr& e) -> LValue {
      if (e->kind == Expr::Kind::Name) return LValue{e->name, nullptr, e->span};
      if (e->kind == Expr::Kind::Subscript && e->a->kind == Expr::Kind::Name)
        return LValue{e->a->name, e->b, e->span};
      unsupported("assignment target", e->span);
    };

    if (at(Tok::Assign)) {
      advance();
      ExprPtr rhs = parse_expr();
      if (at(Tok::Assign)) unsupported("multiple assignment targets", peek().span);
      if (at(Tok::Comma)) unsupported("tuple assignment", peek().span);
      expect(Tok::Newline, "newline");
      auto s = std::make_shared<Stmt>();
      s->kind = Stmt::Kind::Assign;
      s->span = sp;
      s->target = make_lvalue(first);
      s->value = rhs;
      return s;
    }
    if (at(Tok::Comma)) unsupported("tuple assignment", peek().span);

    auto aug = [&](BinOp op) -> StmtPtr {
      advance();
      auto s = std::make_shared<Stmt>();
      s->kind = Stmt::Kind::AugAssign;
      s->span = sp;
      s->aug_op = op;
      s->target = make_lvalue(first);
      s->value = parse_expr();
      expect(Tok::Newline, "newline");
      return s;
    };
    switch (peek().kind) {
      case Tok::PlusEq: return aug(BinOp::Add);
      case Tok::MinusEq: return aug(BinOp::Sub);
      case Tok::StarEq: return aug(BinOp::Mul);
      case Tok::DSlashEq: return aug(BinOp::FloorDiv);
      case Tok::PercentEq: return aug(BinOp::Mod);
      default: break;
    }

    expect(Tok::Newline, "newline");
    if (first->kind != Expr::Kind::Append && first->kind != Expr::Kind::Pop)
      unsupported("expression statement", sp);
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::ExprStmt;
    s->span = sp;
    s->value = first;
    return s;
  }

  // --- expressions ------------------------------------------------------

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr e = parse_and();
    while (at_keyword("or")) {
      SourceSpan sp = peek().span;
      advance();
      e = make_boolbin(BoolOp::Or, e, parse_and(), sp);
    }
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_not();
    while (at_keyword("and")) {
      SourceSpan sp = peek().span;
      advance();
      e = make_boolbin(BoolOp::And, e, parse_not(), sp);
    }
    return e;
  }

  ExprPtr parse_not() {
    if (at_keyword("not")) {
      SourceSpan sp = peek().span;
      advance();
      return make_unary(UnaryOp::Not, parse_not(), sp);
    }
    return parse_comparison();
  }

  static std::optional<CmpOp> cmp_of(Tok k) {
    switch (k) {
      case Tok::Eq: return CmpOp::Eq;
      case Tok::Ne: return CmpOp::Ne;
      case Tok::Lt: return CmpOp::Lt;
      case Tok::Le: return CmpOp::Le;
      case Tok::Gt: return CmpOp::Gt;
      case Tok::Ge: return CmpOp::Ge;
      default: return std::nullopt;
    }
  }

  ExprPtr parse_comparison() {
    ExprPtr e = parse_additive();
    std::optional<CmpOp> op = cmp_of(peek().kind);
    if (!op) {
      if (at_keyword("in") || at_keyword("not"))
        unsupported("membership test", peek().span);
      return e;
    }
    // Chained comparisons desugar to a conjunction: a < b < c
    // becomes (a < b) and (b < c).
    ExprPtr result;
    ExprPtr prev = e;
    while ((op = cmp_of(peek().kind))) {
      SourceSpan sp = peek().span;
      advance();
      ExprPtr rhs = parse_additive();
      ExprPtr link = make_compare(*op, prev, rhs, sp);
      result = result ? make_boolbin(BoolOp::And, result, link, sp) : link;
      prev = rhs;
    }
    return result;
  }

  ExprPtr parse_additive() {
    ExprPtr e = parse_multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Token t = advance();
      BinOp op = t.kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
      e = make_binary(op, e, parse_multiplicative(), t.span);
    }
    return e;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr e = parse_unary_expr();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::DSlash) || at(Tok::Percent)) {
      Token t = advance();
      BinOp op = BinOp::Mul;
      if (t.kind == Tok::Slash) op = BinOp::Div;
      if (t.kind == Tok::DSlash) op = BinOp::FloorDiv;
      if (t.kind == Tok::Percent) op = BinOp::Mod;
      e = make_binary(op, e, parse_unary_expr(), t.span);
    }
    return e;
  }

  ExprPtr parse_unary_expr() {
    if (at(Tok::Minus)) {
      SourceSpan sp = peek().span;
      advance();
      return make_unary(UnaryOp::Neg, parse_unary_expr(), sp);
    }
    if (at(Tok::Plus)) {
      advance();
      return parse_unary_expr();
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    for (;;) {
      if (at(Tok::LBracket)) {
        SourceSpan sp = peek().span;
        advance();
        ExprPtr idx = parse_expr();
        if (at(Tok::Colon)) unsupported("list slicing", peek().span);
        expect(Tok::RBracket, "']'");
        e = make_subscript(e, idx, sp);
        continue;
      }
      if (at(Tok::Dot)) {
        SourceSpan sp = peek().span;
        advance();
        Token meth = expect(Tok::Name, "method name");
        if (e->kind != Expr::Kind::Name)
          unsupported("method call on non-variable", sp);
        if (meth.text == "append") {
          expect(Tok::LParen, "'('");
          ExprPtr arg = parse_expr();
          expect(Tok::RParen, "')'");
          e = make_append(e->name, arg, sp);
        } else if (meth.text == "pop") {
          expect(Tok::LParen, "'('");
          if (!at(Tok::RParen)) unsupported("pop with index argument", peek().span);
          expect(Tok::RParen, "')'");
          e = make_pop(e->name, sp);
        } else {
          unsupported("method '" + meth.text + "'", sp);
        }
        continue;
      }
      break;
    }
    return e;
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        advance();
        return make_int(t.int_val, t.span);
      }
      case Tok::Float: {
        advance();
        return make_float(t.float_val, t.span);
      }
      case Tok::LParen: {
        advance();
        ExprPtr e = parse_expr();
        if (at(Tok::Comma)) unsupported("tuple literal", peek().span);
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::LBracket: {
        SourceSpan sp = t.span;
        advance();
        std::vector<ExprPtr> elems;
        if (!at(Tok::RBracket)) {
          elems.push_back(parse_expr());
          if (at_keyword("for")) unsupported("list comprehension", peek().span);
          while (at(Tok::Comma)) {
            advance();
            if (at(Tok::RBracket)) break;
            elems.push_back(parse_expr());
          }
        }
        expect(Tok::RBracket, "']'");
        return make_list(std::move(elems), sp);
      }
      case Tok::Name: {
        const std::string& n = t.text;
        if (n == "True" || n == "False") {
          advance();
          return make_bool(n == "True", t.span);
        }
        if (n == "None") unsupported("None value", t.span);
        if (n == "len" || n == "abs") {
          advance();
          expect(Tok::LParen, "'('");
          ExprPtr arg = parse_expr();
          expect(Tok::RParen, "')'");
          return n == "len" ? make_len(arg, t.span) : make_abs(arg, t.span);
        }
        if (n == "lambda") unsupported("lambda", t.span);
        if (n == "self") unsupported("self-referencing method", t.span);
        advance();
        if (at(Tok::LParen)) {
          if (n == "str") unsupported("str conversion", t.span);
          if (n == "int" || n == "float" || n == "bool")
            unsupported("'" + n + "' conversion", t.span);
          if (n == "min" || n == "max" || n == "sum" || n == "sorted" || n == "range")
            unsupported("builtin '" + n + "'", t.span);
          unsupported("function call '" + n + "'", t.span);
        }
        return make_name(n, t.span);
      }
      default:
        syntax_error("unexpected token", t.span);
    }
  }

  Lexer lexer_;
  SourceUnit unit_;
  size_t idx_ = 0;
  bool self_dropped_ = false;
};

void validate_expr(const Expr& e, std::vector<Diagnostic>& out) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Append:
      out.push_back({"unsupported-construct", "append in expression position", e.span});
      return;
    case K::ListLit:
      for (const auto& el : e.elems) {
        validate_expr(*el, out);
        if (el->kind == K::ListLit)
          out.push_back({"unsupported-construct", "nested list literal", el->span});
      }
      return;
    default: break;
  }
  if (e.a) validate_expr(*e.a, out);
  if (e.b) validate_expr(*e.b, out);
}

void validate_stmt(const Stmt& s, std::vector<Diagnostic>& out) {
  using K = Stmt::Kind;
  if (s.kind == K::ExprStmt) {
    if (s.value->kind != Expr::Kind::Append && s.value->kind != Expr::Kind::Pop)
      out.push_back({"unsupported-construct",
                     "expression statement must be append() or pop()", s.span});
    if (s.value->kind == Expr::Kind::Append) validate_expr(*s.value->a, out);
    return;
  }
  if (s.kind == K::Assign || s.kind == K::AugAssign) {
    if (s.target.index) validate_expr(*s.target.index, out);
  }
  if (s.value) validate_expr(*s.value, out);
  if (s.start) validate_expr(*s.start, out);
  if (s.stop) validate_expr(*s.stop, out);
  if (s.step) validate_expr(*s.step, out);
  for (const auto& c : s.body) validate_stmt(*c, out);
  for (const auto& c : s.orelse) validate_stmt(*c, out);
}

}  // namespace

SourceUnit parse_unit(const std::string& source, const std::string& path) {
  Parser p(source, path);
  return p.parse();
}

std::vector<Diagnostic> validate_subset(const SourceUnit& unit) {
  std::vector<Diagnostic> out;
  for (const auto& fn : unit.functions) {
    if (fn.body.empty())
      out.push_back({"invalid-function", "empty body in '" + fn.name + "'", fn.span});
    for (const auto& s : fn.body) validate_stmt(*s, out);
  }
  return out;
}

std::string format_diagnostic(const std::string& path, const Diagnostic& d) {
  return path + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.col) +
         ": " + d.code + ": " + d.message;
}

}  // namespace pathforge
