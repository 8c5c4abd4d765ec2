#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "mucgf/ast.hpp"

namespace mucgf::ir {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                         std::to_string(col)),
      line(line),
      col(col) {}

namespace {

enum class Tok : uint8_t {
  Ident, Int, Float, Punct, End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      tok_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        take();
      tok_.kind = Tok::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      bool is_float = false;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        take();
      if (pos_ < src_.size() && src_[pos_] == '.') {
        is_float = true;
        take();
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_])))
          take();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        is_float = true;
        take();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) take();
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_])))
          take();
      }
      tok_.kind = is_float ? Tok::Float : Tok::Int;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    // Two-char punctuation first.
    static const char* two[] = {"->", "==", "!=", "<=", ">=", "&&", "||"};
    if (pos_ + 1 < src_.size()) {
      std::string pair = src_.substr(pos_, 2);
      for (const char* t : two) {
        if (pair == t) {
          take();
          take();
          tok_.kind = Tok::Punct;
          tok_.text = pair;
          return;
        }
      }
    }
    take();
    tok_.kind = Tok::Punct;
    tok_.text = std::string(1, c);
  }

  void skip_ws() {
    for (;;) {
      while (pos_ < src_.size() &&
             std::isspace(static_cast<unsigned char>(src_[pos_])))
        take();
      if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') take();
        continue;
      }
      break;
    }
  }

  void take() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Program parse() {
    Program p;
    while (lex_.peek().kind != Tok::End) {
      expect_keyword("fn");
      p.functions.push_back(parse_function());
    }
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("syntax error: " + msg, lex_.peek().line, lex_.peek().col);
  }

  bool is_punct(const std::string& t) {
    return lex_.peek().kind == Tok::Punct && lex_.peek().text == t;
  }
  bool is_ident(const std::string& t) {
    return lex_.peek().kind == Tok::Ident && lex_.peek().text == t;
  }

  void expect_punct(const std::string& t) {
    if (!is_punct(t)) fail("expected '" + t + "', got '" + lex_.peek().text + "'");
    lex_.next();
  }
  void expect_keyword(const std::string& t) {
    if (!is_ident(t)) fail("expected '" + t + "', got '" + lex_.peek().text + "'");
    lex_.next();
  }
  std::string expect_ident() {
    if (lex_.peek().kind != Tok::Ident)
      fail("expected identifier, got '" + lex_.peek().text + "'");
    return lex_.next().text;
  }

  Type parse_type() {
    std::string base = expect_ident();
    Type t;
    if (base == "int") t = Type::Int;
    else if (base == "float") t = Type::Float;
    else if (base == "bool") t = Type::Bool;
    else if (base == "unit") return Type::Unit;
    else fail("unknown type '" + base + "'");
    if (is_punct("[")) {
      lex_.next();
      expect_punct("]");
      if (t == Type::Int) return Type::IntArray;
      if (t == Type::Float) return Type::FloatArray;
      fail("array of non-numeric type");
    }
    return t;
  }

  Function parse_function() {
    Function f;
    f.name = expect_ident();
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        Param param;
        param.name = expect_ident();
        expect_punct(":");
        param.type = parse_type();
        f.params.push_back(std::move(param));
        if (is_punct(",")) {
          lex_.next();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    if (is_punct("->")) {
      lex_.next();
      f.return_type = parse_type();
    }
    f.body = parse_block();
    return f;
  }

  std::vector<std::unique_ptr<Stmt>> parse_block() {
    expect_punct("{");
    std::vector<std::unique_ptr<Stmt>> body;
    while (!is_punct("}")) {
      if (lex_.peek().kind == Tok::End) fail("unexpected end of input in block");
      body.push_back(parse_stmt());
    }
    lex_.next();
    return body;
  }

  std::unique_ptr<Stmt> parse_stmt() {
    auto s = std::make_unique<Stmt>();
    s->line = lex_.peek().line;
    s->col = lex_.peek().col;
    if (is_ident("let")) {
      lex_.next();
      s->kind = StmtKind::Let;
      s->name = expect_ident();
      expect_punct(":");
      s->decl_type = parse_type();
      expect_punct("=");
      s->expr = parse_expr();
      expect_punct(";");
      return s;
    }
    if (is_ident("if")) {
      lex_.next();
      s->kind = StmtKind::If;
      expect_punct("(");
      s->expr = parse_expr();
      expect_punct(")");
      s->body = parse_block();
      if (is_ident("else")) {
        lex_.next();
        if (is_ident("if")) {
          s->else_body.push_back(parse_stmt());
        } else {
          s->else_body = parse_block();
        }
      }
      return s;
    }
    if (is_ident("while")) {
      lex_.next();
      s->kind = StmtKind::While;
      expect_punct("(");
      s->expr = parse_expr();
      expect_punct(")");
      s->body = parse_block();
      return s;
    }
    if (is_ident("return")) {
      lex_.next();
      s->kind = StmtKind::Return;
      if (!is_punct(";")) s->expr = parse_expr();
      expect_punct(";");
      return s;
    }
    if (is_ident("assert")) {
      lex_.next();
      s->kind = StmtKind::Assert;
      expect_punct("(");
      s->expr = parse_expr();
      expect_punct(")");
      expect_punct(";");
      return s;
    }
    // Assignment or expression statement; both start with an expression.
    auto e = parse_expr();
    if (is_punct("=")) {
      lex_.next();
      if (e->kind == ExprKind::Var) {
        s->kind = StmtKind::Assign;
        s->name = e->name;
      } else if (e->kind == ExprKind::Index && e->args[0]->kind == ExprKind::Var) {
        s->kind = StmtKind::IndexAssign;
        s->name = e->args[0]->name;
        s->index_expr = std::move(e->args[1]);
      } else {
        fail("invalid assignment target");
      }
      s->expr = parse_expr();
      expect_punct(";");
      return s;
    }
    s->kind = StmtKind::ExprStmt;
    s->expr = std::move(e);
    expect_punct(";");
    return s;
  }

  std::unique_ptr<Expr> make_expr(ExprKind kind) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->line = lex_.peek().line;
    e->col = lex_.peek().col;
    return e;
  }

  std::unique_ptr<Expr> parse_expr() { return parse_or(); }

  std::unique_ptr<Expr> binary(BinOp op, std::unique_ptr<Expr> lhs,
                               std::unique_ptr<Expr> rhs) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Binary;
    e->bin_op = op;
    e->line = lhs->line;
    e->col = lhs->col;
    e->args.push_back(std::move(lhs));
    e->args.push_back(std::move(rhs));
    return e;
  }

  std::unique_ptr<Expr> parse_or() {
    auto lhs = parse_and();
    while (is_punct("||")) {
      lex_.next();
      lhs = binary(BinOp::Or, std::move(lhs), parse_and());
    }
    return lhs;
  }

  std::unique_ptr<Expr> parse_and() {
    auto lhs = parse_cmp();
    while (is_punct("&&")) {
      lex_.next();
      lhs = binary(BinOp::And, std::move(lhs), parse_cmp());
    }
    return lhs;
  }

  std::unique_ptr<Expr> parse_cmp() {
    auto lhs = parse_add();
    static const std::pair<const char*, BinOp> ops[] = {
        {"==", BinOp::Eq}, {"!=", BinOp::Ne}, {"<=", BinOp::Le},
        {">=", BinOp::Ge}, {"<", BinOp::Lt},  {">", BinOp::Gt},
    };
    for (const auto& [tok, op] : ops) {
      if (is_punct(tok)) {
        lex_.next();
        return binary(op, std::move(lhs), parse_add());
      }
    }
    return lhs;
  }

  std::unique_ptr<Expr> parse_add() {
    auto lhs = parse_mul();
    for (;;) {
      if (is_punct("+")) {
        lex_.next();
        lhs = binary(BinOp::Add, std::move(lhs), parse_mul());
      } else if (is_punct("-")) {
        lex_.next();
        lhs = binary(BinOp::Sub, std::move(lhs), parse_mul());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Expr> parse_mul() {
    auto lhs = parse_unary();
    for (;;) {
      BinOp op;
      if (is_punct("*")) op = BinOp::Mul;
      else if (is_punct("/")) op = BinOp::Div;
      else if (is_punct("%")) op = BinOp::Mod;
      else return lhs;
      lex_.next();
      lhs = binary(op, std::move(lhs), parse_unary());
    }
  }

  std::unique_ptr<Expr> parse_unary() {
    if (is_punct("-") || is_punct("!")) {
      auto e = make_expr(ExprKind::Unary);
      e->un_op = lex_.next().text == "-" ? UnOp::Neg : UnOp::Not;
      e->args.push_back(parse_unary());
      return e;
    }
    return parse_postfix();
  }

  std::unique_ptr<Expr> parse_postfix() {
    auto e = parse_primary();
    while (is_punct("[")) {
      lex_.next();
      auto idx = make_expr(ExprKind::Index);
      idx->line = e->line;
      idx->col = e->col;
      idx->args.push_back(std::move(e));
      idx->args.push_back(parse_expr());
      expect_punct("]");
      e = std::move(idx);
    }
    return e;
  }

  std::unique_ptr<Expr> parse_primary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Int) {
      auto e = make_expr(ExprKind::IntLit);
      e->int_val = std::strtoll(lex_.next().text.c_str(), nullptr, 10);
      return e;
    }
    if (t.kind == Tok::Float) {
      auto e = make_expr(ExprKind::FloatLit);
      e->float_val = std::strtod(lex_.next().text.c_str(), nullptr);
      return e;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true" || t.text == "false") {
        auto e = make_expr(ExprKind::BoolLit);
        e->bool_val = lex_.next().text == "true";
        return e;
      }
      auto e = make_expr(ExprKind::Var);
      e->name = lex_.next().text;
      if (is_punct("(")) {
        lex_.next();
        e->kind = ExprKind::Call;
        if (!is_punct(")")) {
          for (;;) {
            e->args.push_back(parse_expr());
            if (is_punct(",")) {
              lex_.next();
              continue;
            }
            break;
          }
        }
        expect_punct(")");
      }
      return e;
    }
    if (is_punct("(")) {
      lex_.next();
      auto e = parse_expr();
      expect_punct(")");
      return e;
    }
    fail("expected expression, got '" + t.text + "'");
  }

  Lexer lex_;
};

// --- validation: name resolution, type checking, site numbering ---

struct Scope {
  std::unordered_map<std::string, uint32_t> slots;
  std::vector<Type> slot_types;
};

class Validator {
 public:
  explicit Validator(Program& p) : p_(p) {}

  void run() {
    p_.function_index.clear();
    for (uint32_t i = 0; i < p_.functions.size(); ++i) {
      const auto& f = p_.functions[i];
      if (p_.function_index.count(f.name))
        throw ParseError("type error: duplicate function '" + f.name + "'", 1, 1);
      p_.function_index[f.name] = i;
    }
    next_site_ = 0;
    for (auto& f : p_.functions) check_function(f);
    p_.site_count = next_site_;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, int line, int col) {
    throw ParseError("type error: " + msg, line, col);
  }

  void check_function(Function& f) {
    scope_ = Scope{};
    ret_type_ = f.return_type;
    for (const auto& param : f.params) declare(param.name, param.type, 1, 1);
    check_block(f.body);
    f.slot_count = static_cast<uint32_t>(scope_.slot_types.size());
  }

  void declare(const std::string& name, Type t, int line, int col) {
    if (scope_.slots.count(name)) fail("redeclaration of '" + name + "'", line, col);
    scope_.slots[name] = static_cast<uint32_t>(scope_.slot_types.size());
    scope_.slot_types.push_back(t);
  }

  void check_block(std::vector<std::unique_ptr<Stmt>>& body) {
    for (auto& s : body) check_stmt(*s);
  }

  void check_stmt(Stmt& s) {
    s.site = next_site_++;
    switch (s.kind) {
      case StmtKind::Let: {
        Type rhs = check_expr(*s.expr);
        if (rhs != s.decl_type)
          fail("let '" + s.name + "' declared " + type_name(s.decl_type) +
                   " but initialized with " + type_name(rhs),
               s.line, s.col);
        declare(s.name, s.decl_type, s.line, s.col);
        s.slot = scope_.slots[s.name];
        break;
      }
      case StmtKind::Assign: {
        auto it = scope_.slots.find(s.name);
        if (it == scope_.slots.end())
          fail("assignment to undeclared '" + s.name + "'", s.line, s.col);
        s.slot = it->second;
        Type rhs = check_expr(*s.expr);
        if (rhs != scope_.slot_types[s.slot])
          fail("assignment type mismatch for '" + s.name + "'", s.line, s.col);
        break;
      }
      case StmtKind::IndexAssign: {
        auto it = scope_.slots.find(s.name);
        if (it == scope_.slots.end())
          fail("assignment to undeclared '" + s.name + "'", s.line, s.col);
        s.slot = it->second;
        Type arr = scope_.slot_types[s.slot];
        if (arr != Type::IntArray && arr != Type::FloatArray)
          fail("indexed assignment to non-array '" + s.name + "'", s.line, s.col);
        if (check_expr(*s.index_expr) != Type::Int)
          fail("array index must be int", s.line, s.col);
        Type rhs = check_expr(*s.expr);
        Type elem = arr == Type::IntArray ? Type::Int : Type::Float;
        if (rhs != elem) fail("array element type mismatch", s.line, s.col);
        break;
      }
      case StmtKind::If:
      case StmtKind::While: {
        if (check_expr(*s.expr) != Type::Bool)
          fail("condition must be bool", s.line, s.col);
        check_block(s.body);
        check_block(s.else_body);
        break;
      }
      case StmtKind::Return: {
        Type t = s.expr ? check_expr(*s.expr) : Type::Unit;
        if (t != ret_type_)
          fail("return type mismatch: expected " + type_name(ret_type_) +
                   ", got " + type_name(t),
               s.line, s.col);
        break;
      }
      case StmtKind::Assert: {
        if (check_expr(*s.expr) != Type::Bool)
          fail("assert expects bool", s.line, s.col);
        break;
      }
      case StmtKind::ExprStmt:
        check_expr(*s.expr);
        break;
    }
  }

  Type check_expr(Expr& e) {
    e.site = next_site_++;
    switch (e.kind) {
      case ExprKind::IntLit: return e.type = Type::Int;
      case ExprKind::FloatLit: return e.type = Type::Float;
      case ExprKind::BoolLit: return e.type = Type::Bool;
      case ExprKind::Var: {
        auto it = scope_.slots.find(e.name);
        if (it == scope_.slots.end())
          fail("undeclared variable '" + e.name + "'", e.line, e.col);
        e.slot = it->second;
        return e.type = scope_.slot_types[e.slot];
      }
      case ExprKind::Unary: {
        Type t = check_expr(*e.args[0]);
        if (e.un_op == UnOp::Neg) {
          if (t != Type::Int && t != Type::Float)
            fail("unary '-' expects numeric operand", e.line, e.col);
          return e.type = t;
        }
        if (t != Type::Bool) fail("'!' expects bool operand", e.line, e.col);
        return e.type = Type::Bool;
      }
      case ExprKind::Binary: {
        Type lhs = check_expr(*e.args[0]);
        Type rhs = check_expr(*e.args[1]);
        if (e.bin_op == BinOp::And || e.bin_op == BinOp::Or) {
          if (lhs != Type::Bool || rhs != Type::Bool)
            fail("logical operator expects bool operands", e.line, e.col);
          return e.type = Type::Bool;
        }
        if (lhs != rhs)
          fail(std::string("operand type mismatch for '") +
                   bin_op_token(e.bin_op) + "'",
               e.line, e.col);
        if (is_arith(e.bin_op)) {
          if (lhs != Type::Int && lhs != Type::Float)
            fail("arithmetic expects numeric operands", e.line, e.col);
          if (e.bin_op == BinOp::Mod && lhs != Type::Int)
            fail("'%' expects int operands", e.line, e.col);
          return e.type = lhs;
        }
        // Comparison.
        if (e.bin_op == BinOp::Eq || e.bin_op == BinOp::Ne) {
          if (lhs != Type::Int && lhs != Type::Float && lhs != Type::Bool)
            fail("'=='/'!=' expects scalar operands", e.line, e.col);
        } else if (lhs != Type::Int && lhs != Type::Float) {
          fail("ordering comparison expects numeric operands", e.line, e.col);
        }
        return e.type = Type::Bool;
      }
      case ExprKind::Index: {
        Type arr = check_expr(*e.args[0]);
        if (check_expr(*e.args[1]) != Type::Int)
          fail("array index must be int", e.line, e.col);
        if (arr == Type::IntArray) return e.type = Type::Int;
        if (arr == Type::FloatArray) return e.type = Type::Float;
        fail("indexing non-array", e.line, e.col);
      }
      case ExprKind::Call: {
        std::vector<Type> arg_types;
        for (auto& a : e.args) arg_types.push_back(check_expr(*a));
        if (e.name == "len") {
          e.builtin = Builtin::Len;
          if (arg_types.size() != 1 ||
              (arg_types[0] != Type::IntArray && arg_types[0] != Type::FloatArray))
            fail("len expects one array argument", e.line, e.col);
          return e.type = Type::Int;
        }
        if (e.name == "int_array" || e.name == "float_array") {
          e.builtin = e.name == "int_array" ? Builtin::IntArrayNew
                                            : Builtin::FloatArrayNew;
          if (arg_types.size() != 1 || arg_types[0] != Type::Int)
            fail(e.name + " expects one int argument", e.line, e.col);
          return e.type =
                     e.builtin == Builtin::IntArrayNew ? Type::IntArray : Type::FloatArray;
        }
        if (e.name == "to_float") {
          e.builtin = Builtin::ToFloat;
          if (arg_types.size() != 1 || arg_types[0] != Type::Int)
            fail("to_float expects one int argument", e.line, e.col);
          return e.type = Type::Float;
        }
        auto it = p_.function_index.find(e.name);
        if (it == p_.function_index.end())
          fail("call to undeclared function '" + e.name + "'", e.line, e.col);
        e.callee = it->second;
        const Function& callee = p_.functions[e.callee];
        if (arg_types.size() != callee.params.size())
          fail("arity mismatch calling '" + e.name + "'", e.line, e.col);
        for (size_t i = 0; i < arg_types.size(); ++i)
          if (arg_types[i] != callee.params[i].type)
            fail("argument type mismatch calling '" + e.name + "'", e.line, e.col);
        return e.type = callee.return_type;
      }
    }
    fail("unreachable expression kind", e.line, e.col);
  }

  Program& p_;
  Scope scope_;
  Type ret_type_ = Type::Unit;
  uint32_t next_site_ = 0;
};

}  // namespace

void validate_program(Program& program) { Validator(program).run(); }

Program parse_program(const std::string& text) {
  Program p = Parser(text).parse();
  validate_program(p);
  return p;
}

}  // namespace mucgf::ir
