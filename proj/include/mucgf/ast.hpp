#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mucgf/value.hpp"

namespace mucgf::ir {

enum class UnOp : uint8_t { Neg, Not };
enum class BinOp : uint8_t {
  Add, Sub, Mul, Div, Mod,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or,
};

const char* bin_op_token(BinOp op);
const char* un_op_token(UnOp op);
bool is_comparison(BinOp op);
bool is_arith(BinOp op);

enum class Builtin : uint8_t { None, Len, IntArrayNew, FloatArrayNew, ToFloat };

enum class ExprKind : uint8_t {
  IntLit, FloatLit, BoolLit, Var, Unary, Binary, Index, Call,
};

struct Expr {
  ExprKind kind;
  uint32_t site = 0;       // preorder site id, unique within the program
  Type type = Type::Unit;  // filled in by validation
  int line = 0, col = 0;

  int64_t int_val = 0;
  double float_val = 0.0;
  bool bool_val = false;
  std::string name;        // Var / Call
  uint32_t slot = 0;       // Var: resolved local slot
  UnOp un_op = UnOp::Neg;
  BinOp bin_op = BinOp::Add;
  uint32_t callee = 0;     // Call: resolved function index
  Builtin builtin = Builtin::None;
  std::vector<std::unique_ptr<Expr>> args;  // operands / index / call args

  std::unique_ptr<Expr> clone() const;
};

enum class StmtKind : uint8_t {
  Let, Assign, IndexAssign, If, While, Return, Assert, ExprStmt,
};

struct Stmt {
  StmtKind kind;
  uint32_t site = 0;
  int line = 0, col = 0;

  std::string name;          // Let/Assign/IndexAssign target
  uint32_t slot = 0;
  Type decl_type = Type::Unit;
  std::unique_ptr<Expr> expr;        // rhs / condition / return value / assert
  std::unique_ptr<Expr> index_expr;  // IndexAssign
  std::vector<std::unique_ptr<Stmt>> body;       // If-then / While
  std::vector<std::unique_ptr<Stmt>> else_body;  // If-else

  std::unique_ptr<Stmt> clone() const;
};

struct Param {
  std::string name;
  Type type;
};

struct Function {
  std::string name;
  std::vector<Param> params;
  Type return_type = Type::Unit;
  std::vector<std::unique_ptr<Stmt>> body;
  uint32_t slot_count = 0;  // params + lets, filled by validation

  Function clone() const;
};

struct Program {
  std::vector<Function> functions;
  std::unordered_map<std::string, uint32_t> function_index;
  uint32_t site_count = 0;

  Program() = default;
  Program(Program&&) = default;
  Program& operator=(Program&&) = default;
  Program(const Program& other) { *this = other.clone(); }
  Program& operator=(const Program& other) {
    if (this != &other) *this = other.clone();
    return *this;
  }

  const Function* find(const std::string& name) const {
    auto it = function_index.find(name);
    return it == function_index.end() ? nullptr : &functions[it->second];
  }

  Program clone() const;
};

// Canonical source text; re-parseable, stable across clone/mutate cycles.
std::string print_program(const Program& program);

// FNV-1a over the canonical text, as fixed-width hex.
std::string program_digest(const Program& program);

// Resolves names to slots/function indices, type-checks every node and
// assigns preorder site ids. Throws ParseError on a type error. Called by
// the parser; must be re-run after structural mutation.
void validate_program(Program& program);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col);
  int line, col;
};

// Parses IR source text into a validated Program.
Program parse_program(const std::string& text);

}  // namespace mucgf::ir
