#include "mucgf/ast.hpp"

#include <sstream>

namespace mucgf::ir {

const char* bin_op_token(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

const char* un_op_token(UnOp op) { return op == UnOp::Neg ? "-" : "!"; }

bool is_comparison(BinOp op) {
  switch (op) {
    case BinOp::Eq: case BinOp::Ne: case BinOp::Lt:
    case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
      return true;
    default:
      return false;
  }
}

bool is_arith(BinOp op) {
  switch (op) {
    case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
    case BinOp::Div: case BinOp::Mod:
      return true;
    default:
      return false;
  }
}

std::unique_ptr<Expr> Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->site = site;
  e->type = type;
  e->line = line;
  e->col = col;
  e->int_val = int_val;
  e->float_val = float_val;
  e->bool_val = bool_val;
  e->name = name;
  e->slot = slot;
  e->un_op = un_op;
  e->bin_op = bin_op;
  e->callee = callee;
  e->builtin = builtin;
  e->args.reserve(args.size());
  for (const auto& a : args) e->args.push_back(a->clone());
  return e;
}

std::unique_ptr<Stmt> Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->site = site;
  s->line = line;
  s->col = col;
  s->name = name;
  s->slot = slot;
  s->decl_type = decl_type;
  if (expr) s->expr = expr->clone();
  if (index_expr) s->index_expr = index_expr->clone();
  s->body.reserve(body.size());
  for (const auto& b : body) s->body.push_back(b->clone());
  s->else_body.reserve(else_body.size());
  for (const auto& b : else_body) s->else_body.push_back(b->clone());
  return s;
}

Function Function::clone() const {
  Function f;
  f.name = name;
  f.params = params;
  f.return_type = return_type;
  f.slot_count = slot_count;
  f.body.reserve(body.size());
  for (const auto& s : body) f.body.push_back(s->clone());
  return f;
}

Program Program::clone() const {
  Program p;
  p.functions.reserve(functions.size());
  for (const auto& f : functions) p.functions.push_back(f.clone());
  p.function_index = function_index;
  p.site_count = site_count;
  return p;
}

namespace {

void print_float_literal(std::ostream& os, double f) {
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << f;
  std::string s = tmp.str();
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  os << s;
}

void print_expr(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit:
      os << e.int_val;
      break;
    case ExprKind::FloatLit:
      print_float_literal(os, e.float_val);
      break;
    case ExprKind::BoolLit:
      os << (e.bool_val ? "true" : "false");
      break;
    case ExprKind::Var:
      os << e.name;
      break;
    case ExprKind::Unary:
      os << un_op_token(e.un_op) << "(";
      print_expr(os, *e.args[0]);
      os << ")";
      break;
    case ExprKind::Binary:
      os << "(";
      print_expr(os, *e.args[0]);
      os << " " << bin_op_token(e.bin_op) << " ";
      print_expr(os, *e.args[1]);
      os << ")";
      break;
    case ExprKind::Index:
      print_expr(os, *e.args[0]);
      os << "[";
      print_expr(os, *e.args[1]);
      os << "]";
      break;
    case ExprKind::Call:
      os << e.name << "(";
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, *e.args[i]);
      }
      os << ")";
      break;
  }
}

void print_block(std::ostream& os, const std::vector<std::unique_ptr<Stmt>>& body,
                 int indent);

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  os << pad;
  switch (s.kind) {
    case StmtKind::Let:
      os << "let " << s.name << ": " << type_name(s.decl_type) << " = ";
      print_expr(os, *s.expr);
      os << ";\n";
      break;
    case StmtKind::Assign:
      os << s.name << " = ";
      print_expr(os, *s.expr);
      os << ";\n";
      break;
    case StmtKind::IndexAssign:
      os << s.name << "[";
      print_expr(os, *s.index_expr);
      os << "] = ";
      print_expr(os, *s.expr);
      os << ";\n";
      break;
    case StmtKind::If:
      os << "if (";
      print_expr(os, *s.expr);
      os << ") {\n";
      print_block(os, s.body, indent + 1);
      os << pad << "}";
      if (!s.else_body.empty()) {
        os << " else {\n";
        print_block(os, s.else_body, indent + 1);
        os << pad << "}";
      }
      os << "\n";
      break;
    case StmtKind::While:
      os << "while (";
      print_expr(os, *s.expr);
      os << ") {\n";
      print_block(os, s.body, indent + 1);
      os << pad << "}\n";
      break;
    case StmtKind::Return:
      os << "return";
      if (s.expr) {
        os << " ";
        print_expr(os, *s.expr);
      }
      os << ";\n";
      break;
    case StmtKind::Assert:
      os << "assert(";
      print_expr(os, *s.expr);
      os << ");\n";
      break;
    case StmtKind::ExprStmt:
      print_expr(os, *s.expr);
      os << ";\n";
      break;
  }
}

void print_block(std::ostream& os, const std::vector<std::unique_ptr<Stmt>>& body,
                 int indent) {
  for (const auto& s : body) print_stmt(os, *s, indent);
}

}  // namespace

std::string print_program(const Program& program) {
  std::ostringstream os;
  for (const auto& f : program.functions) {
    os << "fn " << f.name << "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i) os << ", ";
      os << f.params[i].name << ": " << type_name(f.params[i].type);
    }
    os << ")";
    if (f.return_type != Type::Unit) os << " -> " << type_name(f.return_type);
    os << " {\n";
    print_block(os, f.body, 1);
    os << "}\n";
  }
  return os.str();
}

std::string program_digest(const Program& program) {
  std::string text = print_program(program);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mucgf::ir
