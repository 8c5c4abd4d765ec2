#include "mucgf/interp.hpp"

#include <cmath>

namespace mucgf::ir {

namespace {

struct Crash {
  CrashKind kind;
};

class Interpreter {
 public:
  Interpreter(const Program& program, uint64_t fuel_cap, CoverageSet* coverage)
      : program_(program), fuel_cap_(fuel_cap), coverage_(coverage) {}

  uint64_t fuel_used() const { return fuel_; }

  Value call(const Function& f, std::vector<Value> args) {
    std::vector<Value> locals(f.slot_count);
    for (size_t i = 0; i < args.size(); ++i) locals[i] = std::move(args[i]);
    Value ret;
    exec_block(f.body, locals, ret);
    return ret;
  }

 private:
  void charge() {
    if (++fuel_ > fuel_cap_) throw Crash{CrashKind::FuelExhausted};
  }

  // Returns true when a return statement fired; `ret` holds the value.
  bool exec_block(const std::vector<std::unique_ptr<Stmt>>& body,
                  std::vector<Value>& locals, Value& ret) {
    for (const auto& s : body)
      if (exec_stmt(*s, locals, ret)) return true;
    return false;
  }

  bool exec_stmt(const Stmt& s, std::vector<Value>& locals, Value& ret) {
    charge();
    switch (s.kind) {
      case StmtKind::Let:
      case StmtKind::Assign:
        locals[s.slot] = eval(*s.expr, locals);
        return false;
      case StmtKind::IndexAssign: {
        Value idx = eval(*s.index_expr, locals);
        Value rhs = eval(*s.expr, locals);
        Value& arr = locals[s.slot];
        int64_t i = idx.as_int();
        if (arr.type() == Type::IntArray) {
          auto& xs = arr.mutable_ints();
          if (i < 0 || static_cast<size_t>(i) >= xs.size())
            throw Crash{CrashKind::IndexOutOfBounds};
          xs[static_cast<size_t>(i)] = rhs.as_int();
        } else {
          auto& xs = arr.mutable_floats();
          if (i < 0 || static_cast<size_t>(i) >= xs.size())
            throw Crash{CrashKind::IndexOutOfBounds};
          xs[static_cast<size_t>(i)] = rhs.as_float();
        }
        return false;
      }
      case StmtKind::If: {
        bool cond = eval(*s.expr, locals).as_bool();
        if (coverage_) coverage_->emplace(s.site, cond);
        return exec_block(cond ? s.body : s.else_body, locals, ret);
      }
      case StmtKind::While: {
        for (;;) {
          bool cond = eval(*s.expr, locals).as_bool();
          if (coverage_) coverage_->emplace(s.site, cond);
          if (!cond) return false;
          if (exec_block(s.body, locals, ret)) return true;
          charge();  // one unit per loop-back
        }
      }
      case StmtKind::Return:
        ret = s.expr ? eval(*s.expr, locals) : Value::unit();
        return true;
      case StmtKind::Assert:
        if (!eval(*s.expr, locals).as_bool())
          throw Crash{CrashKind::AssertionFailure};
        return false;
      case StmtKind::ExprStmt:
        eval(*s.expr, locals);
        return false;
    }
    return false;
  }

  Value eval(const Expr& e, std::vector<Value>& locals) {
    charge();
    switch (e.kind) {
      case ExprKind::IntLit: return Value::integer(e.int_val);
      case ExprKind::FloatLit: return Value::floating(e.float_val);
      case ExprKind::BoolLit: return Value::boolean(e.bool_val);
      case ExprKind::Var: return locals[e.slot];
      case ExprKind::Unary: {
        Value v = eval(*e.args[0], locals);
        if (e.un_op == UnOp::Not) return Value::boolean(!v.as_bool());
        if (v.type() == Type::Int)
          return Value::integer(
              static_cast<int64_t>(0 - static_cast<uint64_t>(v.as_int())));
        return Value::floating(-v.as_float());
      }
      case ExprKind::Binary: {
        // Short-circuit logical operators.
        if (e.bin_op == BinOp::And) {
          if (!eval(*e.args[0], locals).as_bool()) return Value::boolean(false);
          return Value::boolean(eval(*e.args[1], locals).as_bool());
        }
        if (e.bin_op == BinOp::Or) {
          if (eval(*e.args[0], locals).as_bool()) return Value::boolean(true);
          return Value::boolean(eval(*e.args[1], locals).as_bool());
        }
        Value a = eval(*e.args[0], locals);
        Value b = eval(*e.args[1], locals);
        if (a.type() == Type::Int) return int_binary(e.bin_op, a.as_int(), b.as_int());
        if (a.type() == Type::Float)
          return float_binary(e.bin_op, a.as_float(), b.as_float());
        // Bool ==/!= only.
        if (e.bin_op == BinOp::Eq) return Value::boolean(a.as_bool() == b.as_bool());
        return Value::boolean(a.as_bool() != b.as_bool());
      }
      case ExprKind::Index: {
        Value arr = eval(*e.args[0], locals);
        int64_t i = eval(*e.args[1], locals).as_int();
        if (arr.type() == Type::IntArray) {
          const auto& xs = arr.ints();
          if (i < 0 || static_cast<size_t>(i) >= xs.size())
            throw Crash{CrashKind::IndexOutOfBounds};
          return Value::integer(xs[static_cast<size_t>(i)]);
        }
        const auto& xs = arr.floats();
        if (i < 0 || static_cast<size_t>(i) >= xs.size())
          throw Crash{CrashKind::IndexOutOfBounds};
        return Value::floating(xs[static_cast<size_t>(i)]);
      }
      case ExprKind::Call: {
        switch (e.builtin) {
          case Builtin::Len: {
            Value arr = eval(*e.args[0], locals);
            size_t n = arr.type() == Type::IntArray ? arr.ints().size()
                                                    : arr.floats().size();
            return Value::integer(static_cast<int64_t>(n));
          }
          case Builtin::IntArrayNew: {
            int64_t n = eval(*e.args[0], locals).as_int();
            if (n < 0) throw Crash{CrashKind::IndexOutOfBounds};
            return Value::int_array(std::vector<int64_t>(static_cast<size_t>(n), 0));
          }
          case Builtin::FloatArrayNew: {
            int64_t n = eval(*e.args[0], locals).as_int();
            if (n < 0) throw Crash{CrashKind::IndexOutOfBounds};
            return Value::float_array(std::vector<double>(static_cast<size_t>(n), 0.0));
          }
          case Builtin::ToFloat:
            return Value::floating(
                static_cast<double>(eval(*e.args[0], locals).as_int()));
          case Builtin::None:
            break;
        }
        std::vector<Value> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(eval(*a, locals));
        return call(program_.functions[e.callee], std::move(args));
      }
    }
    return Value::unit();
  }

  static Value int_binary(BinOp op, int64_t a, int64_t b) {
    uint64_t ua = static_cast<uint64_t>(a), ub = static_cast<uint64_t>(b);
    switch (op) {
      case BinOp::Add: return Value::integer(static_cast<int64_t>(ua + ub));
      case BinOp::Sub: return Value::integer(static_cast<int64_t>(ua - ub));
      case BinOp::Mul: return Value::integer(static_cast<int64_t>(ua * ub));
      case BinOp::Div:
        if (b == 0) throw Crash{CrashKind::DivByZero};
        if (a == INT64_MIN && b == -1) return Value::integer(INT64_MIN);  // wraps
        return Value::integer(a / b);
      case BinOp::Mod:
        if (b == 0) throw Crash{CrashKind::DivByZero};
        if (a == INT64_MIN && b == -1) return Value::integer(0);
        return Value::integer(a % b);
      case BinOp::Eq: return Value::boolean(a == b);
      case BinOp::Ne: return Value::boolean(a != b);
      case BinOp::Lt: return Value::boolean(a < b);
      case BinOp::Le: return Value::boolean(a <= b);
      case BinOp::Gt: return Value::boolean(a > b);
      case BinOp::Ge: return Value::boolean(a >= b);
      default: return Value::unit();
    }
  }

  static Value float_binary(BinOp op, double a, double b) {
    switch (op) {
      case BinOp::Add: return Value::floating(a + b);
      case BinOp::Sub: return Value::floating(a - b);
      case BinOp::Mul: return Value::floating(a * b);
      case BinOp::Div:
        if (b == 0.0) throw Crash{CrashKind::DivByZero};
        return Value::floating(a / b);
      case BinOp::Eq: return Value::boolean(a == b);
      case BinOp::Ne: return Value::boolean(a != b);
      case BinOp::Lt: return Value::boolean(a < b);
      case BinOp::Le: return Value::boolean(a <= b);
      case BinOp::Gt: return Value::boolean(a > b);
      case BinOp::Ge: return Value::boolean(a >= b);
      default: return Value::unit();
    }
  }

  const Program& program_;
  uint64_t fuel_cap_;
  uint64_t fuel_ = 0;
  CoverageSet* coverage_;
};

bool args_match(const Function& f, const std::vector<Value>& args) {
  if (args.size() != f.params.size()) return false;
  for (size_t i = 0; i < args.size(); ++i)
    if (args[i].type() != f.params[i].type) return false;
  return true;
}

}  // namespace

ExecutionResult execute(const Program& program,
                        const std::vector<BehaviorInvocation>& invocations,
                        uint64_t fuel_cap, CoverageSet* coverage) {
  Interpreter interp(program, fuel_cap, coverage);
  ExecutionResult result;
  try {
    for (const auto& inv : invocations) {
      const Function* f = program.find(inv.function);
      if (f == nullptr || !args_match(*f, inv.args))
        throw Crash{CrashKind::TypeFault};
      result.outputs.push_back(interp.call(*f, inv.args));
    }
    result.status = ExecStatus::Success;
  } catch (const Crash& c) {
    result.status = ExecStatus::Failure;
    result.outputs.clear();
    result.crash = c.kind;
  }
  result.fuel_used = interp.fuel_used();
  return result;
}

}  // namespace mucgf::ir
