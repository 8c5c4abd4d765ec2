#include "mucgf/mutation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace mucgf::mut {

using ir::BinOp;
using ir::Expr;
using ir::ExprKind;
using ir::Program;
using ir::Stmt;
using ir::StmtKind;
using ir::Type;
using ir::UnOp;

std::string mutator_name(MutatorKind k) {
  switch (k) {
    case MutatorKind::ReturnZero: return "RETURN_ZERO";
    case MutatorKind::NegateConditional: return "NEGATE_CONDITIONAL";
    case MutatorKind::ConditionalBoundary: return "CONDITIONAL_BOUNDARY";
    case MutatorKind::MathOpReplace: return "MATH_OP_REPLACE";
    case MutatorKind::IncrementFlip: return "INCREMENT_FLIP";
    case MutatorKind::InvertNegative: return "INVERT_NEGATIVE";
  }
  return "?";
}

std::optional<MutatorKind> mutator_from_name(const std::string& name) {
  for (MutatorKind k : all_mutators())
    if (mutator_name(k) == name) return k;
  return std::nullopt;
}

std::vector<MutatorKind> all_mutators() {
  return {MutatorKind::ReturnZero,        MutatorKind::NegateConditional,
          MutatorKind::ConditionalBoundary, MutatorKind::MathOpReplace,
          MutatorKind::IncrementFlip,     MutatorKind::InvertNegative};
}

namespace {

bool is_scalar_return_type(Type t) {
  return t == Type::Int || t == Type::Float || t == Type::Bool;
}

bool is_int_literal_one(const Expr& e) {
  return e.kind == ExprKind::IntLit && e.int_val == 1;
}

// Mutators applicable to an expression node.
void expr_applicability(const Expr& e, std::string& node_kind,
                        std::vector<MutatorKind>& out) {
  if (e.kind == ExprKind::Binary) {
    if (ir::is_comparison(e.bin_op)) {
      node_kind = "comparison";
      out.push_back(MutatorKind::NegateConditional);
      if (e.bin_op == BinOp::Lt || e.bin_op == BinOp::Le ||
          e.bin_op == BinOp::Gt || e.bin_op == BinOp::Ge)
        out.push_back(MutatorKind::ConditionalBoundary);
    } else if (ir::is_arith(e.bin_op)) {
      node_kind = "math_op";
      out.push_back(MutatorKind::MathOpReplace);
      if ((e.bin_op == BinOp::Add || e.bin_op == BinOp::Sub) &&
          e.type == Type::Int && is_int_literal_one(*e.args[1])) {
        node_kind = "increment";
        out.push_back(MutatorKind::IncrementFlip);
      }
    }
  } else if (e.kind == ExprKind::Unary && e.un_op == UnOp::Neg) {
    node_kind = "negation";
    out.push_back(MutatorKind::InvertNegative);
  }
}

struct SiteWalker {
  const std::string& function;
  Type return_type;
  std::vector<MutationSite>& sites;

  void walk_expr(const Expr& e) {
    MutationSite site{function, e.site, "", {}};
    expr_applicability(e, site.node_kind, site.applicable);
    if (!site.applicable.empty()) sites.push_back(std::move(site));
    for (const auto& a : e.args) walk_expr(*a);
  }

  void walk_stmt(const Stmt& s) {
    if (s.kind == StmtKind::Return && s.expr &&
        is_scalar_return_type(return_type)) {
      sites.push_back({function, s.site, "return", {MutatorKind::ReturnZero}});
    }
    if (s.index_expr) walk_expr(*s.index_expr);
    if (s.expr) walk_expr(*s.expr);
    for (const auto& b : s.body) walk_stmt(*b);
    for (const auto& b : s.else_body) walk_stmt(*b);
  }
};

Expr* find_expr(Expr& e, uint32_t site) {
  if (e.site == site) return &e;
  for (auto& a : e.args)
    if (Expr* found = find_expr(*a, site)) return found;
  return nullptr;
}

// Locates the statement owning `site` (either the statement itself or an
// expression inside it) so the rewrite can replace through the owning edge.
struct NodeRef {
  Stmt* stmt = nullptr;                  // when the site is a statement
  std::unique_ptr<Expr>* expr = nullptr;  // when the site is an expression
};

std::unique_ptr<Expr>* find_expr_slot(std::unique_ptr<Expr>& slot, uint32_t site) {
  if (slot->site == site) return &slot;
  for (auto& a : slot->args)
    if (auto* found = find_expr_slot(a, site)) return found;
  return nullptr;
}

NodeRef find_node(std::vector<std::unique_ptr<Stmt>>& body, uint32_t site) {
  for (auto& s : body) {
    if (s->site == site) return {s.get(), nullptr};
    if (s->index_expr)
      if (auto* e = find_expr_slot(s->index_expr, site)) return {nullptr, e};
    if (s->expr)
      if (auto* e = find_expr_slot(s->expr, site)) return {nullptr, e};
    NodeRef r = find_node(s->body, site);
    if (r.stmt || r.expr) return r;
    r = find_node(s->else_body, site);
    if (r.stmt || r.expr) return r;
  }
  return {};
}

BinOp negate_conditional(BinOp op) {
  switch (op) {
    case BinOp::Lt: return BinOp::Ge;
    case BinOp::Ge: return BinOp::Lt;
    case BinOp::Le: return BinOp::Gt;
    case BinOp::Gt: return BinOp::Le;
    case BinOp::Eq: return BinOp::Ne;
    case BinOp::Ne: return BinOp::Eq;
    default: throw std::runtime_error("NEGATE_CONDITIONAL: not a comparison");
  }
}

BinOp boundary_swap(BinOp op) {
  switch (op) {
    case BinOp::Lt: return BinOp::Le;
    case BinOp::Le: return BinOp::Lt;
    case BinOp::Gt: return BinOp::Ge;
    case BinOp::Ge: return BinOp::Gt;
    default: throw std::runtime_error("CONDITIONAL_BOUNDARY: not an ordering");
  }
}

BinOp math_replace(BinOp op) {
  switch (op) {
    case BinOp::Add: return BinOp::Sub;
    case BinOp::Sub: return BinOp::Add;
    case BinOp::Mul: return BinOp::Div;
    case BinOp::Div: return BinOp::Mul;
    case BinOp::Mod: return BinOp::Mul;
    default: throw std::runtime_error("MATH_OP_REPLACE: not arithmetic");
  }
}

std::unique_ptr<Expr> zero_literal(Type t) {
  auto e = std::make_unique<Expr>();
  switch (t) {
    case Type::Int:
      e->kind = ExprKind::IntLit;
      e->int_val = 0;
      break;
    case Type::Float:
      e->kind = ExprKind::FloatLit;
      e->float_val = 0.0;
      break;
    case Type::Bool:
      e->kind = ExprKind::BoolLit;
      e->bool_val = false;
      break;
    default:
      throw std::runtime_error("RETURN_ZERO: non-scalar return type");
  }
  return e;
}

}  // namespace

std::vector<MutationSite> enumerate_sites(const Program& program) {
  std::vector<MutationSite> sites;
  for (const auto& f : program.functions) {
    SiteWalker walker{f.name, f.return_type, sites};
    for (const auto& s : f.body) walker.walk_stmt(*s);
  }
  std::sort(sites.begin(), sites.end(),
            [](const MutationSite& a, const MutationSite& b) {
              return a.site_id < b.site_id;
            });
  return sites;
}

Program apply_mutator(const Program& program, const std::string& function,
                      uint32_t site_id, MutatorKind mutator) {
  Program copy = program.clone();
  auto it = copy.function_index.find(function);
  if (it == copy.function_index.end())
    throw std::runtime_error("apply_mutator: unknown function " + function);
  ir::Function& f = copy.functions[it->second];
  NodeRef node = find_node(f.body, site_id);

  switch (mutator) {
    case MutatorKind::ReturnZero: {
      if (!node.stmt || node.stmt->kind != StmtKind::Return || !node.stmt->expr)
        throw std::runtime_error("RETURN_ZERO: site is not a return statement");
      node.stmt->expr = zero_literal(f.return_type);
      break;
    }
    case MutatorKind::NegateConditional: {
      if (!node.expr || (*node.expr)->kind != ExprKind::Binary)
        throw std::runtime_error("NEGATE_CONDITIONAL: site is not a comparison");
      (*node.expr)->bin_op = negate_conditional((*node.expr)->bin_op);
      break;
    }
    case MutatorKind::ConditionalBoundary: {
      if (!node.expr || (*node.expr)->kind != ExprKind::Binary)
        throw std::runtime_error("CONDITIONAL_BOUNDARY: site is not a comparison");
      (*node.expr)->bin_op = boundary_swap((*node.expr)->bin_op);
      break;
    }
    case MutatorKind::MathOpReplace: {
      if (!node.expr || (*node.expr)->kind != ExprKind::Binary)
        throw std::runtime_error("MATH_OP_REPLACE: site is not arithmetic");
      (*node.expr)->bin_op = math_replace((*node.expr)->bin_op);
      break;
    }
    case MutatorKind::IncrementFlip: {
      if (!node.expr || (*node.expr)->kind != ExprKind::Binary ||
          !is_int_literal_one(*(*node.expr)->args[1]))
        throw std::runtime_error("INCREMENT_FLIP: site is not an increment");
      BinOp op = (*node.expr)->bin_op;
      if (op == BinOp::Add) (*node.expr)->bin_op = BinOp::Sub;
      else if (op == BinOp::Sub) (*node.expr)->bin_op = BinOp::Add;
      else throw std::runtime_error("INCREMENT_FLIP: site is not an increment");
      break;
    }
    case MutatorKind::InvertNegative: {
      if (!node.expr || (*node.expr)->kind != ExprKind::Unary ||
          (*node.expr)->un_op != UnOp::Neg)
        throw std::runtime_error("INVERT_NEGATIVE: site is not a negation");
      *node.expr = std::move((*node.expr)->args[0]);
      break;
    }
  }

  ir::validate_program(copy);  // renumber sites, re-check types
  return copy;
}

MutantPool build_mutant_pool(const Program& program, const MutationConfig& config) {
  if (config.enabled.empty())
    throw std::runtime_error("build_mutant_pool: no mutators enabled");

  MutantPool pool;
  pool.program_digest = ir::program_digest(program);
  const std::string original_text = ir::print_program(program);

  std::set<MutatorKind> enabled(config.enabled.begin(), config.enabled.end());
  uint32_t next_id = 0;
  for (const MutationSite& site : enumerate_sites(program)) {
    // Ordered by mutator name within each site.
    std::vector<MutatorKind> applicable;
    for (MutatorKind k : site.applicable)
      if (enabled.count(k)) applicable.push_back(k);
    std::sort(applicable.begin(), applicable.end(),
              [](MutatorKind a, MutatorKind b) {
                return mutator_name(a) < mutator_name(b);
              });
    for (MutatorKind k : applicable) {
      Program mutated = apply_mutator(program, site.function, site.site_id, k);
      if (ir::print_program(mutated) == original_text) continue;  // no-op rewrite
      pool.mutants.push_back(
          {next_id++, site.function, site.site_id, k, std::move(mutated)});
    }
  }
  return dedupe(std::move(pool));
}

MutantPool dedupe(MutantPool pool) {
  std::map<std::string, uint32_t> seen;  // canonical text -> surviving old id
  std::vector<Mutant> survivors;
  for (auto& m : pool.mutants) {
    std::string text = ir::print_program(m.program);
    if (seen.count(text)) continue;
    seen[text] = m.id;
    survivors.push_back(std::move(m));
  }
  // Re-densify ids, preserving order; remap kill statuses.
  std::unordered_map<uint32_t, uint32_t> remap;
  for (uint32_t i = 0; i < survivors.size(); ++i) {
    remap[survivors[i].id] = i;
    survivors[i].id = i;
  }
  std::set<uint32_t> killed;
  for (uint32_t id : pool.killed) {
    auto it = remap.find(id);
    if (it != remap.end()) killed.insert(it->second);
  }
  pool.mutants = std::move(survivors);
  pool.killed = std::move(killed);
  return pool;
}

std::vector<const Mutant*> select_mutants(const MutantPool& pool,
                                          const MutationConfig& config, Rng& rng) {
  if (pool.mutants.empty())
    throw std::runtime_error("select_mutants: empty pool");
  size_t n = pool.mutants.size();
  size_t k = std::min<size_t>(config.mutants_per_exec, n);
  // Partial Fisher-Yates over an index vector.
  std::vector<uint32_t> idx(n);
  for (uint32_t i = 0; i < n; ++i) idx[i] = i;
  std::vector<const Mutant*> selected;
  selected.reserve(k);
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + static_cast<size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
    selected.push_back(&pool.mutants[idx[i]]);
  }
  return selected;
}

std::set<uint32_t> update_kill_statuses(MutantPool& pool,
                                        const std::set<uint32_t>& killed_now) {
  for (uint32_t id : killed_now)
    if (id >= pool.mutants.size())
      throw std::runtime_error("update_kill_statuses: unknown mutant id " +
                               std::to_string(id));
  std::set<uint32_t> fresh;
  for (uint32_t id : killed_now)
    if (pool.killed.insert(id).second) fresh.insert(id);
  return fresh;
}

double mutation_score(uint64_t killed, uint64_t survived) {
  if (killed + survived == 0)
    throw std::runtime_error("mutation_score: no mutants analyzed");
  return static_cast<double>(killed) / static_cast<double>(killed + survived) *
         100.0;
}

std::string pool_to_json(const MutantPool& pool) {
  nlohmann::json j;
  j["version"] = 1;
  j["program_digest"] = pool.program_digest;
  j["mutants"] = nlohmann::json::array();
  for (const auto& m : pool.mutants) {
    j["mutants"].push_back({{"id", m.id},
                            {"function", m.function},
                            {"site_id", m.site_id},
                            {"mutator", mutator_name(m.mutator)},
                            {"program_text", ir::print_program(m.program)}});
  }
  j["killed"] = pool.killed;
  return j.dump(2) + "\n";
}

MutantPool pool_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (j.at("version").get<int>() != 1)
    throw std::runtime_error("pool_from_json: unsupported version");
  MutantPool pool;
  pool.program_digest = j.at("program_digest").get<std::string>();
  for (const auto& mj : j.at("mutants")) {
    Mutant m;
    m.id = mj.at("id").get<uint32_t>();
    m.function = mj.at("function").get<std::string>();
    m.site_id = mj.at("site_id").get<uint32_t>();
    auto kind = mutator_from_name(mj.at("mutator").get<std::string>());
    if (!kind) throw std::runtime_error("pool_from_json: unknown mutator");
    m.mutator = *kind;
    m.program = ir::parse_program(mj.at("program_text").get<std::string>());
    pool.mutants.push_back(std::move(m));
  }
  for (const auto& id : j.at("killed")) pool.killed.insert(id.get<uint32_t>());
  return pool;
}

}  // namespace mucgf::mut
