#pragma once

// Total derivatives on the jet space of u_xy = F(u_x, u_y, u). Mixed
// derivatives never appear: D_x(v_1) = F, D_x(v_j) = D_y^(j-1) F and
// D_y(u_k) = D_x^(k-1) F are expanded on the fly.

#include <map>
#include <optional>
#include <string>

#include "hypsym/expr.hpp"

namespace hypsym {

enum class Direction { X, Y };

class JetOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HyperbolicEq {
  std::string id;
  Expr F;
  std::map<std::string, Rational> params;  // bound parameters; others stay symbolic
};

struct EvolutionEq {
  std::string id;
  Expr G;
  Direction direction = Direction::X;
  std::map<std::string, Rational> params;
};

/// Throws std::invalid_argument when F uses variables other than u, u1, uy
/// and parameters, or is identically zero.
void validate(const HyperbolicEq& eq, Context& ctx);
/// G may use u..u4 (x) or u, uy..v4 (y) and parameters.
void validate(const EvolutionEq& eq, Context& ctx);

/// Base variables a symbol depends on (argument, cubic constant, and c for omega').
VarMask symbol_dependencies(const Context& ctx, int sym);

/// Exact total derivatives on normal forms, memoized per engine.
class JetEngine {
 public:
  JetEngine(Context& ctx, const Expr& F);
  JetEngine(Context& ctx, const NormalForm& F);

  Context& context() const { return *ctx_; }
  const NormalForm& F() const { return F_; }

  NormalForm d_x(const NormalForm& e);
  NormalForm d_y(const NormalForm& e);
  NormalForm d_x_n(const NormalForm& e, int n);
  NormalForm d_x(const Expr& e) { return d_x(normalize(e, *ctx_)); }
  NormalForm d_y(const Expr& e) { return d_y(normalize(e, *ctx_)); }

  /// Total derivatives of an auxiliary variable (used by transforms).
  void define(int var, NormalForm dx, NormalForm dy);
  void set_memo_enabled(bool on) { memo_on_ = on; }

 private:
  NormalForm dx_var(int id);
  NormalForm dy_var(int id);
  NormalForm chain(int sym, bool x);

  Context* ctx_;
  NormalForm F_;
  bool memo_on_ = true;
  std::map<int, NormalForm> dx_memo_, dy_memo_;
  std::map<int, std::pair<NormalForm, NormalForm>> defined_;
};

/// The same total derivatives built as expression DAGs, sharing nothing with
/// JetEngine beyond the expression layer. Serves as the independent route for
/// numeric cross-checks.
class ExprJet {
 public:
  ExprJet(Context& ctx, const Expr& F);
  Expr d_x(const Expr& e);
  Expr d_y(const Expr& e);
  Expr d_x_n(const Expr& e, int n);
  const Expr& F() const { return F_; }

 private:
  Expr total(const Expr& e, bool x);
  Expr dx_var(int id);
  Expr dy_var(int id);

  Context* ctx_;
  Expr F_;
  DiffCache cache_;
  std::map<int, Expr> dx_memo_, dy_memo_;
  std::unordered_map<const ExprNode*, std::pair<Expr, Expr>> tx_, ty_;
};

/// Exchanges u_k <-> v_k for k >= 1 (u fixed). Throws JetOverflowError if an
/// x-jet above the y-jet bound occurs.
Expr swap_xy(const Expr& e);
NormalForm swap_xy(const NormalForm& e);

}  // namespace hypsym
