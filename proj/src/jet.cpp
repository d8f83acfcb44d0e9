#include "hypsym/jet.hpp"

namespace hypsym {

namespace {

VarMask bit(int i) { return VarMask{1} << i; }

VarMask allowed_hyperbolic() { return bit(Context::ux(0)) | bit(Context::ux(1)) | bit(Context::vy(1)); }

}  // namespace

void validate(const HyperbolicEq& eq, Context& ctx) {
  VarMask extra = eq.F.free_vars() & ~allowed_hyperbolic() & ~ctx.parameter_mask();
  if (extra) throw std::invalid_argument(eq.id + ": F may depend only on u, u1, uy and parameters");
  if (normalize(eq.F, ctx).is_zero()) throw std::invalid_argument(eq.id + ": F is identically zero");
}

void validate(const EvolutionEq& eq, Context& ctx) {
  VarMask ok = bit(Context::ux(0));
  for (int k = 1; k <= 4; ++k) ok |= eq.direction == Direction::X ? bit(Context::ux(k)) : bit(Context::vy(k));
  if (eq.G.free_vars() & ~ok & ~ctx.parameter_mask()) {
    throw std::invalid_argument(eq.id + ": G may depend only on jets of order at most 4 and parameters");
  }
}

VarMask symbol_dependencies(const Context& ctx, int sym) {
  const SymbolDef& d = *ctx.symbol(sym);
  VarMask m = d.arg.mask() | d.constant.mask();
  if (d.kind == SymbolKind::WeierP) m |= bit(Context::kParamC);
  return m;
}

// ---------------------------------------------------------------------------

JetEngine::JetEngine(Context& ctx, const Expr& F) : JetEngine(ctx, normalize(F, ctx)) {}

JetEngine::JetEngine(Context& ctx, const NormalForm& F) : ctx_(&ctx), F_(F) {}

void JetEngine::define(int var, NormalForm dx, NormalForm dy) {
  defined_.insert_or_assign(var, std::make_pair(std::move(dx), std::move(dy)));
  dx_memo_.clear();
  dy_memo_.clear();
}

NormalForm JetEngine::chain(int sym, bool x) {
  NormalForm r(*ctx_);
  VarMask m = symbol_dependencies(*ctx_, sym);
  for (int b = 0; m; ++b, m >>= 1) {
    if (!(m & 1u)) continue;
    NormalForm db = x ? dx_var(b) : dy_var(b);
    if (!db.is_zero()) r += symbol_partial(*ctx_, sym, b) * db;
  }
  return r;
}

NormalForm JetEngine::dx_var(int id) {
  if (memo_on_) {
    if (auto it = dx_memo_.find(id); it != dx_memo_.end()) return it->second;
  }
  NormalForm r(*ctx_);
  if (auto d = defined_.find(id); d != defined_.end()) {
    r = d->second.first;
  } else if (Context::is_x_jet(id)) {
    if (id + 1 > Context::kMaxXJet) throw JetOverflowError("x-jet order exceeds u" + std::to_string(Context::kMaxXJet));
    r = NormalForm::variable(*ctx_, Context::ux(id + 1));
  } else if (Context::is_y_jet(id)) {
    int j = Context::jet_order(id);
    r = j == 1 ? F_ : d_y(dx_var(Context::vy(j - 1)));
  } else if (ctx_->is_symbol(id)) {
    r = chain(id, true);
  } else if (ctx_->kind(id) == VarKind::Aux) {
    throw std::invalid_argument("no total derivative defined for " + ctx_->name(id));
  }
  if (memo_on_) dx_memo_.insert_or_assign(id, r);
  return r;
}

NormalForm JetEngine::dy_var(int id) {
  if (memo_on_) {
    if (auto it = dy_memo_.find(id); it != dy_memo_.end()) return it->second;
  }
  NormalForm r(*ctx_);
  if (auto d = defined_.find(id); d != defined_.end()) {
    r = d->second.second;
  } else if (Context::is_x_jet(id)) {
    if (id == 0) {
      r = NormalForm::variable(*ctx_, Context::vy(1));
    } else {
      r = id == 1 ? F_ : d_x(dy_var(Context::ux(id - 1)));
    }
  } else if (Context::is_y_jet(id)) {
    int j = Context::jet_order(id);
    if (j + 1 > Context::kMaxYJet) throw JetOverflowError("y-jet order exceeds " + std::to_string(Context::kMaxYJet));
    r = NormalForm::variable(*ctx_, Context::vy(j + 1));
  } else if (ctx_->is_symbol(id)) {
    r = chain(id, false);
  } else if (ctx_->kind(id) == VarKind::Aux) {
    throw std::invalid_argument("no total derivative defined for " + ctx_->name(id));
  }
  if (memo_on_) dy_memo_.insert_or_assign(id, r);
  return r;
}

NormalForm JetEngine::d_x(const NormalForm& e) {
  return e.derive([this](int v) { return dx_var(v); });
}

NormalForm JetEngine::d_y(const NormalForm& e) {
  return e.derive([this](int v) { return dy_var(v); });
}

NormalForm JetEngine::d_x_n(const NormalForm& e, int n) {
  if (n < 0) throw std::invalid_argument("negative derivative order");
  NormalForm r = e;
  for (int i = 0; i < n; ++i) r = d_x(r);
  return r;
}

// ---------------------------------------------------------------------------

ExprJet::ExprJet(Context& ctx, const Expr& F) : ctx_(&ctx), F_(F), cache_(ctx) {}

Expr ExprJet::dx_var(int id) {
  if (auto it = dx_memo_.find(id); it != dx_memo_.end()) return it->second;
  Expr r;
  if (Context::is_x_jet(id)) {
    if (id + 1 > Context::kMaxXJet) throw JetOverflowError("x-jet order exceeds u" + std::to_string(Context::kMaxXJet));
    r = Expr::var(id + 1);
  } else if (Context::is_y_jet(id)) {
    int j = Context::jet_order(id);
    r = j == 1 ? F_ : d_y(dx_var(Context::vy(j - 1)));
  } else if (ctx_->kind(id) != VarKind::Parameter) {
    throw std::invalid_argument("no total derivative defined for " + ctx_->name(id));
  }
  dx_memo_.emplace(id, r);
  return r;
}

Expr ExprJet::dy_var(int id) {
  if (auto it = dy_memo_.find(id); it != dy_memo_.end()) return it->second;
  Expr r;
  if (Context::is_x_jet(id)) {
    r = id == 0 ? Expr::var(Context::vy(1)) : id == 1 ? F_ : d_x(dy_var(Context::ux(id - 1)));
  } else if (Context::is_y_jet(id)) {
    int j = Context::jet_order(id);
    if (j + 1 > Context::kMaxYJet) throw JetOverflowError("y-jet order exceeds " + std::to_string(Context::kMaxYJet));
    r = Expr::var(Context::vy(j + 1));
  } else if (ctx_->kind(id) != VarKind::Parameter) {
    throw std::invalid_argument("no total derivative defined for " + ctx_->name(id));
  }
  dy_memo_.emplace(id, r);
  return r;
}

Expr ExprJet::total(const Expr& e, bool x) {
  auto& memo = x ? tx_ : ty_;
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second.second;
  std::vector<Expr> parts;
  VarMask m = e.free_vars();
  for (int v = 0; m; ++v, m >>= 1) {
    if (!(m & 1u)) continue;
    Expr dv = x ? dx_var(v) : dy_var(v);
    if (dv.is_zero()) continue;
    parts.push_back(cache_.diff(e, v) * dv);
  }
  Expr r = Expr::add(std::move(parts));
  memo.emplace(e.node(), std::make_pair(e, r));
  return r;
}

Expr ExprJet::d_x(const Expr& e) { return total(e, true); }
Expr ExprJet::d_y(const Expr& e) { return total(e, false); }

Expr ExprJet::d_x_n(const Expr& e, int n) {
  Expr r = e;
  for (int i = 0; i < n; ++i) r = d_x(r);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

Expr swap_rec(const Expr& e, std::unordered_map<const ExprNode*, std::pair<Expr, Expr>>& memo) {
  if (e.op() == ExprOp::Var) {
    int id = e.var_id();
    if (Context::is_x_jet(id) && id >= 1) {
      if (id > Context::kMaxYJet) throw JetOverflowError("u" + std::to_string(id) + " has no y-jet mirror");
      return Expr::var(Context::vy(id));
    }
    if (Context::is_y_jet(id)) return Expr::var(Context::ux(Context::jet_order(id)));
    return e;
  }
  if (e.args().empty()) return e;
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second.second;
  std::vector<Expr> args;
  for (const auto& a : e.args()) args.push_back(swap_rec(a, memo));
  Expr r;
  switch (e.op()) {
    case ExprOp::Add: r = Expr::add(std::move(args)); break;
    case ExprOp::Mul: r = Expr::mul(std::move(args)); break;
    case ExprOp::Pow: r = Expr::pow(args[0], e.exponent()); break;
    case ExprOp::Sym: r = Expr::symbol(e.symbol_kind(), std::move(args)); break;
    default: r = e;
  }
  memo.emplace(e.node(), std::make_pair(e, r));
  return r;
}

}  // namespace

Expr swap_xy(const Expr& e) {
  std::unordered_map<const ExprNode*, std::pair<Expr, Expr>> memo;
  return swap_rec(e, memo);
}

NormalForm swap_xy(const NormalForm& e) { return normalize(swap_xy(to_expr(e)), e.context()); }

}  // namespace hypsym
