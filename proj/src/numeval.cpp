#include "hypsym/numeval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace hypsym {

double SamplePoint::at(int id) const {
  if (id < 0 || id >= static_cast<int>(value.size()) || !assigned[static_cast<std::size_t>(id)]) {
    throw NumericError("variable " + std::to_string(id) + " has no sampled value");
  }
  return value[static_cast<std::size_t>(id)];
}

double NumericValue::relative() const { return std::fabs(value) / (1.0 + scale); }

std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0) {
  // Depressed cubic t^3 + p t + q with s = t - b/3.
  double b = c2 / c3, c = c1 / c3, d = c0 / c3;
  double p = c - b * b / 3, q = 2 * b * b * b / 27 - b * c / 3 + d;
  std::vector<double> t;
  double disc = q * q / 4 + p * p * p / 27;
  if (disc > 0) {
    double s = std::sqrt(disc);
    t.push_back(std::cbrt(-q / 2 + s) + std::cbrt(-q / 2 - s));
  } else if (p == 0) {
    t.push_back(0);
  } else {
    double r = 2 * std::sqrt(-p / 3);
    double phi = std::acos(std::clamp(3 * q / (p * r), -1.0, 1.0));
    for (int k = 0; k < 3; ++k) t.push_back(r * std::cos((phi - 2 * std::numbers::pi * k) / 3));
  }
  std::vector<double> out;
  for (double x : t) {
    double s = x - b / 3;
    for (int it = 0; it < 3; ++it) {
      double f = ((c3 * s + c2) * s + c1) * s + c0, df = (3 * c3 * s + 2 * c2) * s + c1;
      if (df == 0) break;
      s -= f / df;
    }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double cubic_symbol_value(double A, double K) { return cubic_real_roots(2, 3 * A, 0, K - A * A * A).back(); }

double cubic_symbol_value_near(double A, double K, double near) {
  auto roots = cubic_real_roots(2, 3 * A, 0, K - A * A * A);
  return *std::min_element(roots.begin(), roots.end(),
                           [&](double x, double y) { return std::fabs(x - near) < std::fabs(y - near); });
}

namespace {

double draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution neg(0.5);
  double v = mag(rng);
  return neg(rng) ? -v : v;
}

struct Redraw {};

double eval_poly(const Poly& p, const SamplePoint& pt) {
  VarMask m = p.mask();
  for (int i = 0; m; ++i, m >>= 1) {
    if ((m & 1u) && !pt.assigned[static_cast<std::size_t>(i)]) throw NumericError("unassigned variable in evaluation");
  }
  return p.eval(pt.value);
}

bool try_sample(const Context& ctx, SamplePoint& pt, std::mt19937_64& rng, const std::map<int, double>& pinned) {
  pt.value.assign(kMaxVars, 0.0);
  pt.assigned.assign(kMaxVars, 0);
  pt.relation_residuals.clear();
  for (int id = 0; id < ctx.size(); ++id) {
    if (ctx.is_symbol(id)) continue;
    pt.value[static_cast<std::size_t>(id)] = draw(rng);
    pt.assigned[static_cast<std::size_t>(id)] = 1;
  }
  for (auto [id, v] : pinned) {
    pt.value[static_cast<std::size_t>(id)] = v;
    pt.assigned[static_cast<std::size_t>(id)] = 1;
  }
  const auto c = static_cast<std::size_t>(Context::kParamC);
  bool c_fixed = pinned.count(Context::kParamC) > 0;
  for (int sym : ctx.symbols()) {
    const SymbolDef& d = *ctx.symbol(sym);
    if (d.kind != SymbolKind::WeierW) continue;
    double W = draw(rng), P = draw(rng);
    if (!c_fixed) {
      pt.value[c] = P * P - 4 * W * W * W;
      c_fixed = true;
    } else {
      double r = 4 * W * W * W + pt.value[c];
      if (r <= 0) return false;
      P = (P < 0 ? -1 : 1) * std::sqrt(r);
    }
    pt.value[static_cast<std::size_t>(sym)] = W;
    pt.value[static_cast<std::size_t>(d.partner)] = P;
    pt.assigned[static_cast<std::size_t>(sym)] = pt.assigned[static_cast<std::size_t>(d.partner)] = 1;
  }
  for (int sym : ctx.symbols()) {
    const SymbolDef& d = *ctx.symbol(sym);
    if (d.kind == SymbolKind::WeierW || d.kind == SymbolKind::WeierP) continue;
    double a = eval_poly(d.arg, pt);
    double v = 0;
    switch (d.kind) {
      case SymbolKind::Exp: v = std::exp(a); break;
      case SymbolKind::Ln:
        if (a <= 0.05) return false;
        v = std::log(a);
        break;
      case SymbolKind::Sqrt:
        if (a <= 0.05) return false;
        v = std::sqrt(a);
        break;
      case SymbolKind::Cubic: {
        v = cubic_symbol_value(a, eval_poly(d.constant, pt));
        if (std::fabs(v) < 0.05 || std::fabs(v + a) < 0.05) return false;  // keep away from 1/f, 1/(f+A) poles
        break;
      }
      default: break;
    }
    pt.value[static_cast<std::size_t>(sym)] = v;
    pt.assigned[static_cast<std::size_t>(sym)] = 1;
  }
  for (int sym : ctx.symbols()) {
    const SymbolDef& d = *ctx.symbol(sym);
    if (d.degree == 0) continue;
    double r = eval_poly(d.relation, pt);
    double scale = 1 + d.relation.eval_max_term(pt.value);
    pt.relation_residuals.emplace_back(ctx.name(sym), r / scale);
  }
  return true;
}

}  // namespace

SamplePoint sample_point(const Context& ctx, std::uint64_t seed, const std::map<int, double>& pinned) {
  std::mt19937_64 rng(seed);
  SamplePoint pt;
  pt.seed = seed;
  for (int attempt = 0; attempt < 100; ++attempt) {
    if (try_sample(ctx, pt, rng, pinned)) return pt;
  }
  throw NumericError("no admissible sample point after 100 draws (seed " + std::to_string(seed) + ")");
}

NumericValue eval(const NormalForm& e, const SamplePoint& p) {
  double num = eval_poly(e.num(), p);
  double scale = e.num().eval_max_term(p.value);
  double den = 1;
  for (const auto& f : e.den()) den *= std::pow(eval_poly(e.context().atom(f.atom), p), f.exp);
  if (den == 0 || !std::isfinite(num) || !std::isfinite(den)) throw NumericError("non-finite value");
  return {num / den, scale / std::fabs(den)};
}

namespace {

class ExprEvaluator {
 public:
  ExprEvaluator(const SamplePoint& p, Context& ctx) : p_(p), ctx_(ctx) {}

  NumericValue run(const Expr& e) {
    if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
    NumericValue r;
    const auto& args = e.args();
    switch (e.op()) {
      case ExprOp::Const:
        r.value = e.value().get_d();
        r.scale = std::fabs(r.value);
        break;
      case ExprOp::Var:
        r.value = p_.at(e.var_id());
        r.scale = std::fabs(r.value);
        break;
      case ExprOp::Add:
        for (const auto& a : args) {
          NumericValue v = run(a);
          r.value += v.value;
          r.scale += v.scale;
        }
        break;
      case ExprOp::Mul:
        r = {1, 1};
        for (const auto& a : args) {
          NumericValue v = run(a);
          r.value *= v.value;
          r.scale *= v.scale;
        }
        break;
      case ExprOp::Pow: {
        NumericValue b = run(args[0]);
        int n = e.exponent();
        if (n < 0 && b.value == 0) throw NumericError("division by zero in evaluation");
        r.value = std::pow(b.value, n);
        r.scale = n > 0 ? std::pow(b.scale, n) : std::fabs(r.value);
        break;
      }
      case ExprOp::Sym: r = symbol(e); break;
    }
    if (!std::isfinite(r.value)) throw NumericError("non-finite intermediate value");
    memo_.emplace(e.node(), r);
    keep_.push_back(e);
    return r;
  }

 private:
  NumericValue symbol(const Expr& e) {
    double a = run(e.args()[0]).value;
    double v = 0;
    switch (e.symbol_kind()) {
      case SymbolKind::Exp: v = std::exp(a); break;
      case SymbolKind::Ln:
        if (a <= 0) throw NumericError("logarithm of non-positive value");
        v = std::log(a);
        break;
      case SymbolKind::Sqrt:
        if (a < 0) throw NumericError("square root of negative value");
        v = std::sqrt(a);
        break;
      case SymbolKind::Cubic: v = cubic_symbol_value(a, run(e.args()[1]).value); break;
      case SymbolKind::WeierW:
      case SymbolKind::WeierP: {
        // omega is a free function: its value lives in the sample point.
        NormalForm arg = normalize(e.args()[0], ctx_);
        int id = ctx_.intern_symbol(e.symbol_kind(), arg.num());
        v = p_.at(id);
        break;
      }
    }
    return {v, std::fabs(v)};
  }

  const SamplePoint& p_;
  Context& ctx_;
  std::unordered_map<const ExprNode*, NumericValue> memo_;
  std::vector<Expr> keep_;
};

template <class Eval>
NumericVerdict verdict(const Context& ctx, int n, double tol, std::uint64_t seed, const std::map<int, double>& pinned,
                       Eval&& ev) {
  NumericVerdict v;
  for (int i = 0; i < n; ++i) {
    SamplePoint p = sample_point(ctx, seed * 1000003ULL + static_cast<std::uint64_t>(i), pinned);
    double rel = ev(p).relative();
    ++v.points;
    v.max_relative = std::max(v.max_relative, rel);
    if (rel > tol) ++v.nonzero_points;
  }
  v.zero_like = v.nonzero_points == 0;
  return v;
}

}  // namespace

NumericValue eval(const Expr& e, const SamplePoint& p, Context& ctx) {
  ExprEvaluator ev(p, ctx);
  return ev.run(e);
}

NumericVerdict numeric_zero(const NormalForm& e, int n, double tol, std::uint64_t seed,
                            const std::map<int, double>& pinned) {
  return verdict(e.context(), n, tol, seed, pinned, [&](const SamplePoint& p) { return eval(e, p); });
}

NumericVerdict numeric_zero(const Expr& e, Context& ctx, int n, double tol, std::uint64_t seed,
                            const std::map<int, double>& pinned) {
  // Intern the symbols first so the sample assigns omega values.
  intern_symbols(e, ctx);
  return verdict(ctx, n, tol, seed, pinned, [&](const SamplePoint& p) { return eval(e, p, ctx); });
}

// ---------------------------------------------------------------------------

namespace {

// One RK4 step of W' = P, P' = 6 W^2 over dt.
std::pair<double, double> omega_step(double W, double P, double dt) {
  auto f = [](double w, double p) { return std::make_pair(p, 6 * w * w); };
  auto [k1w, k1p] = f(W, P);
  auto [k2w, k2p] = f(W + dt / 2 * k1w, P + dt / 2 * k1p);
  auto [k3w, k3p] = f(W + dt / 2 * k2w, P + dt / 2 * k2p);
  auto [k4w, k4p] = f(W + dt * k3w, P + dt * k3p);
  return {W + dt / 6 * (k1w + 2 * k2w + 2 * k3w + k4w), P + dt / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)};
}

// Symbol value after moving base variable `var` by dv, staying on the branch.
double shifted_symbol(const Context& ctx, int sym, int var, double dv, const SamplePoint& p) {
  const SymbolDef& d = *ctx.symbol(sym);
  SamplePoint q = p;
  q.value[static_cast<std::size_t>(var)] += dv;
  double a0 = eval_poly(d.arg, p), a = eval_poly(d.arg, q);
  double s0 = p.at(sym);
  switch (d.kind) {
    case SymbolKind::Exp: return std::exp(a);
    case SymbolKind::Ln: return std::log(a);
    case SymbolKind::Sqrt: return (s0 < 0 ? -1 : 1) * std::sqrt(a);
    case SymbolKind::Cubic: return cubic_symbol_value_near(a, eval_poly(d.constant, q), s0);
    case SymbolKind::WeierW:
    case SymbolKind::WeierP: {
      int w = d.kind == SymbolKind::WeierW ? sym : d.partner;
      double W = p.at(w), P = p.at(ctx.symbol(w)->partner);
      if (var == Context::kParamC && a == a0) {
        // omega fixed while c moves: P follows the relation on its branch.
        if (d.kind == SymbolKind::WeierW) return W;
        return (P < 0 ? -1 : 1) * std::sqrt(4 * W * W * W + q.value[static_cast<std::size_t>(Context::kParamC)]);
      }
      auto [W1, P1] = omega_step(W, P, a - a0);
      return d.kind == SymbolKind::WeierW ? W1 : P1;
    }
  }
  return 0;
}

}  // namespace

DerivativeCheck check_symbol_derivative(Context& ctx, int sym, int var, int points, std::uint64_t seed, double h) {
  DerivativeCheck out{ctx.name(sym), ctx.name(var), 0, 0};
  const NormalForm& rule = symbol_partial(ctx, sym, var);
  for (int i = 0; i < points; ++i) {
    SamplePoint p = sample_point(ctx, seed * 7919ULL + static_cast<std::uint64_t>(i));
    double fd = (shifted_symbol(ctx, sym, var, h, p) - shifted_symbol(ctx, sym, var, -h, p)) / (2 * h);
    double exact = eval(rule, p).value;
    double err = std::fabs(fd - exact) / std::max(1.0, std::fabs(exact));
    out.max_relative_error = std::max(out.max_relative_error, err);
    ++out.points;
  }
  return out;
}

}  // namespace hypsym
