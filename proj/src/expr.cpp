#include "hypsym/expr.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace hypsym {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t hash_rational(const Rational& q) {
  return mix(std::hash<std::string>()(q.get_num().get_str(16)), std::hash<std::string>()(q.get_den().get_str(16)));
}

Expr make(ExprNode n);

}  // namespace

struct ExprFactory {
  static Expr wrap(std::shared_ptr<const ExprNode> n) { return Expr(std::move(n)); }
};

namespace {

Expr make(ExprNode n) {
  std::size_t h = std::hash<int>()(static_cast<int>(n.op));
  switch (n.op) {
    case ExprOp::Const: h = mix(h, hash_rational(n.value)); break;
    case ExprOp::Var:
      h = mix(h, static_cast<std::size_t>(n.var));
      n.free = VarMask{1} << n.var;
      break;
    default: break;
  }
  if (n.op == ExprOp::Sym) h = mix(h, static_cast<std::size_t>(n.sym));
  if (n.op == ExprOp::Sym && n.sym == SymbolKind::WeierP) n.free |= VarMask{1} << Context::kParamC;
  if (n.op == ExprOp::Pow) h = mix(h, static_cast<std::size_t>(n.exponent + 1000));
  for (const auto& a : n.args) {
    h = mix(h, a.hash());
    n.free |= a.free_vars();
  }
  n.hash = h;
  return ExprFactory::wrap(std::make_shared<const ExprNode>(std::move(n)));
}

}  // namespace

Expr::Expr() : Expr(constant(0)) {}

Expr Expr::constant(const Rational& c) {
  ExprNode n;
  n.value = c;
  return make(std::move(n));
}

Expr Expr::var(int id) {
  ExprNode n;
  n.op = ExprOp::Var;
  n.var = id;
  return make(std::move(n));
}

Expr Expr::symbol(SymbolKind kind, std::vector<Expr> args) {
  std::size_t want = kind == SymbolKind::Cubic ? 2 : 1;
  if (args.size() != want) throw std::invalid_argument("wrong number of symbol arguments");
  ExprNode n;
  n.op = ExprOp::Sym;
  n.sym = kind;
  n.args = std::move(args);
  return make(std::move(n));
}

Expr Expr::add(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  Rational c = 0;
  for (auto& t : terms) {
    if (t.op() == ExprOp::Add) {
      for (const auto& s : t.args()) {
        if (s.is_const()) {
          c += s.value();
        } else {
          flat.push_back(s);
        }
      }
    } else if (t.is_const()) {
      c += t.value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (c != 0) flat.push_back(constant(c));
  if (flat.empty()) return constant(0);
  if (flat.size() == 1) return flat.front();
  ExprNode n;
  n.op = ExprOp::Add;
  n.args = std::move(flat);
  return make(std::move(n));
}

Expr Expr::mul(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  Rational c = 1;
  auto take = [&](const Expr& f) {
    if (f.is_const()) {
      c *= f.value();
    } else {
      flat.push_back(f);
    }
  };
  for (auto& f : factors) {
    if (f.op() == ExprOp::Mul) {
      for (const auto& s : f.args()) take(s);
    } else {
      take(f);
    }
  }
  if (c == 0) return constant(0);
  if (flat.empty()) return constant(c);
  if (c != 1) flat.insert(flat.begin(), constant(c));
  if (flat.size() == 1) return flat.front();
  ExprNode n;
  n.op = ExprOp::Mul;
  n.args = std::move(flat);
  return make(std::move(n));
}

Expr Expr::pow(const Expr& base, int n) {
  if (n == 0) return constant(1);
  if (n == 1) return base;
  if (base.is_const()) {
    if (base.value() == 0) {
      if (n < 0) throw DivisionByZero("zero raised to a negative power");
      return constant(0);
    }
    mpz_class num = base.value().get_num(), den = base.value().get_den();
    unsigned k = static_cast<unsigned>(n < 0 ? -n : n);
    mpz_class pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), k);
    mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), k);
    Rational r = n < 0 ? Rational(pd, pn) : Rational(pn, pd);
    r.canonicalize();
    return constant(r);
  }
  if (base.op() == ExprOp::Pow) return pow(base.args()[0], base.exponent() * n);
  ExprNode node;
  node.op = ExprOp::Pow;
  node.exponent = n;
  node.args = {base};
  return make(std::move(node));
}

ExprOp Expr::op() const { return node_->op; }
const Rational& Expr::value() const { return node_->value; }
int Expr::var_id() const { return node_->var; }
SymbolKind Expr::symbol_kind() const { return node_->sym; }
int Expr::exponent() const { return node_->exponent; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
VarMask Expr::free_vars() const { return node_->free; }
std::size_t Expr::hash() const { return node_->hash; }

std::size_t Expr::dag_size() const {
  std::set<const ExprNode*> seen;
  std::vector<const ExprNode*> stack{node_.get()};
  while (!stack.empty()) {
    const ExprNode* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    for (const auto& a : n->args) stack.push_back(a.node());
  }
  return seen.size();
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op()) return false;
  switch (a.op()) {
    case ExprOp::Const: return a.value() == b.value();
    case ExprOp::Var: return a.var_id() == b.var_id();
    case ExprOp::Sym:
      if (a.symbol_kind() != b.symbol_kind()) return false;
      break;
    case ExprOp::Pow:
      if (a.exponent() != b.exponent()) return false;
      break;
    default: break;
  }
  if (a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (!structurally_equal(a.args()[i], b.args()[i])) return false;
  }
  return true;
}

Expr exp_of(const Expr& arg) { return Expr::symbol(SymbolKind::Exp, {arg}); }
Expr ln_of(const Expr& arg) { return Expr::symbol(SymbolKind::Ln, {arg}); }
Expr sqrt_of(const Expr& arg) { return Expr::symbol(SymbolKind::Sqrt, {arg}); }
Expr cubic_of(const Expr& arg, const Expr& constant) { return Expr::symbol(SymbolKind::Cubic, {arg, constant}); }
Expr f_of(const Expr& arg) { return cubic_of(arg, Expr::constant(1)); }
Expr fa_of(const Expr& arg, const Context& ctx) { return cubic_of(arg, Expr::pow(Expr::var(ctx.id("a")), 3)); }
Expr omega_of(const Expr& arg) { return Expr::symbol(SymbolKind::WeierW, {arg}); }
Expr omega_prime_of(const Expr& arg) { return Expr::symbol(SymbolKind::WeierP, {arg}); }

// ---------------------------------------------------------------------------
// Differentiation

Expr DiffCache::diff(const Expr& e, int var) {
  if (!((e.free_vars() >> var) & 1u)) return Expr::constant(0);
  if (e.op() == ExprOp::Var) return Expr::constant(1);
  Key key{e.node(), var};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second.second;

  Expr result;
  const auto& args = e.args();
  switch (e.op()) {
    case ExprOp::Add: {
      std::vector<Expr> parts;
      for (const auto& a : args) parts.push_back(diff(a, var));
      result = Expr::add(std::move(parts));
      break;
    }
    case ExprOp::Mul: {
      std::vector<Expr> parts;
      for (std::size_t i = 0; i < args.size(); ++i) {
        Expr d = diff(args[i], var);
        if (d.is_zero()) continue;
        std::vector<Expr> fs;
        for (std::size_t j = 0; j < args.size(); ++j) fs.push_back(j == i ? d : args[j]);
        parts.push_back(Expr::mul(std::move(fs)));
      }
      result = Expr::add(std::move(parts));
      break;
    }
    case ExprOp::Pow: {
      const Expr& b = args[0];
      int n = e.exponent();
      result = Expr::mul({Expr::constant(n), Expr::pow(b, n - 1), diff(b, var)});
      break;
    }
    case ExprOp::Sym: {
      const Expr& arg = args[0];
      Expr darg = diff(arg, var);
      switch (e.symbol_kind()) {
        case SymbolKind::Exp: result = e * darg; break;
        case SymbolKind::Ln: result = darg / arg; break;
        case SymbolKind::Sqrt: result = darg / (Expr::constant(2) * e); break;
        case SymbolKind::Cubic: {
          Expr dk = diff(args[1], var);
          Expr part = (arg - e) / (Expr::constant(2) * e) * darg;
          if (!dk.is_zero()) part = part - dk / (Expr::constant(6) * e * (e + arg));
          result = part;
          break;
        }
        case SymbolKind::WeierW: result = omega_prime_of(arg) * darg; break;
        case SymbolKind::WeierP: {
          Expr w = omega_of(arg);
          result = Expr::constant(6) * Expr::pow(w, 2) * darg;
          // omega is taken independent of c, so P^2 = 4 W^3 + c forces dP/dc = 1/(2P).
          if (var == Context::kParamC) result = result + Expr::pow(Expr::constant(2) * e, -1);
          break;
        }
      }
      break;
    }
    default: result = Expr::constant(0);
  }
  memo_.emplace(key, std::make_pair(e, result));
  return result;
}

Expr diff(const Expr& e, int var, Context& ctx) {
  DiffCache cache(ctx);
  return cache.diff(e, var);
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

class Normalizer {
 public:
  explicit Normalizer(Context& ctx) : ctx_(ctx) {}

  NormalForm run(const Expr& e) {
    if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
    NormalForm r(ctx_);
    switch (e.op()) {
      case ExprOp::Const: r = NormalForm(ctx_, e.value()); break;
      case ExprOp::Var: r = NormalForm::variable(ctx_, e.var_id()); break;
      case ExprOp::Add:
        for (const auto& a : e.args()) r = r + run(a);
        break;
      case ExprOp::Mul:
        r = NormalForm(ctx_, 1);
        for (const auto& a : e.args()) r = r * run(a);
        break;
      case ExprOp::Pow: r = run(e.args()[0]).pow(e.exponent()); break;
      case ExprOp::Sym: r = symbol(e); break;
    }
    memo_.emplace(e.node(), r);
    keep_.push_back(e);
    return r;
  }

 private:
  Poly base_poly(const NormalForm& nf, const char* what) {
    if (!nf.den().empty() || (nf.num().mask() & ctx_.algebraic_mask())) {
      throw ContextError(std::string("argument of ") + what + " must be a polynomial in base variables");
    }
    return nf.num();
  }

  NormalForm symbol(const Expr& e) {
    NormalForm arg = run(e.args()[0]);
    switch (e.symbol_kind()) {
      case SymbolKind::Exp: {
        Poly p = base_poly(arg, "exp");
        if (p.is_zero()) return NormalForm(ctx_, 1);
        auto [c, prim] = p.content_primitive();
        if (c.get_den() == 1 && c.get_num().fits_sint_p()) {
          int k = static_cast<int>(c.get_num().get_si());
          int id = ctx_.intern_symbol(SymbolKind::Exp, prim);
          return NormalForm::variable(ctx_, id).pow(k);
        }
        return NormalForm::variable(ctx_, ctx_.intern_symbol(SymbolKind::Exp, p));
      }
      case SymbolKind::Ln: return NormalForm::variable(ctx_, ctx_.intern_symbol(SymbolKind::Ln, base_poly(arg, "ln")));
      case SymbolKind::Sqrt:
        return NormalForm::variable(ctx_, ctx_.intern_symbol(SymbolKind::Sqrt, base_poly(arg, "sqrt")));
      case SymbolKind::Cubic: {
        Poly k = base_poly(run(e.args()[1]), "cubic constant");
        return NormalForm::variable(ctx_, ctx_.intern_symbol(SymbolKind::Cubic, base_poly(arg, "cubic"), k));
      }
      case SymbolKind::WeierW:
        return NormalForm::variable(ctx_, ctx_.intern_symbol(SymbolKind::WeierW, base_poly(arg, "w")));
      case SymbolKind::WeierP:
        return NormalForm::variable(ctx_, ctx_.intern_symbol(SymbolKind::WeierP, base_poly(arg, "wp")));
    }
    return NormalForm(ctx_);
  }

  Context& ctx_;
  std::unordered_map<const ExprNode*, NormalForm> memo_;
  std::vector<Expr> keep_;
};

}  // namespace

NormalForm normalize(const Expr& e, Context& ctx) {
  Normalizer n(ctx);
  return n.run(e);
}

bool is_zero(const Expr& e, Context& ctx) { return normalize(e, ctx).is_zero(); }

void intern_symbols(const Expr& e, Context& ctx) {
  std::set<const ExprNode*> seen;
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    Expr x = stack.back();
    stack.pop_back();
    if (!seen.insert(x.node()).second) continue;
    if (x.op() == ExprOp::Sym) {
      normalize(x, ctx);
    } else {
      for (const auto& a : x.args()) stack.push_back(a);
    }
  }
}

namespace {

Expr poly_to_expr(const Poly& p, const Context& ctx);

Expr var_to_expr(int id, const Context& ctx) {
  const SymbolDef* d = ctx.symbol(id);
  if (!d) return Expr::var(id);
  Expr arg = poly_to_expr(d->arg, ctx);
  switch (d->kind) {
    case SymbolKind::Exp: return exp_of(arg);
    case SymbolKind::Ln: return ln_of(arg);
    case SymbolKind::Sqrt: return sqrt_of(arg);
    case SymbolKind::Cubic: return cubic_of(arg, poly_to_expr(d->constant, ctx));
    case SymbolKind::WeierW: return omega_of(arg);
    case SymbolKind::WeierP: return omega_prime_of(arg);
  }
  return Expr::var(id);
}

Expr poly_to_expr(const Poly& p, const Context& ctx) {
  std::vector<Expr> terms;
  for (const auto& t : p.terms()) {
    std::vector<Expr> fs{Expr::constant(t.coef)};
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (t.mono.exp[i]) fs.push_back(Expr::pow(var_to_expr(static_cast<int>(i), ctx), t.mono.exp[i]));
    }
    terms.push_back(Expr::mul(std::move(fs)));
  }
  return Expr::add(std::move(terms));
}

}  // namespace

Expr to_expr(const NormalForm& nf) {
  const Context& ctx = nf.context();
  Expr num = poly_to_expr(nf.num(), ctx);
  std::vector<Expr> fs{num};
  for (const auto& f : nf.den()) fs.push_back(Expr::pow(poly_to_expr(ctx.atom(f.atom), ctx), -f.exp));
  return Expr::mul(std::move(fs));
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

bool contains(const Expr& e, const Expr& target) {
  if (target.op() == ExprOp::Var && !((e.free_vars() >> target.var_id()) & 1u)) return false;
  if (structurally_equal(e, target)) return true;
  for (const auto& a : e.args()) {
    if (contains(a, target)) return true;
  }
  return false;
}

class Substituter {
 public:
  explicit Substituter(const std::vector<Binding>& b) : b_(b) {}
  Expr run(const Expr& e) {
    for (const auto& b : b_) {
      if (structurally_equal(e, b.target)) return b.value;
    }
    if (e.args().empty()) return e;
    if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second.second;
    std::vector<Expr> args;
    bool changed = false;
    for (const auto& a : e.args()) {
      args.push_back(run(a));
      changed |= args.back().node() != a.node();
    }
    Expr r = e;
    if (changed) {
      switch (e.op()) {
        case ExprOp::Add: r = Expr::add(std::move(args)); break;
        case ExprOp::Mul: r = Expr::mul(std::move(args)); break;
        case ExprOp::Pow: r = Expr::pow(args[0], e.exponent()); break;
        case ExprOp::Sym: r = Expr::symbol(e.symbol_kind(), std::move(args)); break;
        default: break;
      }
    }
    memo_.emplace(e.node(), std::make_pair(e, r));
    return r;
  }

 private:
  const std::vector<Binding>& b_;
  std::unordered_map<const ExprNode*, std::pair<Expr, Expr>> memo_;
};

}  // namespace

Expr substitute(const Expr& e, const std::vector<Binding>& bindings) {
  const std::size_t n = bindings.size();
  for (const auto& b : bindings) {
    if (b.target.op() != ExprOp::Var && b.target.op() != ExprOp::Sym) {
      throw std::invalid_argument("substitution targets must be variables or symbols");
    }
  }
  // Cycle detection over "value of i mentions target of j", ignoring self-loops.
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && contains(bindings[i].value, bindings[j].target)) adj[i].push_back(j);
    }
  }
  std::vector<int> state(n, 0);
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    state[i] = 1;
    for (std::size_t j : adj[i]) {
      if (state[j] == 1) throw CyclicBindingError("cyclic substitution bindings");
      if (state[j] == 0) visit(j);
    }
    state[i] = 2;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (state[i] == 0) visit(i);
  }
  Substituter s(bindings);
  return s.run(e);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Prec { kSum = 1, kProd = 2, kUnary = 3, kPow = 4, kAtom = 5 };

std::string print(const Expr& e, const Context& ctx, int& prec);

std::string wrap(const Expr& e, const Context& ctx, int min_prec) {
  int p;
  std::string s = print(e, ctx, p);
  return p < min_prec ? "(" + s + ")" : s;
}

bool is_a_cubed(const Expr& k, const Context& ctx) {
  return k.op() == ExprOp::Pow && k.exponent() == 3 && k.args()[0].op() == ExprOp::Var &&
         k.args()[0].var_id() == ctx.id("a");
}

std::string print(const Expr& e, const Context& ctx, int& prec) {
  prec = kAtom;
  switch (e.op()) {
    case ExprOp::Const: {
      const Rational& v = e.value();
      if (v < 0) prec = kUnary;
      else if (v.get_den() != 1) prec = kProd;
      return v.get_str();
    }
    case ExprOp::Var: return ctx.name(e.var_id());
    case ExprOp::Sym: {
      std::string a;
      int p;
      a = print(e.args()[0], ctx, p);
      switch (e.symbol_kind()) {
        case SymbolKind::Exp: return "exp(" + a + ")";
        case SymbolKind::Ln: return "ln(" + a + ")";
        case SymbolKind::Sqrt: return "sqrt(" + a + ")";
        case SymbolKind::Cubic: {
          const Expr& k = e.args()[1];
          if (k.is_one()) return "f(" + a + ")";
          if (is_a_cubed(k, ctx)) return "fa(" + a + ")";
          return "cubic(" + a + ", " + print(k, ctx, p) + ")";
        }
        case SymbolKind::WeierW: return "w(" + a + ")";
        case SymbolKind::WeierP: return "wp(" + a + ")";
      }
      return a;
    }
    case ExprOp::Pow: {
      prec = kPow;
      std::string b = wrap(e.args()[0], ctx, kAtom);
      int n = e.exponent();
      return b + "^" + (n < 0 ? "(" + std::to_string(n) + ")" : std::to_string(n));
    }
    case ExprOp::Mul: {
      prec = kProd;
      std::vector<std::string> num, den;
      bool neg = false;
      for (const auto& f : e.args()) {
        if (f.is_const()) {
          Rational v = f.value();
          if (v < 0) {
            neg = true;
            v = -v;
          }
          if (v.get_num() != 1) num.push_back(v.get_num().get_str());
          if (v.get_den() != 1) den.push_back(v.get_den().get_str());
        } else if (f.op() == ExprOp::Pow && f.exponent() < 0) {
          Expr inv = Expr::pow(f.args()[0], -f.exponent());
          den.push_back(wrap(inv, ctx, kPow));
        } else {
          num.push_back(wrap(f, ctx, kProd + 1));
        }
      }
      std::string s;
      if (num.empty()) num.push_back("1");
      for (std::size_t i = 0; i < num.size(); ++i) s += (i ? "*" : "") + num[i];
      if (!den.empty()) {
        std::string d;
        for (std::size_t i = 0; i < den.size(); ++i) d += (i ? "*" : "") + den[i];
        s += "/" + (den.size() > 1 ? "(" + d + ")" : d);
      }
      if (neg) {
        prec = kUnary;
        s = "-" + s;
      }
      return s;
    }
    case ExprOp::Add: {
      prec = kSum;
      std::string s;
      bool first = true;
      for (const auto& t : e.args()) {
        int p;
        std::string ts = print(t, ctx, p);
        if (!first) {
          if (!ts.empty() && ts[0] == '-') {
            s += " - " + ts.substr(1);
          } else {
            s += " + " + ts;
          }
        } else {
          s += ts;
        }
        first = false;
      }
      return s;
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const Expr& e, const Context& ctx) {
  int p;
  return print(e, ctx, p);
}

}  // namespace hypsym
