#include "hypsym/normal_form.hpp"

#include <algorithm>
#include <sstream>

namespace hypsym {

namespace {

Poly atom_power(const Context& ctx, int atom, int e) {
  int v = ctx.atom_var(atom);
  if (v >= 0) return Poly::var(v, e);
  return ctx.atom(atom).pow(static_cast<unsigned>(e));
}

std::vector<DenFactor> lcd(const std::vector<DenFactor>& a, const std::vector<DenFactor>& b) {
  std::vector<DenFactor> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].atom < b[j].atom)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].atom < a[i].atom) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].atom, std::max(a[i].exp, b[j].exp)});
      ++i;
      ++j;
    }
  }
  return out;
}

/// Product of atom^(target - have) over `target`.
Poly cofactor(const Context& ctx, const std::vector<DenFactor>& target, const std::vector<DenFactor>& have) {
  Poly r(1);
  std::size_t j = 0;
  for (const auto& t : target) {
    while (j < have.size() && have[j].atom < t.atom) ++j;
    int h = (j < have.size() && have[j].atom == t.atom) ? have[j].exp : 0;
    if (t.exp > h) r = r * atom_power(ctx, t.atom, t.exp - h);
  }
  return r;
}

std::vector<DenFactor> den_product(const std::vector<DenFactor>& a, const std::vector<DenFactor>& b) {
  std::vector<DenFactor> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].atom < b[j].atom)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].atom < a[i].atom) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].atom, a[i].exp + b[j].exp});
      ++i;
      ++j;
    }
  }
  return out;
}

using UPoly = std::vector<NormalForm>;

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UPoly upoly_sub(const UPoly& a, const UPoly& b, Context& ctx) {
  UPoly r(std::max(a.size(), b.size()), NormalForm(ctx));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] - b[i];
  trim(r);
  return r;
}

UPoly upoly_mul(const UPoly& a, const UPoly& b, Context& ctx) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, NormalForm(ctx));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  }
  trim(r);
  return r;
}

void upoly_divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r, Context& ctx) {
  r = a;
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, NormalForm(ctx));
  const NormalForm lc_inv = b.back().inverse();
  while (!r.empty() && r.size() >= b.size()) {
    std::size_t shift = r.size() - b.size();
    NormalForm c = r.back() * lc_inv;
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = r[shift + i] - c * b[i];
    r.back() = NormalForm(ctx);
    trim(r);
  }
  trim(q);
}

/// Inverse of an element whose numerator involves algebraic symbols, by the
/// extended Euclidean algorithm against the relation of its highest symbol.
NormalForm algebraic_inverse(const NormalForm& y) {
  Context& ctx = y.context();
  VarMask alg = y.num().mask() & ctx.algebraic_mask();
  int s = 63;
  while (!((alg >> s) & 1u)) --s;
  const SymbolDef& def = *ctx.symbol(s);

  const NormalForm den_inv = NormalForm(ctx, 1) / NormalForm::from_poly(ctx, y.den_poly());
  UPoly b;
  for (const auto& c : y.num().coefficients_in(s)) b.push_back(NormalForm::from_poly(ctx, c) * den_inv);
  trim(b);
  UPoly a;
  for (const auto& c : def.relation.coefficients_in(s)) a.push_back(NormalForm::from_poly(ctx, c));

  UPoly r0 = a, r1 = b;
  UPoly t0, t1{NormalForm(ctx, 1)};
  while (r1.size() > 1) {
    UPoly q, r;
    upoly_divmod(r0, r1, q, r, ctx);
    if (r.empty()) throw ContextError("element is a zero divisor: relation of " + ctx.name(s) + " is reducible");
    UPoly t = upoly_sub(t0, upoly_mul(q, t1, ctx), ctx);
    r0 = std::move(r1);
    r1 = std::move(r);
    t0 = std::move(t1);
    t1 = std::move(t);
  }
  if (r1.empty()) throw DivisionByZero("division by zero");
  const NormalForm scale = r1[0].inverse();
  NormalForm result(ctx);
  for (std::size_t i = 0; i < t1.size(); ++i) {
    result = result + t1[i] * scale * NormalForm::from_poly(ctx, Poly::var(s, static_cast<int>(i)));
  }
  return result;
}

}  // namespace

NormalForm::NormalForm(Context* ctx, Poly num, std::vector<DenFactor> den)
    : ctx_(ctx), num_(std::move(num)), den_(std::move(den)) {}

NormalForm NormalForm::from_poly(Context& ctx, const Poly& p) { return NormalForm(&ctx, ctx.reduce(p), {}); }

NormalForm NormalForm::variable(Context& ctx, int id) { return from_poly(ctx, Poly::var(id)); }

NormalForm NormalForm::fraction(Context& ctx, const Poly& num, const Poly& den) {
  return from_poly(ctx, num) / from_poly(ctx, den);
}

Poly NormalForm::den_poly() const {
  Poly r(1);
  for (const auto& f : den_) r = r * atom_power(*ctx_, f.atom, f.exp);
  return r;
}

VarMask NormalForm::mask() const {
  VarMask m = num_.mask();
  for (const auto& f : den_) m |= ctx_->atom(f.atom).mask();
  return m;
}

void NormalForm::cancel() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& f : den_) {
    int v = ctx_->atom_var(f.atom);
    if (v >= 0) {
      int k = std::min(f.exp, num_.min_degree_in(v));
      if (k > 0) {
        num_ = num_.shift_down(v, k);
        f.exp -= k;
      }
      continue;
    }
    const Poly& a = ctx_->atom(f.atom);
    if ((a.mask() & ~num_.mask()) != 0) continue;
    Poly q;
    while (f.exp > 0 && a.divides_into(num_, q)) {
      num_ = std::move(q);
      --f.exp;
    }
  }
  std::erase_if(den_, [](const DenFactor& f) { return f.exp == 0; });
}

NormalForm NormalForm::operator-() const { return NormalForm(ctx_, -num_, den_); }

NormalForm operator+(const NormalForm& a, const NormalForm& b) {
  if (a.num_.is_zero()) return b.ctx_ ? b : a;
  if (b.num_.is_zero()) return a;
  Context& ctx = *a.ctx_;
  if (a.den_ == b.den_) {
    NormalForm r(&ctx, a.num_ + b.num_, a.den_);
    if (!r.den_.empty()) r.cancel();
    return r;
  }
  auto l = lcd(a.den_, b.den_);
  Poly n = a.num_ * cofactor(ctx, l, a.den_) + b.num_ * cofactor(ctx, l, b.den_);
  NormalForm r(&ctx, std::move(n), std::move(l));
  r.cancel();
  return r;
}

NormalForm operator-(const NormalForm& a, const NormalForm& b) { return a + (-b); }

NormalForm operator*(const NormalForm& a, const NormalForm& b) {
  Context* ctx = a.ctx_ ? a.ctx_ : b.ctx_;
  if (a.num_.is_zero() || b.num_.is_zero()) return NormalForm(*ctx);
  Poly n = a.num_ * b.num_;
  if (n.mask() & ctx->algebraic_mask()) n = ctx->reduce(n);
  NormalForm r(ctx, std::move(n), den_product(a.den_, b.den_));
  if (!a.den_.empty() || !b.den_.empty()) r.cancel();
  return r;
}

NormalForm operator/(const NormalForm& a, const NormalForm& b) { return a * b.inverse(); }

NormalForm NormalForm::scaled(const Rational& c) const {
  NormalForm r = *this;
  r.num_ *= c;
  if (r.num_.is_zero()) r.den_.clear();
  return r;
}

NormalForm NormalForm::times_poly(const Poly& p) const { return *this * from_poly(*ctx_, p); }

NormalForm NormalForm::inverse() const {
  if (num_.is_zero()) throw DivisionByZero("division by an expression that normalizes to zero");
  Context& ctx = *ctx_;
  if (!(num_.mask() & ctx.algebraic_mask())) {
    auto [c, fs] = factor_atoms(ctx, num_);
    NormalForm r(&ctx, den_poly() * (Rational(1) / c), std::move(fs));
    r.cancel();
    return r;
  }
  NormalForm inv = algebraic_inverse(NormalForm(&ctx, num_, {}));
  return inv.times_poly(den_poly());
}

NormalForm NormalForm::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  NormalForm result(*ctx_, 1);
  NormalForm base = *this;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

NormalForm NormalForm::derive(const std::function<NormalForm(int)>& dvar) const {
  Context& ctx = *ctx_;
  if (num_.is_zero()) return NormalForm(ctx);
  auto poly_derivation = [&](const Poly& p) {
    NormalForm acc(ctx);
    VarMask m = p.mask();
    for (int v = 0; m; ++v, m >>= 1) {
      if (!(m & 1u)) continue;
      NormalForm dv = dvar(v);
      if (dv.is_zero()) continue;
      acc = acc + from_poly(ctx, p.partial(v)) * dv;
    }
    return acc;
  };
  NormalForm top = poly_derivation(num_);
  if (den_.empty()) return top;
  NormalForm log_den(ctx);
  for (const auto& f : den_) {
    NormalForm da = poly_derivation(ctx.atom(f.atom));
    if (da.is_zero()) continue;
    NormalForm inv_atom(&ctx, Poly(1), {{f.atom, 1}});
    log_den = log_den + (da * inv_atom).scaled(f.exp);
  }
  NormalForm inv_den(&ctx, Poly(1), den_);
  return top * inv_den - *this * log_den;
}

NormalForm NormalForm::partial(int var) const {
  Context& ctx = *ctx_;
  return derive([&](int v) -> NormalForm {
    if (v == var) return NormalForm(ctx, 1);
    if (ctx.is_symbol(v)) return symbol_partial(ctx, v, var);
    return NormalForm(ctx);
  });
}

std::string NormalForm::str() const {
  if (!ctx_ || num_.is_zero()) return "0";
  std::string n = ctx_->poly_str(num_);
  if (den_.empty()) return n;
  std::vector<std::pair<const Poly*, int>> fs;
  for (const auto& f : den_) fs.emplace_back(&ctx_->atom(f.atom), f.exp);
  std::sort(fs.begin(), fs.end(), [](const auto& x, const auto& y) { return compare(*x.first, *y.first) > 0; });
  std::ostringstream os;
  os << "(" << n << ")/(";
  bool first = true;
  for (const auto& [p, e] : fs) {
    if (!first) os << "*";
    first = false;
    bool bare = p->size() == 1;
    if (!bare) os << "(";
    os << ctx_->poly_str(*p);
    if (!bare) os << ")";
    if (e > 1) os << "^" << e;
  }
  os << ")";
  return os.str();
}

std::pair<Rational, std::vector<DenFactor>> factor_atoms(Context& ctx, const Poly& p) {
  if (p.is_zero()) throw DivisionByZero("division by zero");
  auto [c, prim] = p.content_primitive();
  std::vector<DenFactor> fs;
  VarMask m = prim.mask();
  for (int v = 0; m; ++v, m >>= 1) {
    if (!(m & 1u)) continue;
    int k = prim.min_degree_in(v);
    if (k > 0) {
      prim = prim.shift_down(v, k);
      fs.push_back({ctx.intern_atom(Poly::var(v)), k});
    }
  }
  if (!prim.is_constant()) {
    for (int a = 0; a < ctx.atom_count(); ++a) {
      if (ctx.atom_var(a) >= 0) continue;
      const Poly& ap = ctx.atom(a);
      if ((ap.mask() & ~prim.mask()) != 0) continue;
      int count = 0;
      Poly q;
      while (!prim.is_constant() && ap.divides_into(prim, q)) {
        prim = std::move(q);
        ++count;
      }
      if (count) fs.push_back({a, count});
    }
    if (!prim.is_constant()) fs.push_back({ctx.intern_atom(prim), 1});
  }
  if (prim.is_constant()) c *= prim.constant_value();
  std::sort(fs.begin(), fs.end(), [](const DenFactor& x, const DenFactor& y) { return x.atom < y.atom; });
  std::vector<DenFactor> merged;
  for (const auto& f : fs) {
    if (!merged.empty() && merged.back().atom == f.atom) {
      merged.back().exp += f.exp;
    } else {
      merged.push_back(f);
    }
  }
  return {c, merged};
}

const NormalForm& symbol_partial(Context& ctx, int sym, int var) {
  auto& cache = ctx.partial_cache();
  auto key = std::make_pair(sym, var);
  if (auto it = cache.find(key); it != cache.end()) return *it->second;

  const SymbolDef& d = *ctx.symbol(sym);
  const NormalForm s = NormalForm::variable(ctx, sym);
  const NormalForm arg = NormalForm::from_poly(ctx, d.arg);
  const NormalForm darg = NormalForm::from_poly(ctx, d.arg.partial(var));
  NormalForm result(ctx);
  switch (d.kind) {
    case SymbolKind::Exp: result = s * darg; break;
    case SymbolKind::Ln:
      if (!darg.is_zero()) result = darg / arg;
      break;
    case SymbolKind::Sqrt:
      if (!darg.is_zero()) result = darg / s.scaled(2);
      break;
    case SymbolKind::Cubic: {
      const NormalForm dk = NormalForm::from_poly(ctx, d.constant.partial(var));
      if (!darg.is_zero()) result = (arg - s) / s.scaled(2) * darg;
      if (!dk.is_zero()) result = result - dk / (s * (s + arg)).scaled(6);
      break;
    }
    case SymbolKind::WeierW: result = NormalForm::variable(ctx, d.partner) * darg; break;
    case SymbolKind::WeierP: {
      const NormalForm w = NormalForm::variable(ctx, d.partner);
      result = (w * w).scaled(6) * darg;
      if (var == ctx.id("c")) result = result + s.scaled(2).inverse();
      break;
    }
  }
  auto [it, _] = cache.emplace(key, std::make_unique<NormalForm>(result));
  return *it->second;
}

NormalForm coefficient_of(const NormalForm& e, int var, int k) {
  Context& ctx = e.context();
  for (const auto& f : e.den()) {
    if ((ctx.atom(f.atom).mask() >> var) & 1u) {
      throw NotPolynomialError("variable " + ctx.name(var) + " occurs in a denominator");
    }
  }
  VarMask syms = e.num().mask();
  for (int s = 0; syms; ++s, syms >>= 1) {
    if (!(syms & 1u) || !ctx.is_symbol(s)) continue;
    const SymbolDef& d = *ctx.symbol(s);
    if (((d.arg.mask() | d.constant.mask()) >> var) & 1u) {
      throw NotPolynomialError("variable " + ctx.name(var) + " occurs inside " + ctx.name(s));
    }
  }
  if (ctx.is_symbol(var)) throw NotPolynomialError("coefficient extraction is only defined for base variables");
  auto cs = e.num().coefficients_in(var);
  if (k < 0 || k >= static_cast<int>(cs.size())) return NormalForm(ctx);
  NormalForm num = NormalForm::from_poly(ctx, cs[static_cast<std::size_t>(k)]);
  return num / NormalForm::from_poly(ctx, e.den_poly());
}

}  // namespace hypsym
