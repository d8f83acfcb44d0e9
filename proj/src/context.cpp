#include "hypsym/context.hpp"

#include <sstream>

#include "hypsym/normal_form.hpp"

namespace hypsym {

namespace {

const char* const kYNames[] = {"uy", "uyy", "uyyy", "v4", "v5", "v6"};
const char* const kAux[] = {"V", "s", "expv", "vv", "vx", "vy", "gk"};
const char* const kParams[] = {"C2", "a", "b", "c", "k1", "k2", "lambda1", "lambda2", "mu", "mu1", "mu2", "sgn"};

std::string coef_str(const Rational& c) { return c.get_str(); }

}  // namespace

Context::Context() {
  push_var("u", VarKind::JetX);
  for (int k = 1; k <= kMaxXJet; ++k) push_var("u" + std::to_string(k), VarKind::JetX);
  for (const char* n : kYNames) push_var(n, VarKind::JetY);
  for (const char* n : kAux) push_var(n, VarKind::Aux);
  for (const char* n : kParams) push_var(n, VarKind::Parameter);
  if (id("c") != kParamC) throw ContextError("standard variable layout changed");
}

Context::~Context() = default;

int Context::push_var(std::string name, VarKind kind) {
  if (names_.size() >= kMaxVars) throw ContextError("too many variables (limit " + std::to_string(kMaxVars) + ")");
  if (by_name_.count(name)) throw ContextError("duplicate variable name: " + name);
  int id = static_cast<int>(names_.size());
  by_name_.emplace(name, id);
  names_.push_back(std::move(name));
  kinds_.push_back(kind);
  symbol_defs_.emplace_back();
  if (kind == VarKind::Parameter) parameter_mask_ |= VarMask{1} << id;
  if (kind == VarKind::Algebraic) algebraic_mask_ |= VarMask{1} << id;
  return id;
}

std::optional<int> Context::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

int Context::id(std::string_view name) const {
  auto r = find(name);
  if (!r) throw ContextError("unknown identifier: " + std::string(name));
  return *r;
}

int Context::add_parameter(const std::string& name) {
  if (auto existing = find(name)) {
    if (kind(*existing) != VarKind::Parameter) throw ContextError("name already used for a non-parameter: " + name);
    return *existing;
  }
  return push_var(name, VarKind::Parameter);
}

int Context::add_aux(const std::string& name) {
  if (auto existing = find(name)) {
    if (kind(*existing) != VarKind::Aux) throw ContextError("name already used: " + name);
    return *existing;
  }
  return push_var(name, VarKind::Aux);
}

VarMask Context::jet_mask() const {
  VarMask m = 0;
  for (int i = 0; i <= kMaxXJet + kMaxYJet; ++i) m |= VarMask{1} << i;
  return m;
}

const SymbolDef* Context::symbol(int id) const {
  if (id < 0 || id >= size()) return nullptr;
  const auto& d = symbol_defs_[static_cast<std::size_t>(id)];
  return d ? &*d : nullptr;
}

int Context::intern_symbol(SymbolKind kind, const Poly& arg, const Poly& constant) {
  if (arg.mask() & algebraic_mask_) throw ContextError("symbol arguments may not contain algebraic symbols");
  if (constant.mask() & algebraic_mask_) throw ContextError("symbol constants may not contain algebraic symbols");
  for (int sid : symbol_ids_) {
    const SymbolDef& d = *symbol_defs_[static_cast<std::size_t>(sid)];
    if (d.kind == kind && d.arg == arg && d.constant == constant) return sid;
  }
  if ((kind == SymbolKind::Sqrt || kind == SymbolKind::Cubic || kind == SymbolKind::Ln) && arg.is_constant()) {
    throw ContextError("special functions of constant arguments are not supported");
  }
  const std::string a = poly_str(arg);
  std::string name;
  VarKind vk = VarKind::Transcendental;
  switch (kind) {
    case SymbolKind::Exp: name = "exp(" + a + ")"; break;
    case SymbolKind::Ln: name = "ln(" + a + ")"; break;
    case SymbolKind::Sqrt:
      name = "sqrt(" + a + ")";
      vk = VarKind::Algebraic;
      break;
    case SymbolKind::Cubic: {
      const Poly a3 = Poly::var(id("a"), 3);
      if (constant == Poly(1)) {
        name = "f(" + a + ")";
      } else if (constant == a3) {
        name = "fa(" + a + ")";
      } else {
        name = "cubic(" + a + ", " + poly_str(constant) + ")";
      }
      vk = VarKind::Algebraic;
      break;
    }
    case SymbolKind::WeierW: name = "w(" + a + ")"; break;
    case SymbolKind::WeierP:
      name = "wp(" + a + ")";
      vk = VarKind::Algebraic;
      break;
  }
  if (kind == SymbolKind::WeierP) {
    // Register omega first so that omega' can reference it.
    int w = intern_symbol(SymbolKind::WeierW, arg);
    return symbol_defs_[static_cast<std::size_t>(w)]->partner;
  }
  int var = push_var(name, vk);
  SymbolDef def{kind, var, arg, constant, -1, 0, Poly()};
  const Poly s = Poly::var(var);
  switch (kind) {
    case SymbolKind::Sqrt:
      def.degree = 2;
      def.relation = s.pow(2) - arg;
      break;
    case SymbolKind::Cubic:
      def.degree = 3;
      def.relation = s.pow(3) * Rational(2) + s.pow(2) * arg * Rational(3) - arg.pow(3) + constant;
      break;
    default: break;
  }
  symbol_defs_[static_cast<std::size_t>(var)] = std::move(def);
  symbol_ids_.push_back(var);
  if (kind == SymbolKind::WeierW) {
    int p = push_var("wp(" + a + ")", VarKind::Algebraic);
    SymbolDef pd{SymbolKind::WeierP, p, arg, Poly(), var, 2, Poly()};
    const Poly pp = Poly::var(p);
    pd.relation = pp.pow(2) - s.pow(3) * Rational(4) - Poly::var(id("c"));
    symbol_defs_[static_cast<std::size_t>(p)] = std::move(pd);
    symbol_defs_[static_cast<std::size_t>(var)]->partner = p;
    symbol_ids_.push_back(p);
  }
  return var;
}

const Poly& Context::power_reduction(int sym, int e) const {
  const SymbolDef& d = *symbol(sym);
  auto& table = power_red_[sym];
  if (table.empty()) {
    // s^d = -(relation - lc * s^d) / lc with lc the constant leading coefficient.
    std::vector<Poly> cs = d.relation.coefficients_in(sym);
    Rational lc = cs.back().constant_value();
    if (lc == 0 || !cs.back().is_constant()) throw ContextError("relation must have a constant leading coefficient");
    Poly tail;
    for (int k = 0; k < d.degree; ++k) tail -= cs[static_cast<std::size_t>(k)] * Poly::var(sym, k);
    tail *= Rational(1) / lc;
    table.push_back(std::move(tail));  // index 0 <-> exponent d
  }
  while (static_cast<int>(table.size()) <= e - d.degree) {
    Poly next = table.back() * Poly::var(sym);
    std::vector<Term> out;
    for (const auto& t : next.terms()) {
      if (t.mono[sym] >= d.degree) {
        Monomial m = t.mono;
        m.set(sym, t.mono[sym] - d.degree);
        for (const auto& r : table.front().terms()) out.push_back({r.mono * m, r.coef * t.coef});
      } else {
        out.push_back(t);
      }
    }
    table.push_back(Poly::from_terms(std::move(out)));
  }
  return table[static_cast<std::size_t>(e - d.degree)];
}

Poly Context::reduce(const Poly& p) const {
  VarMask alg = p.mask() & algebraic_mask_;
  if (!alg) return p;
  Poly cur = p;
  for (int sym = 0; alg; ++sym, alg >>= 1) {
    if (!(alg & 1u)) continue;
    const SymbolDef& d = *symbol(sym);
    if (cur.degree_in(sym) < d.degree) continue;
    std::vector<Term> out;
    out.reserve(cur.size() * 2);
    for (const auto& t : cur.terms()) {
      int e = t.mono[sym];
      if (e < d.degree) {
        out.push_back(t);
        continue;
      }
      Monomial m = t.mono;
      m.set(sym, 0);
      for (const auto& r : power_reduction(sym, e).terms()) out.push_back({r.mono * m, r.coef * t.coef});
    }
    cur = Poly::from_terms(std::move(out));
  }
  return cur;
}

int Context::intern_atom(const Poly& primitive) {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i] == primitive) return static_cast<int>(i);
  }
  if (primitive.mask() & algebraic_mask_) throw ContextError("denominator atoms may not contain algebraic symbols");
  atoms_.push_back(primitive);
  int v = -1;
  if (primitive.size() == 1 && primitive.leading().mono.degree == 1 && primitive.leading().coef == 1) {
    VarMask m = primitive.mask();
    for (int i = 0; m; ++i, m >>= 1) {
      if (m & 1u) v = i;
    }
  }
  atom_vars_.push_back(v);
  return static_cast<int>(atoms_.size()) - 1;
}

std::string Context::poly_str(const Poly& p) const {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coef;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (t.mono.is_one() || c != 1) {
      os << coef_str(c);
      wrote = true;
    }
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      int e = t.mono.exp[i];
      if (!e) continue;
      if (wrote) os << "*";
      os << names_[i];
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace hypsym
