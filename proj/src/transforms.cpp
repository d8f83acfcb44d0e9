#include "hypsym/transforms.hpp"

#include <sstream>

#include "hypsym/parser.hpp"
#include "hypsym/verify.hpp"

namespace hypsym {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

// "k = expr, k = expr" with expressions parsed in ctx.
std::vector<std::pair<std::string, std::string>> assignments(const std::string& text, char sep) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& part : split_top(text, sep)) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw CatalogError("expected 'name = expression' in '" + part + "'");
    out.emplace_back(trim(part.substr(0, eq)), trim(part.substr(eq + 1)));
  }
  return out;
}

struct Convention {
  std::string name;
  std::string text;
  std::vector<std::pair<std::string, std::string>> bindings;
};

std::vector<Convention> conventions(const std::string& text) {
  std::vector<Convention> out;
  for (const auto& part : split_top(text, ';')) {
    auto colon = part.find(':');
    if (colon == std::string::npos) throw CatalogError("convention needs 'name: bindings' in '" + part + "'");
    Convention c{trim(part.substr(0, colon)), trim(part.substr(colon + 1)), {}};
    c.bindings = assignments(c.text, ',');
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Binding> to_bindings(const std::vector<std::pair<std::string, std::string>>& a, Context& ctx) {
  std::vector<Binding> out;
  for (const auto& [name, text] : a) out.push_back({Expr::var(ctx.id(name)), parse_expr(text, ctx)});
  return out;
}

Expr subst_all(const Expr& e, const std::vector<Binding>& b) { return b.empty() ? e : substitute(e, b); }

std::vector<std::pair<std::string, std::string>> failing_of(const NormalForm& r) {
  std::vector<std::pair<std::string, std::string>> out;
  if (r.is_zero()) return out;
  for (const auto& c : jet_coefficients(r)) out.emplace_back(c.monomial, c.value.str());
  return out;
}

bool truthy(const std::optional<std::string>& s) { return s && (*s == "true" || *s == "yes"); }

// Solves sum_i A[k][i] x_i + b[k] = 0 over the field of normal forms.
std::optional<std::vector<NormalForm>> solve_linear(std::vector<std::vector<NormalForm>> A, std::vector<NormalForm> b,
                                                    std::size_t n) {
  std::size_t row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < n && row < A.size(); ++col) {
    std::size_t p = row;
    while (p < A.size() && A[p][col].is_zero()) ++p;
    if (p == A.size()) continue;
    std::swap(A[p], A[row]);
    std::swap(b[p], b[row]);
    NormalForm inv = A[row][col].inverse();
    for (auto& x : A[row]) x = x * inv;
    b[row] = b[row] * inv;
    for (std::size_t r = 0; r < A.size(); ++r) {
      if (r == row || A[r][col].is_zero()) continue;
      NormalForm f = A[r][col];
      for (std::size_t c = 0; c < n; ++c) A[r][c] = A[r][c] - f * A[row][c];
      b[r] = b[r] - f * b[row];
    }
    pivots.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < A.size(); ++r) {
    if (!b[r].is_zero()) return std::nullopt;
  }
  if (pivots.size() != n) return std::nullopt;
  std::vector<NormalForm> x(n);
  for (std::size_t r = 0; r < n; ++r) x[pivots[r]] = -b[r];
  return x;
}

class Differential {
 public:
  Differential(const Catalog& cat, const CatalogEntry& e, Context& ctx) : cat_(cat), e_(e), ctx_(ctx) {
    for (const auto& p : e.params) ctx.add_parameter(p.name);
    const CatalogEntry& src = cat.entry(e.field("source"));
    Bindings sb = parse_bindings(e.maybe("source_bindings").value_or(""));
    F_ = cat.instantiate(src, src.field("expr"), sb, ctx);
    for (const auto& u : split_top(e.maybe("unknowns").value_or(""), ',')) unknowns_.push_back(ctx.add_parameter(u));
    for (const auto& [name, text] : assignments(e.field("relations"), ';')) {
      int id = ctx.id(name);
      if (ctx.kind(id) != VarKind::Aux) throw CatalogError(e.id + ": relation target must be auxiliary: " + name);
      relations_.emplace_back(id, parse_expr(text, ctx));
    }
    target_ = parse_expr(e.field("target"), ctx);
    for (const auto& t : split_top(e.maybe("identities").value_or(""), ';')) identities_.push_back(parse_expr(t, ctx));
  }

  struct Eval {
    NormalForm residual;
    std::vector<NamedCheck> consistency;
    std::vector<NamedCheck> identities;
  };

  Eval run(const std::vector<Binding>& b) {
    JetEngine J(ctx_, subst_all(F_, b));
    std::map<int, NormalForm> val;
    for (const auto& [id, ex] : relations_) val[id] = normalize(subst_all(ex, b), ctx_);
    const int expv = ctx_.id("expv"), vv = ctx_.id("vv"), vx = ctx_.id("vx"), vy = ctx_.id("vy");
    Eval out;
    auto check = [&](const std::string& name, const NormalForm& r) { out.consistency.push_back(NamedCheck{name, r.is_zero()}); };
    auto has = [&](int id) { return val.count(id) > 0; };
    bool vx_given = has(vx), vy_given = has(vy);
    if (has(vv)) {
      if (!vx_given) val[vx] = J.d_x(val[vv]);
      if (!vy_given) val[vy] = J.d_y(val[vv]);
      if (vx_given) check("D_x(v) = v_x", J.d_x(val[vv]) - val[vx]);
      if (vy_given) check("D_y(v) = v_y", J.d_y(val[vv]) - val[vy]);
    }
    if (has(expv)) {
      const NormalForm& E = val[expv];
      if (!has(vx)) val[vx] = J.d_x(E) / E;
      if (!has(vy)) val[vy] = J.d_y(E) / E;
      if (vx_given || has(vv)) check("D_x(e^v) = v_x e^v", J.d_x(E) - val[vx] * E);
      if (vy_given || has(vv)) check("D_y(e^v) = v_y e^v", J.d_y(E) - val[vy] * E);
    }
    if (!has(vx) || !has(vy)) throw CatalogError(e_.id + ": relations do not determine v_x and v_y");
    NormalForm vxy = J.d_y(val[vx]);
    check("D_x(v_y) = D_y(v_x)", J.d_x(val[vy]) - vxy);
    std::vector<Binding> aux = b;
    for (const auto& [id, nf] : val) aux.push_back({Expr::var(id), to_expr(nf)});
    out.residual = vxy - normalize(subst_all(target_, aux), ctx_);
    for (const auto& idn : identities_) {
      out.identities.push_back(NamedCheck{to_string(idn, ctx_), normalize(subst_all(idn, aux), ctx_).is_zero()});
    }
    return out;
  }

  TransformReport report() {
    TransformReport rep;
    rep.id = e_.id;
    rep.kind = "differential";
    rep.source = e_.field("source");
    rep.investigative = truthy(e_.maybe("investigative"));
    rep.note = e_.maybe("note").value_or("");
    std::vector<Binding> base = to_bindings(assignments(e_.maybe("fit_bindings").value_or(""), ','), ctx_);
    Eval ev = run(base);
    rep.consistency = ev.consistency;
    rep.identities = ev.identities;
    if (!unknowns_.empty()) fit(ev.residual, rep);
    for (const auto& c : conventions(e_.maybe("conventions").value_or("literal: "))) {
      Eval r = run(to_bindings(c.bindings, ctx_));
      ConventionResult cr{c.name, c.text, r.residual.is_zero(), r.residual.term_count(), failing_of(r.residual)};
      rep.conventions.push_back(std::move(cr));
    }
    return rep;
  }

 private:
  void fit(const NormalForm& r, TransformReport& rep) {
    // The residual numerator is affine in the unknowns; split it by the
    // monomials in everything except parameters.
    VarMask unk = 0;
    for (int u : unknowns_) unk |= VarMask{1} << u;
    const VarMask params = ctx_.parameter_mask();
    std::map<Monomial, std::vector<Term>, bool (*)(const Monomial&, const Monomial&)> groups(
        [](const Monomial& a, const Monomial& b) { return mono_compare(a, b) > 0; });
    for (const auto& t : r.num().terms()) {
      Monomial key, rest;
      for (int v = 0; v < static_cast<int>(kMaxVars); ++v) {
        if (!t.mono[v]) continue;
        if ((params >> v) & 1u) {
          rest.set(v, t.mono[v]);
        } else {
          key.set(v, t.mono[v]);
        }
      }
      groups[key].push_back({rest, t.coef});
    }
    std::vector<std::vector<NormalForm>> A;
    std::vector<NormalForm> b;
    for (auto& [key, terms] : groups) {
      Poly p = Poly::from_terms(std::move(terms));
      if (p.total_degree() > 0 && (p.mask() & unk)) {
        for (int u : unknowns_) {
          if (p.degree_in(u) > 1) throw CatalogError(e_.id + ": target is not linear in the unknowns");
        }
      }
      std::vector<NormalForm> row;
      Poly rest = p;
      for (int u : unknowns_) {
        row.push_back(NormalForm::from_poly(ctx_, p.partial(u)));
        rest = rest.substitute(u, Poly());
      }
      A.push_back(std::move(row));
      b.push_back(NormalForm::from_poly(ctx_, rest));
    }
    auto x = solve_linear(std::move(A), std::move(b), unknowns_.size());
    rep.fit_unique = x.has_value();
    if (!x) return;
    for (std::size_t i = 0; i < unknowns_.size(); ++i) {
      rep.fitted.emplace_back(ctx_.name(unknowns_[i]), to_string(to_expr((*x)[i]), ctx_));
    }
  }

  const Catalog& cat_;
  const CatalogEntry& e_;
  Context& ctx_;
  Expr F_;
  std::vector<int> unknowns_;
  std::vector<std::pair<int, Expr>> relations_;
  Expr target_;
  std::vector<Expr> identities_;
};

Expr side(const Catalog& cat, const CatalogEntry& e, const std::string& prefix, Context& ctx) {
  Bindings b = parse_bindings(e.maybe(prefix + "_bindings").value_or(""));
  Expr F = cat.hyperbolic(e.field(prefix), b, ctx).F;
  if (auto subs = e.maybe(prefix + "_substitution")) F = substitute(F, to_bindings(assignments(*subs, ','), ctx));
  if (auto scale = e.maybe(prefix + "_scale")) F = F / parse_expr(*scale, ctx);
  if (truthy(e.maybe(prefix + "_swap"))) F = swap_xy(F);
  return F;
}

TransformReport equivalence(const Catalog& cat, const CatalogEntry& e, Context& ctx) {
  TransformReport rep;
  rep.id = e.id;
  rep.kind = "equivalence";
  rep.source = e.field("lhs");
  rep.investigative = truthy(e.maybe("investigative"));
  rep.note = e.maybe("note").value_or("");
  for (const auto& p : e.params) ctx.add_parameter(p.name);
  NormalForm r = normalize(side(cat, e, "lhs", ctx) - side(cat, e, "rhs", ctx), ctx);
  rep.conventions.push_back({"identity", "", r.is_zero(), r.term_count(), failing_of(r)});
  return rep;
}

}  // namespace

int TransformReport::zero_conventions() const {
  int n = 0;
  for (const auto& c : conventions) n += c.zero;
  return n;
}

bool TransformReport::passed() const {
  if (investigative) return true;
  for (const auto& i : identities) {
    if (!i.zero) return false;
  }
  return zero_conventions() >= 1;
}

NormalForm check_parametrization(Context& ctx) {
  Expr rel = parse_expr("(f(u1) + u1)^2*(2*f(u1) - u1) + 1", ctx);
  Expr u1 = Expr::var(Context::ux(1));
  return normalize(substitute(rel, {{f_of(u1), parse_expr("(V - V^(-2))/3", ctx)},
                                    {u1, parse_expr("(2*V + V^(-2))/3", ctx)}}),
                   ctx);
}

NormalForm check_scaling_law(Context& ctx) {
  ctx.add_aux("phi");
  Expr lhs = parse_expr("(a*phi + a*s)^2*(2*a*phi - a*s) + a^3", ctx);
  Expr rhs = parse_expr("a^3*((phi + s)^2*(2*phi - s) + 1)", ctx);
  return normalize(lhs - rhs, ctx);
}

TransformReport check_transform(const Catalog& cat, const std::string& id, Context& ctx) {
  const CatalogEntry& e = cat.entry(id);
  if (e.role != Role::Transform) throw CatalogError(id + " is not a transform");
  const std::string& kind = e.field("kind");
  if (kind == "differential") {
    Differential d(cat, e, ctx);
    return d.report();
  }
  if (kind == "equivalence") return equivalence(cat, e, ctx);
  throw CatalogError(id + ": unknown transform kind '" + kind + "'");
}

}  // namespace hypsym
