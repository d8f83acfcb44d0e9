#include "hypsym/verify.hpp"

#include <algorithm>
#include <set>

#include "hypsym/numeval.hpp"

namespace hypsym {

namespace {

Expr oriented_F(const HyperbolicEq& F, const EvolutionEq& G) {
  return G.direction == Direction::Y ? swap_xy(F.F) : F.F;
}

VarMask higher_jets() {
  VarMask m = 0;
  for (int k = 2; k <= Context::kMaxXJet; ++k) m |= VarMask{1} << Context::ux(k);
  for (int k = 2; k <= Context::kMaxYJet; ++k) m |= VarMask{1} << Context::vy(k);
  return m;
}

std::string monomial_str(const Monomial& m, const Context& ctx) {
  if (m.is_one()) return "1";
  return ctx.poly_str(Poly::term(m, Rational(1)));
}

}  // namespace

NormalForm determining_residual(const HyperbolicEq& F, const EvolutionEq& G, Context& ctx) {
  Expr f = oriented_F(F, G);
  JetEngine J(ctx, f);
  const NormalForm& Fn = J.F();
  NormalForm H = NormalForm::variable(ctx, Context::ux(5)) + normalize(G.G, ctx);
  return J.d_x(J.d_y(H)) - Fn.partial(Context::ux(1)) * J.d_x(H) - Fn.partial(Context::vy(1)) * J.d_y(H) -
         Fn.partial(Context::ux(0)) * H;
}

Expr determining_residual_expr(const HyperbolicEq& F, const EvolutionEq& G, Context& ctx) {
  Expr f = oriented_F(F, G);
  ExprJet J(ctx, f);
  Expr H = Expr::var(Context::ux(5)) + G.G;
  return J.d_x(J.d_y(H)) - diff(f, Context::ux(1), ctx) * J.d_x(H) - diff(f, Context::vy(1), ctx) * J.d_y(H) -
         diff(f, Context::ux(0), ctx) * H;
}

std::vector<JetCoefficient> jet_coefficients(const NormalForm& r) {
  Context& ctx = r.context();
  const VarMask jets = higher_jets();
  std::map<Monomial, std::vector<Term>, bool (*)(const Monomial&, const Monomial&)> groups(
      [](const Monomial& a, const Monomial& b) { return mono_compare(a, b) > 0; });
  for (const auto& t : r.num().terms()) {
    Monomial key, rest = t.mono;
    for (int v = 0; v < static_cast<int>(kMaxVars); ++v) {
      if (((jets >> v) & 1u) && t.mono[v]) {
        key.set(v, t.mono[v]);
        rest.set(v, 0);
      }
    }
    groups[key].push_back({rest, t.coef});
  }
  NormalForm inv_den = NormalForm(ctx, 1) / NormalForm::from_poly(ctx, r.den_poly());
  std::vector<JetCoefficient> out;
  for (auto& [key, terms] : groups) {
    out.push_back({monomial_str(key, ctx), NormalForm::from_poly(ctx, Poly::from_terms(std::move(terms))) * inv_den});
  }
  return out;
}

VerificationReport verify_pair(const HyperbolicEq& F, const EvolutionEq& G, Context& ctx, int samples,
                               std::uint64_t seed, double tol) {
  VerificationReport rep;
  rep.hyperbolic = F.id;
  rep.evolution = G.id;
  rep.direction = G.direction;
  rep.samples = samples;
  rep.seed = seed;
  rep.tolerance = tol;
  NormalForm r = determining_residual(F, G, ctx);
  rep.residual_is_zero = r.is_zero();
  rep.residual_term_count = r.term_count();
  if (!rep.residual_is_zero) {
    for (const auto& c : jet_coefficients(r)) rep.failing_coefficients.emplace_back(c.monomial, c.value.str());
  }
  if (samples > 0) {
    Expr re = determining_residual_expr(F, G, ctx);
    NumericVerdict v = numeric_zero(re, ctx, samples, tol, seed);
    rep.numeric_max_residual = v.max_relative;
    rep.numeric_nonzero_points = v.nonzero_points;
    // A symbolic zero must be numerically zero everywhere; a symbolic nonzero
    // should show up at most points.
    rep.numeric_agrees = rep.residual_is_zero ? v.zero_like : v.nonzero_points * 10 >= samples * 9;
  }
  return rep;
}

std::pair<Bindings, Bindings> split_bindings(const CatalogEntry& hyp, const CatalogEntry& ev, const Bindings& b) {
  auto declares = [](const CatalogEntry& e, const std::string& name) {
    for (const auto& p : e.params) {
      if (p.name == name) return true;
    }
    return false;
  };
  Bindings bh, be;
  for (const auto& [name, value] : b) {
    bool h = declares(hyp, name), e = declares(ev, name);
    if (!h && !e) throw CatalogError("neither " + hyp.id + " nor " + ev.id + " has a parameter named '" + name + "'");
    if (h) bh[name] = value;
    if (e) be[name] = value;
  }
  return {bh, be};
}

VerificationReport verify_ids(const Catalog& cat, const std::string& hyp, const std::string& ev, Direction dir,
                              const Bindings& b, const PairingOptions& opt) {
  Context ctx;
  auto [bh, be] = split_bindings(cat.entry(hyp), cat.entry(ev), b);
  HyperbolicEq F = cat.hyperbolic(hyp, bh, ctx);
  EvolutionEq G = cat.evolution(ev, be, ctx);
  G.direction = dir;
  VerificationReport rep = verify_pair(F, G, ctx, opt.samples, opt.seed, opt.tolerance);
  rep.bindings = b;
  return rep;
}

VerificationReport verify_pairing(const Catalog& cat, const CatalogEntry& pairing, const PairingOptions& opt) {
  if (pairing.role != Role::Pairing) throw CatalogError(pairing.id + " is not a pairing");
  const std::string& hyp = pairing.field("hyperbolic");
  const std::string& ev = pairing.field("evolution");
  Direction dir = pairing.field("direction") == "y" ? Direction::Y : Direction::X;
  Bindings b = parse_bindings(pairing.maybe("bindings").value_or(""));
  VerificationReport rep;
  if (ev == "resolve") {
    std::vector<std::string> zero;
    std::optional<VerificationReport> first, fallback;
    std::string list = pairing.field("candidates");
    std::size_t pos = 0;
    while (pos < list.size()) {
      std::size_t comma = list.find(',', pos);
      std::string id = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      id.erase(0, id.find_first_not_of(' '));
      id.erase(id.find_last_not_of(' ') + 1);
      pos = comma == std::string::npos ? list.size() : comma + 1;
      PairingOptions symbolic = opt;
      symbolic.samples = 0;
      VerificationReport r = verify_ids(cat, hyp, id, dir, b, symbolic);
      if (r.residual_is_zero) {
        zero.push_back(id);
        if (!first) first = r;
      } else if (!fallback) {
        fallback = r;
      }
    }
    if (first) {
      rep = verify_ids(cat, hyp, first->evolution, dir, b, opt);
      std::string joined;
      for (const auto& z : zero) joined += (joined.empty() ? "" : ", ") + z;
      rep.note = "resolved; vanishing candidates: " + joined;
    } else {
      rep = fallback ? *fallback : VerificationReport{};
      rep.note = "no candidate vanishes";
    }
  } else {
    rep = verify_ids(cat, hyp, ev, dir, b, opt);
  }
  rep.pairing = pairing.id;
  rep.expect = pairing.maybe("expect").value_or("zero");
  return rep;
}

std::vector<VerificationReport> verify_all(const Catalog& cat, const PairingOptions& opt) {
  std::vector<VerificationReport> out;
  for (const CatalogEntry* e : cat.list(Role::Pairing)) out.push_back(verify_pairing(cat, *e, opt));
  return out;
}

NormalForm u5_constraint(const HyperbolicEq& F, const EvolutionEq& G, Context& ctx) {
  Expr f = oriented_F(F, G);
  JetEngine J(ctx, f);
  NormalForm Gn = normalize(G.G, ctx);
  return J.d_y(Gn.partial(Context::ux(4))) + J.d_x(J.F().partial(Context::ux(1))).scaled(5);
}

NormalForm extract_g(const EvolutionEq& G, Context& ctx) {
  NormalForm dG = normalize(G.G, ctx).partial(Context::ux(4));
  NormalForm g;
  try {
    if (!coefficient_of(dG, Context::ux(2), 0).is_zero() || !coefficient_of(dG, Context::ux(2), 2).is_zero()) {
      throw LemmaPremiseError(G.id + ": dG/du4 is not proportional to u2");
    }
    g = coefficient_of(dG, Context::ux(2), 1).scaled(Rational(1, 5));
  } catch (const NotPolynomialError& e) {
    throw LemmaPremiseError(G.id + ": " + e.what());
  }
  // g may depend on u1 only (through symbols of u1 as well).
  VarMask allowed = VarMask{1} << Context::ux(1);
  VarMask m = g.mask();
  for (int v = 0; m; ++v, m >>= 1) {
    if (!(m & 1u)) continue;
    VarMask dep = ctx.is_symbol(v) ? symbol_dependencies(ctx, v) : VarMask{1} << v;
    if (dep & ~allowed) throw LemmaPremiseError(G.id + ": g depends on " + ctx.name(v));
  }
  return g;
}

LemmaDecomposition lemma_split(const HyperbolicEq& F, const NormalForm& g, Context& ctx) {
  const int u = Context::ux(0), u1 = Context::ux(1), uy = Context::vy(1), u2 = Context::ux(2);
  JetEngine J(ctx, F.F);
  const NormalForm& Fn = J.F();
  NormalForm Fu1 = Fn.partial(u1), Fu = Fn.partial(u), Fuy = Fn.partial(uy);
  LemmaDecomposition d;
  d.g = g;
  NormalForm dg = g.partial(u1);
  d.u2_part = Fu1.partial(u1) + g * Fu1 + dg * Fn;
  d.rest = NormalForm::variable(ctx, u1) * (Fu1.partial(u) + g * Fu) + Fn * (Fu1.partial(uy) + g * Fuy);
  NormalForm five_u2_g = NormalForm::variable(ctx, u2) * g.scaled(5);
  d.expansion = J.d_y(five_u2_g) + J.d_x(Fu1).scaled(5);
  NormalForm whole = (d.u2_part * NormalForm::variable(ctx, u2) + d.rest).scaled(5);
  bool by_coeff = true;
  try {
    by_coeff = coefficient_of(d.expansion, u2, 1) == d.u2_part.scaled(5) &&
               coefficient_of(d.expansion, u2, 0) == d.rest.scaled(5) &&
               coefficient_of(d.expansion, u2, 2).is_zero();
  } catch (const NotPolynomialError&) {
    by_coeff = false;
  }
  d.consistent = d.expansion == whole && by_coeff;
  return d;
}

NormalForm ode_check(const NormalForm& w, const NormalForm& g) {
  const int u1 = Context::ux(1);
  NormalForm w1 = w.partial(u1);
  return w1.partial(u1) + g * w1 + g.partial(u1) * w;
}

std::vector<ParamCondition> param_conditions(const HyperbolicEq& F, const EvolutionEq& G, Context& ctx) {
  NormalForm r = determining_residual(F, G, ctx);
  const VarMask params = ctx.parameter_mask();
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
  std::vector<ParamCondition> out;
  std::set<std::string> seen;
  for (auto& [key, terms] : groups) {
    Poly p = Poly::from_terms(std::move(terms));
    auto [c, prim] = p.content_primitive();
    if (prim.leading().coef < 0) prim = -prim;
    if (!seen.insert(ctx.poly_str(prim)).second) continue;
    out.push_back({monomial_str(key, ctx), prim});
  }
  return out;
}

bool satisfies(const std::vector<ParamCondition>& conds, const Bindings& b, const Context& ctx) {
  for (const auto& c : conds) {
    Poly p = c.condition;
    for (const auto& [name, value] : b) p = p.substitute(ctx.id(name), Poly(value));
    if (!p.is_zero()) return false;
  }
  return true;
}

}  // namespace hypsym
