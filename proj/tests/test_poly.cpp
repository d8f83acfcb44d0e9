#include <gtest/gtest.h>

#include "hypsym/normal_form.hpp"

using namespace hypsym;

namespace {

NormalForm V(Context& c, const char* n) { return NormalForm::variable(c, c.id(n)); }

}  // namespace

TEST(Poly, ProductAndExactDivision) {
  Poly x = Poly::var(1), y = Poly::var(2);
  Poly a = x + y, b = x - y * Rational(3);
  Poly p = a * b;
  Poly q;
  ASSERT_TRUE(a.divides_into(p, q));
  EXPECT_EQ(q, b);
  EXPECT_FALSE(a.divides_into(p + Poly(1), q));
  auto [c, prim] = (p * Rational(6)).content_primitive();
  EXPECT_EQ(prim * c, p * Rational(6));
}

TEST(NormalForm, CubicRelationVanishes) {
  Context ctx;
  int f = ctx.intern_symbol(SymbolKind::Cubic, Poly::var(Context::ux(1)), Poly(1));
  NormalForm F = NormalForm::variable(ctx, f);
  NormalForm u1 = NormalForm::variable(ctx, Context::ux(1));
  NormalForm one(ctx, 1);
  NormalForm e = (F + u1) * (F + u1) * (F.scaled(2) - u1) + one;
  EXPECT_TRUE(e.is_zero()) << e.str();
  EXPECT_EQ(F * F.inverse(), one);
}

TEST(NormalForm, WeierstrassPair) {
  Context ctx;
  int w = ctx.intern_symbol(SymbolKind::WeierW, Poly::var(Context::ux(0)));
  int p = ctx.symbol(w)->partner;
  NormalForm W = NormalForm::variable(ctx, w), P = NormalForm::variable(ctx, p);
  NormalForm e = P * P - W * W * W.scaled(4) - V(ctx, "c");
  EXPECT_TRUE(e.is_zero()) << e.str();
}

TEST(NormalForm, ExpInverseAndCancellation) {
  Context ctx;
  int E = ctx.intern_symbol(SymbolKind::Exp, Poly::var(Context::ux(0)));
  NormalForm e = NormalForm::variable(ctx, E);
  NormalForm one(ctx, 1);
  EXPECT_EQ(e * e.inverse(), one);
  NormalForm u1 = V(ctx, "u1"), u2 = V(ctx, "u2");
  NormalForm r = (u1 * u1 - u2 * u2) / (u1 + u2);
  EXPECT_EQ(r, u1 - u2);
  EXPECT_THROW(u1 / NormalForm(ctx), DivisionByZero);
}
