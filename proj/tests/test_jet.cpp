#include <gtest/gtest.h>

#include "generators.hpp"
#include "hypsym/jet.hpp"
#include "hypsym/parser.hpp"

using namespace hypsym;

namespace {

NormalForm nf(Context& ctx, const char* s) { return normalize(parse_expr(s, ctx), ctx); }

}  // namespace

TEST(Jet, BasicTotalDerivatives) {
  Context ctx;
  JetEngine J(ctx, parse_expr("exp(u)", ctx));
  EXPECT_EQ(J.d_x(nf(ctx, "u2")), nf(ctx, "u3"));
  EXPECT_EQ(J.d_x(nf(ctx, "uy")), nf(ctx, "exp(u)"));
  EXPECT_EQ(J.d_y(nf(ctx, "u1")), nf(ctx, "exp(u)"));
  EXPECT_EQ(J.d_y(nf(ctx, "u2")), nf(ctx, "u1*exp(u)"));
  EXPECT_EQ(J.d_y(nf(ctx, "uy")), nf(ctx, "uyy"));
  EXPECT_EQ(J.d_x_n(nf(ctx, "u"), 5), nf(ctx, "u5"));
  EXPECT_EQ(J.d_x_n(nf(ctx, "u2*uy"), 0), nf(ctx, "u2*uy"));
}

TEST(Jet, ChainRuleThroughCubicSymbol) {
  Context ctx;
  ctx.add_parameter("a");
  JetEngine J(ctx, parse_expr("2*fa(uy)*u", ctx));
  EXPECT_EQ(J.d_x(nf(ctx, "fa(uy)")), nf(ctx, "(uy - fa(uy))*u"));
}

TEST(Jet, OneStepExpansionOfF) {
  // D_x F = F_u1 u2 + F_uy F + F_u u1 for a generic-looking F.
  Context ctx;
  Expr F = parse_expr("u1^2*uy + exp(u)*uy^2", ctx);
  JetEngine J(ctx, F);
  NormalForm Fn = normalize(F, ctx);
  NormalForm want = Fn.partial(1) * nf(ctx, "u2") + Fn.partial(Context::vy(1)) * Fn + Fn.partial(0) * nf(ctx, "u1");
  EXPECT_EQ(J.d_x(Fn), want);
}

TEST(Jet, OverflowIsAnError) {
  Context ctx;
  JetEngine J(ctx, parse_expr("u", ctx));
  EXPECT_THROW(J.d_x(nf(ctx, "u10")), JetOverflowError);
  EXPECT_THROW(J.d_y(nf(ctx, "v6")), JetOverflowError);
}

TEST(Jet, SwapIsAnInvolution) {
  Context ctx;
  EXPECT_TRUE(structurally_equal(swap_xy(parse_expr("u1", ctx)), parse_expr("uy", ctx)));
  ctx.add_parameter("a");
  Expr s1 = parse_expr("2*fa(uy)*u", ctx);
  EXPECT_TRUE(is_zero(swap_xy(s1) - parse_expr("2*fa(u1)*u", ctx), ctx));
  gen::ExprGen gen(ctx, 11, {0, 1, 2, 3, Context::vy(1), Context::vy(2)});
  for (int i = 0; i < 50; ++i) {
    Expr e = gen(4);
    EXPECT_TRUE(structurally_equal(swap_xy(swap_xy(e)), e)) << to_string(e, ctx);
  }
  EXPECT_THROW(swap_xy(parse_expr("u7", ctx)), JetOverflowError);
}

class JetProperty : public ::testing::TestWithParam<const char*> {};

TEST_P(JetProperty, MixedDerivativesCommuteAndRoutesAgree) {
  Context ctx;
  Expr F = parse_expr(GetParam(), ctx);
  JetEngine J(ctx, F);
  JetEngine Jnomemo(ctx, F);
  Jnomemo.set_memo_enabled(false);
  ExprJet X(ctx, F);
  gen::ExprGen gen(ctx, 2024, {0, 1, 2, 3, Context::vy(1)});
  for (int i = 0; i < 20; ++i) {
    Expr e = gen(3);
    NormalForm n = normalize(e, ctx);
    NormalForm xy = J.d_x(J.d_y(n)), yx = J.d_y(J.d_x(n));
    EXPECT_TRUE((xy - yx).is_zero()) << to_string(e, ctx);
    EXPECT_EQ(J.d_x(n), Jnomemo.d_x(n));
    NormalForm dx = normalize(X.d_x(e), ctx) - J.d_x(n);
    NormalForm dy = normalize(X.d_y(e), ctx) - J.d_y(n);
    EXPECT_TRUE(dx.is_zero()) << to_string(e, ctx) << " -> " << dx.str();
    EXPECT_TRUE(dy.is_zero()) << to_string(e, ctx) << " -> " << dy.str();
  }
}

TEST_P(JetProperty, LeibnizAndLinearity) {
  Context ctx;
  JetEngine J(ctx, parse_expr(GetParam(), ctx));
  gen::ExprGen gen(ctx, 99, {0, 1, 2, Context::vy(1)});
  for (int i = 0; i < 10; ++i) {
    NormalForm a = normalize(gen(2), ctx), b = normalize(gen(2), ctx);
    EXPECT_EQ(J.d_x(a * b), a * J.d_x(b) + b * J.d_x(a));
    EXPECT_EQ(J.d_y(a + b), J.d_y(a) + J.d_y(b));
  }
}

INSTANTIATE_TEST_SUITE_P(SampleF, JetProperty,
                         ::testing::Values("exp(u) + exp(-2*u)", "2*fa(uy)*u", "u1*uy", "2*f(uy)*sqrt(u1)",
                                           "uy*u1 + u^2"));
