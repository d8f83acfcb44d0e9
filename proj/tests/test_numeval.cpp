#include <gtest/gtest.h>

#include <cmath>

#include "hypsym/numeval.hpp"
#include "hypsym/parser.hpp"

using namespace hypsym;

TEST(Numeval, CubicRootsFromParametrization) {
  auto r = cubic_real_roots(2, 3, 0, 0);  // u1 = 1: s^2 (2s + 3)
  EXPECT_NEAR(r.back(), 0.0, 1e-12);
  double f = cubic_symbol_value(17.0 / 12, 1);
  auto all = cubic_real_roots(2, 3 * 17.0 / 12, 0, 1 - std::pow(17.0 / 12, 3));
  bool found = false;
  for (double x : all) found |= std::fabs(x - 7.0 / 12) < 1e-12;
  EXPECT_TRUE(found);
  EXPECT_GE(f, 7.0 / 12 - 1e-12);
}

TEST(Numeval, SamplePointsAreConsistentAndReproducible) {
  Context ctx;
  normalize(parse_expr("f(u1) + sqrt(u1) + wp(u)*w(u) + fa(uy) + ln(u1) + sqrt(c)", ctx), ctx);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SamplePoint p = sample_point(ctx, seed);
    for (const auto& [name, r] : p.relation_residuals) EXPECT_LT(std::fabs(r), 1e-12) << name;
    SamplePoint q = sample_point(ctx, seed);
    EXPECT_EQ(p.value, q.value);
  }
}

TEST(Numeval, ZeroAndNonzeroVerdicts) {
  Context ctx;
  Expr rel = parse_expr("(f(u1)+u1)^2*(2*f(u1)-u1)+1", ctx);
  EXPECT_TRUE(numeric_zero(rel, ctx, 10, 1e-9, 3).zero_like);
  EXPECT_TRUE(numeric_zero(normalize(Expr(), ctx), 5, 1e-9, 3).zero_like);
  NumericVerdict v = numeric_zero(parse_expr("f(u1) - u1", ctx), ctx, 10, 1e-9, 3);
  EXPECT_FALSE(v.zero_like);
  EXPECT_EQ(v.nonzero_points, 10);
}

TEST(Numeval, SymbolDerivativeRulesMatchFiniteDifferences) {
  Context ctx;
  normalize(parse_expr("f(u1) + fa(uy) + wp(u) + sqrt(u1) + exp(u) + ln(u1)", ctx), ctx);
  for (int sym : ctx.symbols()) {
    const SymbolDef& d = *ctx.symbol(sym);
    VarMask m = d.arg.mask() | d.constant.mask();
    if (d.kind == SymbolKind::WeierP) m |= VarMask{1} << Context::kParamC;
    for (int v = 0; m; ++v, m >>= 1) {
      if (!(m & 1u)) continue;
      DerivativeCheck c = check_symbol_derivative(ctx, sym, v, 20, 5);
      EXPECT_LT(c.max_relative_error, 1e-6) << c.symbol << " / " << c.variable;
    }
  }
}
