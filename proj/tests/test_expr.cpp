#include <gtest/gtest.h>

#include "hypsym/expr.hpp"
#include "hypsym/parser.hpp"

using namespace hypsym;

TEST(Parser, RoundTripAndErrors) {
  Context ctx;
  Expr e = parse_expr("u1^2*uy - 3/2*exp(-2*u) + f(u1)/(u2+1)", ctx);
  Expr back = parse_expr(to_string(e, ctx), ctx);
  EXPECT_TRUE(is_zero(e - back, ctx)) << to_string(e, ctx);
  EXPECT_THROW(parse_expr("u1 + zz", ctx), ParseError);
  EXPECT_THROW(parse_expr("u1^(1/2)", ctx), ParseError);
  EXPECT_THROW(parse_expr("(u1 + u2", ctx), ParseError);
  try {
    parse_expr("u1 + qq", ctx);
  } catch (const ParseError& err) {
    EXPECT_EQ(err.position(), 5u);
  }
}

TEST(Expr, DiffAgreesWithNormalFormPartial) {
  Context ctx;
  Expr e = parse_expr("exp(u)*sqrt(u1)*f(uy) + ln(u1+u)/(u-2) + w(u)*wp(u)*c", ctx);
  for (int var : {Context::ux(0), Context::ux(1), Context::vy(1), ctx.id("c")}) {
    NormalForm a = normalize(diff(e, var, ctx), ctx);
    NormalForm b = normalize(e, ctx).partial(var);
    EXPECT_EQ(a, b) << ctx.name(var) << ": " << a.str() << " vs " << b.str();
  }
}

TEST(Expr, SubstituteSimultaneousAndCycles) {
  Context ctx;
  Expr u = Expr::var(0), u1 = Expr::var(1), u2 = Expr::var(2);
  Expr e = u + u1 * u2;
  Expr s = substitute(e, {{u, u - Expr::var(ctx.id("b"))}});
  EXPECT_TRUE(is_zero(s - parse_expr("u - b + u1*u2", ctx), ctx));
  EXPECT_THROW(substitute(e, {{u1, u2}, {u2, u1}}), CyclicBindingError);
  Expr g = substitute(parse_expr("f(u1)^2", ctx), {{f_of(u1), u2}});
  EXPECT_TRUE(is_zero(g - u2 * u2, ctx));
}

TEST(Expr, ExpIntegerMultiples) {
  Context ctx;
  Expr e = parse_expr("exp(2*u)*exp(-2*u) - 1", ctx);
  EXPECT_TRUE(is_zero(e, ctx));
}
