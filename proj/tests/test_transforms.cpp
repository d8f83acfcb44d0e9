#include <gtest/gtest.h>

#include <cmath>

#include "hypsym/numeval.hpp"
#include "hypsym/parser.hpp"
#include "hypsym/report.hpp"

using namespace hypsym;

namespace {

TransformReport run(const std::string& id) {
  Catalog cat;
  Context ctx;
  return check_transform(cat, id, ctx);
}

const ConventionResult& convention(const TransformReport& r, const std::string& name) {
  for (const auto& c : r.conventions) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no convention " + name);
}

}  // namespace

TEST(Transforms, ParametrizationAndScalingLaw) {
  Context ctx;
  EXPECT_TRUE(check_parametrization(ctx).is_zero());
  EXPECT_TRUE(check_scaling_law(ctx).is_zero());
}

TEST(Transforms, ParametrizationPoints) {
  // V = 2 gives (17/12, 7/12), V = 1 gives (1, 0); both lie on the curve.
  auto curve = [](double u1, double f) { return (f + u1) * (f + u1) * (2 * f - u1) + 1; };
  for (double V : {2.0, 1.0, 0.7, 3.5}) {
    double u1 = (2 * V + 1 / (V * V)) / 3, f = (V - 1 / (V * V)) / 3;
    EXPECT_NEAR(curve(u1, f), 0.0, 1e-12) << V;
  }
  EXPECT_NEAR((2 * 2.0 + 0.25) / 3, 17.0 / 12, 1e-15);
}

TEST(Transforms, ScalingLawNumerically) {
  // f_a(a s) = a f(s) at s = 17/12, a = 2.
  double s = 17.0 / 12, a = 2;
  auto f = [](double x) { return cubic_real_roots(2, 3 * x, 0, 1 - x * x * x).back(); };
  auto fa = [&](double x) { return cubic_real_roots(2, 3 * x, 0, a * a * a - x * x * x).back(); };
  EXPECT_NEAR(fa(a * s), a * f(s), 1e-12);
}

TEST(Transforms, S1ToTzitzeicaPicksExactlyOneSign) {
  TransformReport r = run("T1");
  EXPECT_EQ(r.zero_conventions(), 1);
  EXPECT_TRUE(convention(r, "flipped").zero);
  EXPECT_FALSE(convention(r, "printed").zero);
  EXPECT_FALSE(convention(r, "printed").failing.empty());
  ASSERT_TRUE(r.fit_unique);
  std::vector<std::pair<std::string, std::string>> want = {{"c1", "1/3"}, {"c2", "a^3/6"}};
  EXPECT_EQ(r.fitted, want);
  // u = 2 v_x contradicts the exponential relation; the report records it.
  bool any_failed = false;
  for (const auto& c : r.consistency) any_failed = any_failed || !c.zero;
  EXPECT_TRUE(any_failed);
}

TEST(Transforms, ConsistentS1Variant) {
  TransformReport r = run("T2");
  EXPECT_TRUE(r.passed());
  for (const auto& c : r.consistency) EXPECT_TRUE(c.zero) << c.name;
  std::vector<std::pair<std::string, std::string>> want = {{"c1", "2/3"}, {"c2", "a^3/3"}};
  EXPECT_EQ(r.fitted, want);
}

TEST(Transforms, S3MapsVerify) {
  TransformReport i = run("T3");
  EXPECT_TRUE(i.passed());
  EXPECT_TRUE(convention(i, "b0-positive").zero);
  EXPECT_TRUE(convention(i, "shifted-positive").zero);
  EXPECT_FALSE(convention(i, "b0-negative").zero);
  TransformReport ii = run("T4");
  EXPECT_TRUE(ii.passed());
  ASSERT_EQ(ii.identities.size(), 1u);
  EXPECT_TRUE(ii.identities[0].zero);
}

TEST(Transforms, S6MapIsDeterministic) {
  TransformReport a = run("T5"), b = run("T5");
  EXPECT_TRUE(a.investigative);
  EXPECT_EQ(write_records({to_record(a)}), write_records({to_record(b)}));
  EXPECT_EQ(a.conventions.size(), 4u);
  EXPECT_GE(a.zero_conventions(), 1);
}

TEST(Transforms, Equivalences) {
  Catalog cat;
  for (const CatalogEntry* e : cat.list(Role::Transform)) {
    if (e->field("kind") != "equivalence") continue;
    Context ctx;
    TransformReport r = check_transform(cat, e->id, ctx);
    EXPECT_EQ(r.conventions.size(), 1u);
    if (!r.investigative) {
      EXPECT_TRUE(r.conventions[0].zero) << e->id;
    }
  }
  EXPECT_FALSE(run("E4").conventions[0].zero);
}

TEST(Transforms, ErrorsAreReported) {
  Catalog cat;
  cat.add_text("x.eq", "id: X1\nrole: transform\nkind: sideways\n");
  cat.add_text("y.eq", "id: X2\nrole: transform\nkind: differential\nsource: S1\nrelations: u1 = u\ntarget: u\n");
  Context ctx;
  EXPECT_THROW(check_transform(cat, "X1", ctx), CatalogError);
  EXPECT_THROW(check_transform(cat, "X2", ctx), CatalogError);
  EXPECT_THROW(check_transform(cat, "S1", ctx), CatalogError);
}
