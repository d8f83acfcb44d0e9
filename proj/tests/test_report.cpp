#include <gtest/gtest.h>

#include "hypsym/report.hpp"

using namespace hypsym;

TEST(Report, VerificationRoundTrip) {
  VerificationReport r;
  r.pairing = "P9";
  r.hyperbolic = "hyp3";
  r.evolution = "ev12";
  r.direction = Direction::Y;
  r.bindings = {{"mu", Rational(0)}, {"a", Rational(-3, 2)}};
  r.expect = "nonzero";
  r.residual_term_count = 5;
  r.failing_coefficients = {{"u2^2", "(-30*u1)/(exp(u))"}, {"u4", "line\nbreak \\ slash"}};
  r.samples = 10;
  r.seed = 18446744073709551615ULL;
  r.tolerance = 1e-9;
  r.numeric_max_residual = 0.1 + 0.2;
  r.numeric_nonzero_points = 10;
  r.note = "x = y : z";
  std::string text = write_records({to_record(r)});
  auto recs = parse_records(text);
  ASSERT_EQ(recs.size(), 1u);
  VerificationReport back = verification_from_record(recs[0]);
  EXPECT_EQ(back.pairing, r.pairing);
  EXPECT_EQ(back.direction, r.direction);
  EXPECT_EQ(back.bindings, r.bindings);
  EXPECT_EQ(back.expect, r.expect);
  EXPECT_EQ(back.residual_term_count, r.residual_term_count);
  EXPECT_EQ(back.failing_coefficients, r.failing_coefficients);
  EXPECT_EQ(back.seed, r.seed);
  EXPECT_EQ(back.tolerance, r.tolerance);
  EXPECT_EQ(*back.numeric_max_residual, *r.numeric_max_residual);
  EXPECT_EQ(back.note, r.note);
  EXPECT_EQ(write_records({to_record(back)}), text);
}

TEST(Report, TransformRoundTrip) {
  TransformReport r;
  r.id = "T1";
  r.kind = "differential";
  r.source = "S1";
  r.consistency = {{"D_x(e^v) = v_x e^v", false}};
  r.identities = {{"gk^3", true}};
  r.fitted = {{"c1", "1/3"}, {"c2", "a^3/6"}};
  r.fit_unique = true;
  r.conventions = {{"printed", "c1 = 1/3", false, 2, {{"1", "a^3"}}}, {"flipped", "c1 = 1/3", true, 0, {}}};
  r.note = "n";
  std::string text = write_records({to_record(r)});
  TransformReport back = transform_from_record(parse_records(text).at(0));
  EXPECT_EQ(write_records({to_record(back)}), text);
  EXPECT_EQ(back.conventions[0].failing, r.conventions[0].failing);
  EXPECT_TRUE(back.passed());
}

TEST(Report, ParseErrors) {
  EXPECT_THROW(parse_records("key = value\n"), ReportParseError);
  EXPECT_THROW(parse_records("[x\n"), ReportParseError);
  EXPECT_THROW(parse_records("[x]\nnot a field\n"), ReportParseError);
  EXPECT_THROW(parse_records("[x]\nk = bad \\q escape\n"), ReportParseError);
  EXPECT_THROW(verification_from_record(parse_records("[verification]\npairing = P1\n")[0]), ReportParseError);
  EXPECT_THROW(verification_from_record(Record{"transform", {}}), ReportParseError);
  auto recs = parse_records("# comment\n[a]\nk =\n\n[b]\nk = v\nk = w\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].require("k"), "");
  EXPECT_EQ(recs[1].all("k").size(), 2u);
}
