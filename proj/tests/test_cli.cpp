#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>

#include "hypsym/report.hpp"

using namespace hypsym;

namespace {

struct Outcome {
  int status;
  std::string out;
};

Outcome run(const std::string& args) {
  std::string cmd = std::string(HYPSYM_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

}  // namespace

TEST(Cli, VerifyTzitzeicaPasses) {
  Outcome r = run("--format structured verify hyp4 ev12 --samples 5");
  EXPECT_EQ(r.status, 0);
  auto recs = parse_records(r.out);
  ASSERT_EQ(recs.size(), 1u);
  VerificationReport rep = verification_from_record(recs[0]);
  EXPECT_TRUE(rep.residual_is_zero);
  EXPECT_EQ(write_records({to_record(rep)}), r.out);
}

TEST(Cli, FailedCheckExitsWithOne) {
  Outcome r = run("verify hyp3 ev12 --samples 0");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, UsageAndDataErrorsExitWithTwo) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("verify hyp4").status, 2);
  EXPECT_EQ(run("verify hyp4 ev99").status, 2);
  EXPECT_EQ(run("verify hyp4 ev12 --dir z").status, 2);
  EXPECT_EQ(run("verify S1 ev11 --param a=0").status, 2);
  EXPECT_EQ(run("--format xml list").status, 2);
  EXPECT_EQ(run("--catalog /nonexistent list").status, 2);
}

TEST(Cli, ParamsAndDirection) {
  EXPECT_EQ(run("verify S3 ev17 --param mu=0 --samples 3").status, 0);
  EXPECT_EQ(run("verify S3 ev17 --param mu=1 --samples 0").status, 1);
  EXPECT_EQ(run("verify final4 ev21 --dir y --samples 3").status, 0);
}

TEST(Cli, ListShowLemmaTransformSample) {
  Outcome l = run("--format structured list --role pairing");
  EXPECT_EQ(l.status, 0);
  EXPECT_EQ(parse_records(l.out).size(), 16u);
  Outcome s = run("show ev17");
  EXPECT_EQ(s.status, 0);
  EXPECT_NE(s.out.find("canonical:"), std::string::npos);
  Outcome lm = run("--format structured lemma ev17");
  EXPECT_EQ(lm.status, 0);
  EXPECT_EQ(parse_records(lm.out).at(0).require("g"), "-1/(2*u1)");
  EXPECT_EQ(run("lemma ev15 --hyp S3").status, 1);
  Outcome t = run("--format structured transform T1");
  EXPECT_EQ(t.status, 0);
  EXPECT_EQ(transform_from_record(parse_records(t.out).at(0)).zero_conventions(), 1);
  EXPECT_EQ(run("transform parametrization").status, 0);
  Outcome a = run("sample --seed 5"), b = run("sample --seed 5");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CatalogEnvironmentVariable) {
  Outcome r = run("list");
  Outcome e = run("list --role hyperbolic");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(e.status, 0);
  std::string cmd = "HYPSYM_CATALOG=/nonexistent ";
  FILE* p = popen((cmd + HYPSYM_BIN + " list >/dev/null 2>&1").c_str(), "r");
  ASSERT_NE(p, nullptr);
  int st = pclose(p);
  EXPECT_EQ(WEXITSTATUS(st), 2);
}
