#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hypsym/verify.hpp"

using namespace hypsym;

TEST(Catalog, EveryEquationParsesAndValidates) {
  Catalog cat;
  int n = 0;
  for (const CatalogEntry* e : cat.list()) {
    Context ctx;
    if (e->role == Role::Hyperbolic) {
      EXPECT_NO_THROW(cat.hyperbolic(e->id, {}, ctx)) << e->id;
      ++n;
    } else if (e->role == Role::Evolution) {
      EXPECT_NO_THROW(cat.evolution(e->id, {}, ctx)) << e->id;
      ++n;
    }
  }
  EXPECT_EQ(n, 15 + 3 + 6 + 4);
}

TEST(Catalog, ListOrderIsDeterministic) {
  Catalog cat;
  auto evs = cat.list(Role::Evolution);
  ASSERT_EQ(evs.size(), 15u);
  EXPECT_EQ(evs.front()->id, "ev7");
  EXPECT_EQ(evs[3]->id, "ev10");
  EXPECT_EQ(evs.back()->id, "ev21");
  auto hyps = cat.list(Role::Hyperbolic);
  std::vector<std::string> ids;
  for (auto* e : hyps) ids.push_back(e->id);
  std::vector<std::string> want = {"hyp2", "hyp3", "hyp4", "S1", "S2", "S3", "S4", "S5", "S6",
                                   "final1", "final2", "final3", "final4"};
  EXPECT_EQ(ids, want);
}

TEST(Catalog, PairingsReferenceExistingEntries) {
  Catalog cat;
  for (const CatalogEntry* p : cat.list(Role::Pairing)) {
    EXPECT_EQ(cat.entry(p->field("hyperbolic")).role, Role::Hyperbolic) << p->id;
    const std::string& ev = p->field("evolution");
    if (ev != "resolve") {
      EXPECT_EQ(cat.entry(ev).role, Role::Evolution) << p->id;
    }
    EXPECT_TRUE(p->field("direction") == "x" || p->field("direction") == "y") << p->id;
  }
}

TEST(Catalog, BindingsParseAndAdmissibility) {
  Bindings b = parse_bindings("a = 1, b = -2/3");
  EXPECT_EQ(b.at("a"), Rational(1));
  EXPECT_EQ(b.at("b"), Rational(-2, 3));
  EXPECT_EQ(to_string(b), "a = 1, b = -2/3");
  EXPECT_THROW(parse_bindings("a = x"), CatalogError);
  Catalog cat;
  Context ctx;
  EXPECT_THROW(cat.hyperbolic("S1", {{"a", Rational(0)}}, ctx), CatalogError);
  EXPECT_THROW(cat.hyperbolic("S1", {{"q", Rational(1)}}, ctx), CatalogError);
  EXPECT_THROW(cat.evolution("S1", {}, ctx), CatalogError);
  EXPECT_THROW(cat.entry("nope"), CatalogError);
}

TEST(Catalog, SplitBindingsRoutesByDeclaredName) {
  Catalog cat;
  auto [bh, be] = split_bindings(cat.entry("S3"), cat.entry("ev17"), {{"mu", Rational(0)}, {"a", Rational(2)}});
  EXPECT_EQ(bh.size(), 1u);
  EXPECT_EQ(be.size(), 1u);
  EXPECT_EQ(be.at("mu"), Rational(0));
  EXPECT_THROW(split_bindings(cat.entry("S3"), cat.entry("ev17"), {{"zz", Rational(1)}}), CatalogError);
}

TEST(Catalog, MalformedTextIsRejected) {
  Catalog cat;
  EXPECT_THROW(cat.add_text("x.eq", "id: q\nrole: hyperbolic\n"), CatalogError);
  EXPECT_THROW(cat.add_text("x.eq", "id: q\nrole: bogus\nexpr: u\n"), CatalogError);
  EXPECT_THROW(cat.add_text("x.eq", "  stray continuation\n"), CatalogError);
  EXPECT_THROW(cat.add_text("x.eq", "id: q\nid: r\n"), CatalogError);
  EXPECT_THROW(cat.add_text("x.eq", "id: q\nrole: hyperbolic\nparams: a (a > 0)\nexpr: u\n"), CatalogError);
  cat.add_text("x.eq", "id: q\nrole: hyperbolic\nexpr: sqrt(qq)\n");
  Context ctx;
  EXPECT_THROW(cat.hyperbolic("q", {}, ctx), CatalogError);
}

TEST(Catalog, ExtraFilesOverrideEmbeddedEntries) {
  auto dir = std::filesystem::temp_directory_path() / "hypsym_catalog_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "hyp3.eq") << "id: hyp3\nrole: hyperbolic\nexpr: exp(u)\n";
  Catalog cat({dir.string()});
  Context ctx;
  EXPECT_TRUE(structurally_equal(cat.hyperbolic("hyp3", {}, ctx).F, exp_of(Expr::var(0))));
  EXPECT_THROW(Catalog({(dir / "missing").string()}), CatalogError);
  std::filesystem::remove_all(dir);
}
