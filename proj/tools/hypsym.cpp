// Command-line front end: catalog browsing, pair verification, lemma
// decomposition, transform checks and sample points.
//
// Exit status: 0 all checks passed, 1 a check failed, 2 usage or data error.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hypsym/numeval.hpp"
#include "hypsym/parser.hpp"
#include "hypsym/report.hpp"

using namespace hypsym;

namespace {

constexpr const char* kCatalogEnv = "HYPSYM_CATALOG";

struct Options {
  std::string format = "text";
  std::vector<std::string> catalogs;
  std::vector<std::string> params;
  std::string dir = "x";
  int samples = 25;
  double tol = 1e-9;
  std::uint64_t seed = 7;
  std::string role;
  std::string hyp, ev, id;
};

bool structured(const Options& o) { return o.format == "structured"; }

Catalog load_catalog(const Options& o) {
  std::vector<std::string> paths;
  if (const char* env = std::getenv(kCatalogEnv)) {
    std::stringstream ss(env);
    std::string p;
    while (std::getline(ss, p, ':')) {
      if (!p.empty()) paths.push_back(p);
    }
  }
  paths.insert(paths.end(), o.catalogs.begin(), o.catalogs.end());
  return Catalog(paths);
}

Bindings param_bindings(const Options& o) {
  std::string joined;
  for (const auto& p : o.params) joined += (joined.empty() ? "" : ", ") + p;
  return parse_bindings(joined);
}

PairingOptions pairing_options(const Options& o) { return {o.samples, o.seed, o.tol}; }

void print_verification(const VerificationReport& r) {
  std::cout << (r.pairing.empty() ? "" : r.pairing + ": ") << r.hyperbolic << " / " << r.evolution << " ("
            << direction_name(r.direction) << ")";
  if (!r.bindings.empty()) std::cout << " [" << to_string(r.bindings) << "]";
  std::cout << "\n  residual: " << (r.residual_is_zero ? "zero" : std::to_string(r.residual_term_count) + " terms")
            << ", expected " << r.expect << "\n";
  if (r.numeric_max_residual) {
    std::cout << "  numeric: max relative " << format_double(*r.numeric_max_residual) << ", nonzero at "
              << r.numeric_nonzero_points << "/" << r.samples << " points (seed " << r.seed << ")\n";
  }
  for (const auto& [m, c] : r.failing_coefficients) std::cout << "  coefficient of " << m << ": " << c << "\n";
  if (!r.note.empty()) std::cout << "  note: " << r.note << "\n";
  std::cout << "  " << (r.passed() ? "PASS" : "FAIL") << "\n";
}

void print_transform(const TransformReport& r) {
  std::cout << r.id << " (" << r.kind << ", source " << r.source << (r.investigative ? ", investigative" : "")
            << ")\n";
  for (const auto& c : r.consistency) std::cout << "  relation " << c.name << ": " << (c.zero ? "holds" : "fails") << "\n";
  for (const auto& c : r.identities) std::cout << "  identity " << c.name << ": " << (c.zero ? "holds" : "fails") << "\n";
  if (!r.fitted.empty() || r.fit_unique) {
    std::cout << "  fit:";
    for (const auto& [k, v] : r.fitted) std::cout << " " << k << " = " << v;
    std::cout << (r.fit_unique ? "" : " (no unique fit)") << "\n";
  }
  for (const auto& c : r.conventions) {
    std::cout << "  convention " << c.name << (c.bindings.empty() ? "" : " {" + c.bindings + "}") << ": "
              << (c.zero ? "zero" : std::to_string(c.residual_term_count) + " terms") << "\n";
  }
  if (!r.note.empty()) std::cout << "  note: " << r.note << "\n";
  std::cout << "  " << (r.passed() ? "PASS" : "FAIL") << "\n";
}

int cmd_list(const Options& o) {
  Catalog cat = load_catalog(o);
  std::optional<Role> role;
  if (!o.role.empty()) role = parse_role(o.role);
  std::vector<Record> recs;
  for (const CatalogEntry* e : cat.list(role)) {
    std::string params;
    for (const auto& p : e->params) params += (params.empty() ? "" : ", ") + p.name + (p.nonzero ? " != 0" : "");
    if (structured(o)) {
      recs.push_back({"entry", {{"id", e->id}, {"role", role_name(e->role)}, {"params", params}, {"provenance", e->provenance}}});
    } else {
      std::cout << e->id << "\t" << role_name(e->role) << "\t" << params << "\t" << e->provenance << "\n";
    }
  }
  if (structured(o)) std::cout << write_records(recs);
  return 0;
}

int cmd_show(const Options& o) {
  Catalog cat = load_catalog(o);
  const CatalogEntry& e = cat.entry(o.id);
  Record rec{"entry", {{"id", e.id}, {"role", role_name(e.role)}, {"source", e.source}}};
  for (const auto& [k, v] : e.fields) {
    if (k != "id" && k != "role") rec.add(k, v);
  }
  if (e.role == Role::Hyperbolic || e.role == Role::Evolution) {
    Context ctx;
    Expr x = cat.instantiate(e, e.field("expr"), {}, ctx);
    rec.add("canonical", to_string(x, ctx));
  }
  if (structured(o)) {
    std::cout << write_records({rec});
  } else {
    for (const auto& [k, v] : rec.fields) std::cout << k << ": " << v << "\n";
  }
  return 0;
}

int emit_verifications(const Options& o, const std::vector<VerificationReport>& reps) {
  bool ok = true;
  std::vector<Record> recs;
  for (const auto& r : reps) {
    ok = ok && r.passed();
    if (structured(o)) {
      recs.push_back(to_record(r));
    } else {
      print_verification(r);
    }
  }
  if (structured(o)) std::cout << write_records(recs);
  return ok ? 0 : 1;
}

int cmd_verify(const Options& o) {
  Catalog cat = load_catalog(o);
  VerificationReport r = verify_ids(cat, o.hyp, o.ev, parse_direction(o.dir), param_bindings(o), pairing_options(o));
  return emit_verifications(o, {r});
}

int cmd_verify_all(const Options& o) {
  Catalog cat = load_catalog(o);
  auto reps = verify_all(cat, pairing_options(o));
  int rc = emit_verifications(o, reps);
  if (!structured(o)) {
    int passed = 0;
    for (const auto& r : reps) passed += r.passed();
    std::cout << passed << "/" << reps.size() << " pairings passed\n";
  }
  return rc;
}

int cmd_lemma(const Options& o) {
  Catalog cat = load_catalog(o);
  std::string hyp = o.hyp;
  Bindings b = param_bindings(o);
  if (hyp.empty()) {
    for (const CatalogEntry* p : cat.list(Role::Pairing)) {
      if (p->field("evolution") == o.ev && p->maybe("expect").value_or("zero") == "zero" &&
          p->field("direction") == "x") {
        hyp = p->field("hyperbolic");
        if (o.params.empty()) b = parse_bindings(p->maybe("bindings").value_or(""));
        break;
      }
    }
    if (hyp.empty()) throw CatalogError("no x-direction pairing names " + o.ev + "; pass --hyp");
  }
  Context ctx;
  auto [bh, be] = split_bindings(cat.entry(hyp), cat.entry(o.ev), b);
  HyperbolicEq F = cat.hyperbolic(hyp, bh, ctx);
  EvolutionEq G = cat.evolution(o.ev, be, ctx);
  NormalForm g = extract_g(G, ctx);
  LemmaDecomposition d = lemma_split(F, g, ctx);
  bool vanish = d.u2_part.is_zero() && d.rest.is_zero();
  Record rec{"lemma", {{"hyperbolic", hyp}, {"evolution", o.ev}, {"bindings", to_string(b)}}};
  rec.add("g", to_string(to_expr(d.g), ctx));
  rec.add("u2_part_zero", d.u2_part.is_zero() ? "true" : "false");
  rec.add("rest_zero", d.rest.is_zero() ? "true" : "false");
  rec.add("split_consistent", d.consistent ? "true" : "false");
  if (!d.u2_part.is_zero()) rec.add("u2_part", to_string(to_expr(d.u2_part), ctx));
  if (!d.rest.is_zero()) rec.add("rest", to_string(to_expr(d.rest), ctx));
  if (structured(o)) {
    std::cout << write_records({rec});
  } else {
    for (const auto& [k, v] : rec.fields) std::cout << k << ": " << v << "\n";
  }
  return d.consistent && vanish ? 0 : 1;
}

int cmd_transform(const Options& o) {
  Catalog cat = load_catalog(o);
  Context ctx;
  if (o.id == "parametrization" || o.id == "scaling-law") {
    NormalForm r = o.id == "parametrization" ? check_parametrization(ctx) : check_scaling_law(ctx);
    Record rec{"identity", {{"id", o.id}, {"zero", r.is_zero() ? "true" : "false"}}};
    if (!r.is_zero()) rec.add("residual", r.str());
    if (structured(o)) {
      std::cout << write_records({rec});
    } else {
      std::cout << o.id << ": " << (r.is_zero() ? "zero" : r.str()) << "\n";
    }
    return r.is_zero() ? 0 : 1;
  }
  std::vector<std::string> ids;
  if (o.id == "all") {
    for (const CatalogEntry* e : cat.list(Role::Transform)) ids.push_back(e->id);
  } else {
    ids.push_back(o.id);
  }
  bool ok = true;
  std::vector<Record> recs;
  for (const auto& id : ids) {
    Context local;
    TransformReport r = check_transform(cat, id, local);
    ok = ok && r.passed();
    if (structured(o)) {
      recs.push_back(to_record(r));
    } else {
      print_transform(r);
    }
  }
  if (structured(o)) std::cout << write_records(recs);
  return ok ? 0 : 1;
}

int cmd_sample(const Options& o) {
  Catalog cat = load_catalog(o);
  Context ctx;
  if (!o.hyp.empty()) intern_symbols(cat.hyperbolic(o.hyp, {}, ctx).F, ctx);
  if (!o.ev.empty()) intern_symbols(cat.evolution(o.ev, {}, ctx).G, ctx);
  if (o.hyp.empty() && o.ev.empty()) {
    for (const char* s : {"f(u1)", "fa(uy)", "wp(u)"}) intern_symbols(parse_expr(s, ctx), ctx);
  }
  SamplePoint p = sample_point(ctx, o.seed);
  Record rec{"sample", {{"seed", std::to_string(o.seed)}}};
  for (int v = 0; v < ctx.size(); ++v) {
    if (p.assigned[static_cast<std::size_t>(v)]) rec.add(ctx.name(v), format_double(p.at(v)));
  }
  for (const auto& [name, res] : p.relation_residuals) rec.add("relation " + name, format_double(res));
  if (structured(o)) {
    std::cout << write_records({rec});
  } else {
    for (const auto& [k, v] : rec.fields) std::cout << k << " = " << v << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-symmetry verification for u_xy = F(u_x, u_y, u)"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--catalog", o.catalogs, std::string("Extra catalog file or directory (also $") + kCatalogEnv + ")");

  auto numeric = [&](CLI::App* s) {
    s->add_option("--samples", o.samples, "Numeric sample points")->check(CLI::NonNegativeNumber);
    s->add_option("--tol", o.tol, "Relative tolerance")->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed, "Sampling seed");
  };

  auto* list = app.add_subcommand("list", "List catalog entries");
  list->add_option("--role", o.role, "evolution | hyperbolic | transform | pairing");
  auto* show = app.add_subcommand("show", "Show one catalog entry");
  show->add_option("id", o.id)->required();
  auto* verify = app.add_subcommand("verify", "Verify one hyperbolic / evolution pair");
  verify->add_option("hyp", o.hyp)->required();
  verify->add_option("ev", o.ev)->required();
  verify->add_option("--dir", o.dir, "Symmetry direction")->check(CLI::IsMember({"x", "y"}));
  verify->add_option("--param", o.params, "Parameter binding k=v (repeatable)");
  numeric(verify);
  auto* all = app.add_subcommand("verify-all", "Run every pairing claim in the catalog");
  numeric(all);
  auto* lemma = app.add_subcommand("lemma", "Extract g and split the u5 constraint");
  lemma->add_option("ev", o.ev)->required();
  lemma->add_option("--hyp", o.hyp, "Hyperbolic equation (default: from the pairings)");
  lemma->add_option("--param", o.params, "Parameter binding k=v (repeatable)");
  auto* transform = app.add_subcommand("transform", "Check a transform (or 'all', 'parametrization', 'scaling-law')");
  transform->add_option("id", o.id)->required();
  auto* sample = app.add_subcommand("sample", "Print a consistent numeric sample point");
  sample->add_option("--seed", o.seed, "Sampling seed");
  sample->add_option("--hyp", o.hyp, "Intern the symbols of this hyperbolic equation");
  sample->add_option("--ev", o.ev, "Intern the symbols of this evolution equation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*list) return cmd_list(o);
    if (*show) return cmd_show(o);
    if (*verify) return cmd_verify(o);
    if (*all) return cmd_verify_all(o);
    if (*lemma) return cmd_lemma(o);
    if (*transform) return cmd_transform(o);
    if (*sample) return cmd_sample(o);
  } catch (const LemmaPremiseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
