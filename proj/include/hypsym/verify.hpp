#pragma once

// The determining equation of a fifth-order symmetry u_t = u_5 + G of
// u_xy = F and the conditions derived from it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypsym/catalog.hpp"
#include "hypsym/jet.hpp"

namespace hypsym {

/// D_x D_y H - F_ux D_x H - F_uy D_y H - F_u H with H = u_5 + G, mixed
/// derivatives eliminated. For direction y the pair (swap(F), G) is used.
NormalForm determining_residual(const HyperbolicEq& F, const EvolutionEq& G, Context& ctx);
/// The same residual built on expression DAGs (independent route for the oracle).
Expr determining_residual_expr(const HyperbolicEq& F, const EvolutionEq& G, Context& ctx);

struct JetCoefficient {
  std::string monomial;  // in the jets u2.., uyy.. ("1" for the free part)
  NormalForm value;
};

/// Groups a residual by monomials in the higher jets (u2..u10, uyy..v6),
/// leading monomial first.
std::vector<JetCoefficient> jet_coefficients(const NormalForm& r);

struct VerificationReport {
  std::string pairing;
  std::string hyperbolic;
  std::string evolution;
  Direction direction = Direction::X;
  Bindings bindings;
  std::string expect = "zero";
  bool residual_is_zero = false;
  std::size_t residual_term_count = 0;
  std::vector<std::pair<std::string, std::string>> failing_coefficients;
  int samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  std::optional<double> numeric_max_residual;
  int numeric_nonzero_points = 0;
  bool numeric_agrees = true;  // numeric verdict matches the symbolic one
  std::string note;

  bool passed() const { return (expect == "zero") == residual_is_zero && numeric_agrees; }
};

VerificationReport verify_pair(const HyperbolicEq& F, const EvolutionEq& G, Context& ctx, int samples,
                               std::uint64_t seed, double tol = 1e-9);

struct PairingOptions {
  int samples = 25;
  std::uint64_t seed = 7;
  double tolerance = 1e-9;
};

/// Binds parameters by name: each binding goes to every entry that declares it.
/// Throws CatalogError when no entry declares a bound name.
std::pair<Bindings, Bindings> split_bindings(const CatalogEntry& hyp, const CatalogEntry& ev, const Bindings& b);

/// Verifies the pair (hyp, ev) from catalog ids in a fresh context.
VerificationReport verify_ids(const Catalog& cat, const std::string& hyp, const std::string& ev, Direction dir,
                              const Bindings& b, const PairingOptions& opt);

/// Runs a pairing claim. An evolution field of "resolve" tries every candidate
/// and reports the first that vanishes; the note lists all vanishing candidates.
VerificationReport verify_pairing(const Catalog& cat, const CatalogEntry& pairing, const PairingOptions& opt);
std::vector<VerificationReport> verify_all(const Catalog& cat, const PairingOptions& opt);

/// D_y(dG/du4) + 5 D_x(dF/du_x).
NormalForm u5_constraint(const HyperbolicEq& F, const EvolutionEq& G, Context& ctx);

class LemmaPremiseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// g with dG/du4 = 5 u2 g(u1).
NormalForm extract_g(const EvolutionEq& G, Context& ctx);

struct LemmaDecomposition {
  NormalForm g;
  NormalForm u2_part;  // F_u1u1 + g F_u1 + g' F
  NormalForm rest;     // u1 (F_u1u + g F_u) + F (F_u1uy + g F_uy)
  NormalForm expansion;  // D_y(5 u2 g) + 5 D_x(F_u1)
  /// expansion == 5 (u2_part u2 + rest), checked both as a whole and through
  /// the u2-coefficients of the expansion.
  bool consistent = false;
};

LemmaDecomposition lemma_split(const HyperbolicEq& F, const NormalForm& g, Context& ctx);

/// w'' + g w' + g' w with ' = d/du1.
NormalForm ode_check(const NormalForm& w, const NormalForm& g);

struct ParamCondition {
  std::string monomial;  // monomial in non-parameter variables
  Poly condition;        // primitive polynomial in the parameters
};

/// Coefficients of the residual numerator with respect to every non-parameter
/// variable; the residual vanishes iff all of them vanish.
std::vector<ParamCondition> param_conditions(const HyperbolicEq& F, const EvolutionEq& G, Context& ctx);
bool satisfies(const std::vector<ParamCondition>& conds, const Bindings& b, const Context& ctx);

}  // namespace hypsym
