#pragma once

// Checks of the substitutions relating the classified equations: the cubic
// curve parametrization, the scaling law of f_a, differential substitutions
// to Tzitzeica-type targets, expression equivalences and point changes.

#include <optional>
#include <string>
#include <vector>

#include "hypsym/catalog.hpp"

namespace hypsym {

/// (f + u1)^2 (2f - u1) + 1 with u1 = (2V + V^-2)/3, f = (V - V^-2)/3.
NormalForm check_parametrization(Context& ctx);
/// f_a relation at argument a*s with f_a = a*phi, minus a^3 times the f relation at (s, phi).
NormalForm check_scaling_law(Context& ctx);

struct ConventionResult {
  std::string name;
  std::string bindings;
  bool zero = false;
  std::size_t residual_term_count = 0;
  std::vector<std::pair<std::string, std::string>> failing;  // jet monomial -> coefficient
};

struct NamedCheck {
  std::string name;
  bool zero = false;
};

struct TransformReport {
  std::string id;
  std::string kind;  // differential | equivalence | pointchange
  std::string source;
  bool investigative = false;
  std::vector<NamedCheck> consistency;  // relation compatibility checks
  std::vector<NamedCheck> identities;
  std::vector<std::pair<std::string, std::string>> fitted;  // unknown -> value
  bool fit_unique = false;
  std::vector<ConventionResult> conventions;
  std::string note;

  int zero_conventions() const;
  /// Non-investigative transforms pass when some convention (or the single
  /// identity of an equivalence) vanishes and all declared identities hold.
  bool passed() const;
};

TransformReport check_transform(const Catalog& cat, const std::string& id, Context& ctx);

}  // namespace hypsym
