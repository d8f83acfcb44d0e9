#pragma once

// Variable universe shared by polynomials, normal forms and expressions.
//
// Ids 0..10 are the x-jet u, u1..u10; ids 11..16 the y-jet uy, uyy, uyyy,
// v4..v6. Auxiliary base variables and the standard parameters follow, and
// special-function symbols are interned on demand after them. A symbol is
// identified by (kind, argument, constant); interning the same triple twice
// yields the same variable.

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypsym/poly.hpp"

namespace hypsym {

class NormalForm;

enum class VarKind { JetX, JetY, Aux, Parameter, Transcendental, Algebraic };

enum class SymbolKind {
  Exp,     // e^arg, transcendental
  Ln,      // ln(arg), transcendental
  Sqrt,    // s^2 = arg
  Cubic,   // 2s^3 + 3 arg s^2 - arg^3 + K = 0
  WeierW,  // omega(arg), transcendental
  WeierP,  // omega'(arg); P^2 = 4 W^3 + c
};

struct SymbolDef {
  SymbolKind kind;
  int var = -1;
  Poly arg;
  Poly constant;     // Cubic: K
  int partner = -1;  // WeierW <-> WeierP
  int degree = 0;    // relation degree; 0 for transcendental symbols
  Poly relation;     // minimal polynomial in `var` (algebraic only)
};

class ContextError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DenFactor {
  int atom;
  int exp;
  friend bool operator==(const DenFactor&, const DenFactor&) = default;
};

class Context {
 public:
  static constexpr int kMaxXJet = 10;
  static constexpr int kMaxYJet = 6;
  static constexpr int kU = 0;
  static constexpr int kParamC = 27;  // id of the Weierstrass invariant c
  static int ux(int k) {
    if (k < 0 || k > kMaxXJet) throw ContextError("x-jet order out of range: " + std::to_string(k));
    return k;
  }
  static int vy(int k) {
    if (k < 1 || k > kMaxYJet) throw ContextError("y-jet order out of range: " + std::to_string(k));
    return kMaxXJet + k;
  }
  static bool is_x_jet(int id) { return id >= 0 && id <= kMaxXJet; }
  static bool is_y_jet(int id) { return id > kMaxXJet && id <= kMaxXJet + kMaxYJet; }
  static int jet_order(int id) { return is_x_jet(id) ? id : id - kMaxXJet; }

  Context();
  ~Context();
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  static std::shared_ptr<Context> make_standard() { return std::make_shared<Context>(); }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
  VarKind kind(int id) const { return kinds_.at(static_cast<std::size_t>(id)); }
  std::optional<int> find(std::string_view name) const;
  int id(std::string_view name) const;

  int add_parameter(const std::string& name);
  int add_aux(const std::string& name);
  bool is_parameter(int id) const { return kind(id) == VarKind::Parameter; }
  bool is_symbol(int id) const { return kind(id) == VarKind::Transcendental || kind(id) == VarKind::Algebraic; }
  bool is_algebraic(int id) const { return kind(id) == VarKind::Algebraic; }
  VarMask algebraic_mask() const { return algebraic_mask_; }
  VarMask parameter_mask() const { return parameter_mask_; }
  VarMask jet_mask() const;

  /// Interns a special-function symbol; returns its variable id. Arguments must be
  /// polynomials in base (non-algebraic) variables.
  int intern_symbol(SymbolKind kind, const Poly& arg, const Poly& constant = Poly());
  const SymbolDef* symbol(int id) const;
  const std::vector<int>& symbols() const { return symbol_ids_; }

  /// Rewrites every algebraic symbol power at or above its relation degree.
  Poly reduce(const Poly& p) const;

  /// Denominator atoms: primitive polynomials with positive leading coefficient.
  int intern_atom(const Poly& primitive);
  const Poly& atom(int id) const { return atoms_.at(static_cast<std::size_t>(id)); }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  /// Variable id when the atom is a single variable, else -1.
  int atom_var(int id) const { return atom_vars_.at(static_cast<std::size_t>(id)); }

  /// Cache slot for symbol partial derivatives (owned here, computed in normal_form.cpp).
  std::map<std::pair<int, int>, std::unique_ptr<NormalForm>>& partial_cache() { return partial_cache_; }

  std::string poly_str(const Poly& p) const;

 private:
  int push_var(std::string name, VarKind kind);
  const Poly& power_reduction(int sym, int e) const;

  std::deque<std::string> names_;  // deques keep references stable while interning
  std::vector<VarKind> kinds_;
  std::map<std::string, int, std::less<>> by_name_;
  std::deque<std::optional<SymbolDef>> symbol_defs_;
  std::vector<int> symbol_ids_;
  VarMask algebraic_mask_ = 0;
  VarMask parameter_mask_ = 0;
  std::deque<Poly> atoms_;
  std::vector<int> atom_vars_;
  mutable std::map<int, std::vector<Poly>> power_red_;
  std::map<std::pair<int, int>, std::unique_ptr<NormalForm>> partial_cache_;
};

using ContextPtr = std::shared_ptr<Context>;

}  // namespace hypsym
