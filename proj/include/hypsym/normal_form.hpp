#pragma once

// Canonical elements of Q(base)[algebraic symbols]/(relations).
//
// A NormalForm is num / den where num is a polynomial in base variables and
// algebraic symbols with every symbol degree below its relation degree, and
// den is a product of interned denominator atoms (no algebraic symbols, no
// numeric content). num is never divisible by an atom that occurs in den.

#include <functional>
#include <string>
#include <vector>

#include "hypsym/context.hpp"

namespace hypsym {

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NormalForm {
 public:
  NormalForm() = default;
  explicit NormalForm(Context& ctx) : ctx_(&ctx) {}
  NormalForm(Context& ctx, const Rational& c) : ctx_(&ctx), num_(c) {}
  /// Reduces `p` modulo the symbol relations.
  static NormalForm from_poly(Context& ctx, const Poly& p);
  static NormalForm variable(Context& ctx, int id);
  static NormalForm fraction(Context& ctx, const Poly& num, const Poly& den);

  Context& context() const { return *ctx_; }
  Context* context_ptr() const { return ctx_; }
  const Poly& num() const { return num_; }
  const std::vector<DenFactor>& den() const { return den_; }
  Poly den_poly() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  VarMask mask() const;
  std::size_t term_count() const { return num_.size(); }

  NormalForm operator-() const;
  friend NormalForm operator+(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator-(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator*(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator/(const NormalForm& a, const NormalForm& b);
  NormalForm& operator+=(const NormalForm& o) { return *this = *this + o; }
  NormalForm& operator-=(const NormalForm& o) { return *this = *this - o; }
  NormalForm& operator*=(const NormalForm& o) { return *this = *this * o; }
  NormalForm scaled(const Rational& c) const;
  NormalForm times_poly(const Poly& p) const;

  NormalForm inverse() const;
  NormalForm pow(int n) const;

  /// Derivation given by its values on variables; `dvar` is consulted only
  /// for variables that occur (numerator or denominator atoms).
  NormalForm derive(const std::function<NormalForm(int)>& dvar) const;
  /// Partial derivative in a base variable with the symbol chain rule.
  NormalForm partial(int var) const;

  std::string str() const;

  /// Equality as elements of the ring. Representations of equal elements can
  /// differ when their denominators were factored against different atoms.
  friend bool operator==(const NormalForm& a, const NormalForm& b) { return (a - b).is_zero(); }
  bool identical(const NormalForm& o) const { return num_ == o.num_ && den_ == o.den_; }
  friend bool operator!=(const NormalForm& a, const NormalForm& b) { return !(a == b); }

 private:
  NormalForm(Context* ctx, Poly num, std::vector<DenFactor> den);
  void cancel();

  Context* ctx_ = nullptr;
  Poly num_;
  std::vector<DenFactor> den_;
};

/// Factors a nonzero base polynomial into content times interned atoms.
std::pair<Rational, std::vector<DenFactor>> factor_atoms(Context& ctx, const Poly& p);

/// d(symbol)/d(var) for a base variable `var`, as a normal form.
const NormalForm& symbol_partial(Context& ctx, int sym, int var);

/// Coefficient of var^k in the numerator after clearing the (var-free) denominator,
/// with the denominator reattached. Throws when var occurs in the denominator or
/// in a symbol argument.
NormalForm coefficient_of(const NormalForm& e, int var, int k);

class NotPolynomialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypsym
