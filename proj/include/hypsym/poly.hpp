#pragma once

// Sparse distributed multivariate polynomials over Q.
//
// A monomial is a fixed-width exponent vector indexed by variable id; the
// variable universe is owned by a Context (see context.hpp). Terms are kept
// sorted in decreasing graded-lexicographic order, variable 0 most
// significant, with no zero coefficients.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace hypsym {

using Rational = mpq_class;
using Integer = mpz_class;

inline constexpr std::size_t kMaxVars = 64;
using VarMask = std::uint64_t;

class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Monomial {
  std::array<std::uint8_t, kMaxVars> exp{};
  std::uint16_t degree = 0;

  static Monomial var(int id, int power = 1);

  int operator[](int id) const { return exp[static_cast<std::size_t>(id)]; }
  bool is_one() const { return degree == 0; }
  VarMask mask() const;

  /// Sets the exponent of `id`, keeping the cached degree in sync.
  void set(int id, int power);

  bool divides(const Monomial& other) const;
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.degree == b.degree && a.exp == b.exp;
  }
};

/// Strict "a before b" in the descending term order.
bool mono_greater(const Monomial& a, const Monomial& b);
int mono_compare(const Monomial& a, const Monomial& b);

Monomial operator*(const Monomial& a, const Monomial& b);
/// Requires b | a.
Monomial operator/(const Monomial& a, const Monomial& b);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

struct Term {
  Monomial mono;
  Rational coef;
};

class Poly {
 public:
  Poly() = default;
  explicit Poly(const Rational& c);
  static Poly constant(const Rational& c) { return Poly(c); }
  static Poly var(int id, int power = 1);
  static Poly term(const Monomial& m, const Rational& c);
  /// Takes arbitrary terms; sorts and combines like monomials.
  static Poly from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Rational constant_value() const;
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }
  VarMask mask() const;
  int degree_in(int id) const;
  int min_degree_in(int id) const;
  int total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree; }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  Poly mul_monomial(const Monomial& m, const Rational& c) const;

  Poly pow(unsigned n) const;
  Poly partial(int id) const;

  /// Exact division test; on success returns true and stores the quotient.
  bool divides_into(const Poly& numerator, Poly& quotient) const;
  /// Divides every term by var^k (requires min_degree_in(var) >= k).
  Poly shift_down(int id, int k) const;

  /// Rational content with the sign making the leading coefficient positive;
  /// `*this == content * primitive` with primitive having coprime integer coefficients.
  std::pair<Rational, Poly> content_primitive() const;

  /// Splits by powers of `id`: result[k] is the coefficient of id^k.
  std::vector<Poly> coefficients_in(int id) const;

  /// Replaces variable `id` by `value`.
  Poly substitute(int id, const Poly& value) const;

  double eval(std::span<const double> values) const;
  /// Largest |term| at the point, used as a residual scale.
  double eval_max_term(std::span<const double> values) const;

  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Lexicographic comparison on the term sequence; a total order used for canonical sorting.
  friend int compare(const Poly& a, const Poly& b);

 private:
  std::vector<Term> terms_;
};

/// Upper bound on the number of terms any single polynomial may hold.
void set_term_limit(std::size_t limit);
std::size_t term_limit();

}  // namespace hypsym
