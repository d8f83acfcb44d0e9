#pragma once

// Double-precision oracle: consistent random points for every variable and
// interned symbol, evaluation of normal forms and expression DAGs, and
// finite-difference checks of the symbol derivative rules.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hypsym/expr.hpp"

namespace hypsym {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SamplePoint {
  std::vector<double> value;  // indexed by variable id, sized kMaxVars
  std::vector<char> assigned;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> relation_residuals;

  double at(int id) const;
};

/// Draws base variables from [1/2, 2] U [-2, -1/2], then sets every interned
/// symbol consistently (largest real cubic root, positive square roots,
/// c := P^2 - 4W^3 for the first omega). Redraws up to 100 times when a
/// square root or logarithm argument comes out non-positive.
SamplePoint sample_point(const Context& ctx, std::uint64_t seed, const std::map<int, double>& pinned = {});

struct NumericValue {
  double value = 0;
  double scale = 0;  // magnitude of the evaluation with all signs made positive
  double relative() const;
};

NumericValue eval(const NormalForm& e, const SamplePoint& p);
/// Evaluates the DAG directly (special functions computed from their
/// evaluated arguments; omega/omega' read from the point).
NumericValue eval(const Expr& e, const SamplePoint& p, Context& ctx);

struct NumericVerdict {
  bool zero_like = true;
  double max_relative = 0;
  int points = 0;
  int nonzero_points = 0;  // relative residual above tol
};

NumericVerdict numeric_zero(const NormalForm& e, int n, double tol, std::uint64_t seed,
                            const std::map<int, double>& pinned = {});
NumericVerdict numeric_zero(const Expr& e, Context& ctx, int n, double tol, std::uint64_t seed,
                            const std::map<int, double>& pinned = {});

/// Real roots of c3 s^3 + c2 s^2 + c1 s + c0 in increasing order.
std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0);
/// Root of 2s^3 + 3A s^2 - A^3 + K: the largest, or the one nearest `near`.
double cubic_symbol_value(double A, double K);
double cubic_symbol_value_near(double A, double K, double near);

struct DerivativeCheck {
  std::string symbol;
  std::string variable;
  int points = 0;
  double max_relative_error = 0;
};

/// Central differences (step h) of a symbol in one base variable, following
/// the sampled branch, against the exact rule.
DerivativeCheck check_symbol_derivative(Context& ctx, int sym, int var, int points, std::uint64_t seed,
                                        double h = 1e-6);

}  // namespace hypsym
