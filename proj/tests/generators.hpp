#pragma once

// Hand-rolled random expression generators for the property tests.

#include <random>
#include <vector>

#include "hypsym/expr.hpp"

namespace hypsym::gen {

class ExprGen {
 public:
  ExprGen(Context& ctx, std::uint64_t seed, std::vector<int> vars, bool symbols = true)
      : ctx_(ctx), rng_(seed), vars_(std::move(vars)), symbols_(symbols) {}

  Expr leaf() {
    if (pick(3) == 0) return Expr::constant(Rational(static_cast<int>(pick(7)) - 3, static_cast<int>(pick(3)) + 1));
    return Expr::var(vars_[pick(vars_.size())]);
  }

  /// Polynomial-ish argument for special functions: a variable plus a small shift.
  Expr poly_arg() {
    Expr v = Expr::var(vars_[pick(vars_.size())]);
    return pick(2) ? v : v + Expr::constant(static_cast<int>(pick(3)) + 1);
  }

  Expr symbol() {
    Expr v = Expr::var(vars_[pick(vars_.size())]);
    switch (pick(5)) {
      case 0: return exp_of(Expr::constant(static_cast<int>(pick(5)) - 2) * v);
      case 1: return f_of(v);
      case 2: return sqrt_of(v);
      case 3: return ln_of(v);
      default: return fa_of(v, ctx_);
    }
  }

  Expr operator()(int depth) {
    if (depth <= 0) return symbols_ && pick(4) == 0 ? symbol() : leaf();
    switch (pick(6)) {
      case 0:
      case 1: return (*this)(depth - 1) + (*this)(depth - 1);
      case 2:
      case 3: return (*this)(depth - 1) * (*this)(depth - 1);
      case 4: return Expr::pow((*this)(depth - 1), static_cast<int>(pick(3)) + 1);
      default: {
        // Denominators stay simple so they never vanish identically.
        Expr d = Expr::var(vars_[pick(vars_.size())]) + Expr::constant(static_cast<int>(pick(3)) + 1);
        return (*this)(depth - 1) / d;
      }
    }
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  Context& ctx_;
  std::mt19937_64 rng_;
  std::vector<int> vars_;
  bool symbols_;
};

}  // namespace hypsym::gen
