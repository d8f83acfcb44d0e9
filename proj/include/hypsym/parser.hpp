#pragma once

// Text grammar for expressions:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?        exponent must fold to an integer
//   primary := integer | name | name '(' sum (',' sum)* ')' | '(' sum ')'
// Functions: exp ln sqrt f fa cubic(arg, K) w wp. Jet names: u u0..u10,
// uy uyy uyyy (also v1 v2 v3) v4 v5 v6. Other names must exist in the context.

#include <stdexcept>
#include <string>
#include <string_view>

#include "hypsym/expr.hpp"

namespace hypsym {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at column " + std::to_string(pos + 1)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

Expr parse_expr(std::string_view text, const Context& ctx);

/// Jet variable id for a name like "u3" or "uyy", or -1.
int jet_var_from_name(std::string_view name);

}  // namespace hypsym
