#pragma once

// Immutable expression DAG over jet variables, parameters and special
// function symbols. Builders fold constants and flatten sums/products but do
// no other simplification; normalize() is the canonical zero test.

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hypsym/normal_form.hpp"

namespace hypsym {

enum class ExprOp { Const, Var, Sym, Add, Mul, Pow };

struct ExprNode;

class Expr {
 public:
  Expr();  // zero
  static Expr constant(const Rational& c);
  static Expr var(int id);
  static Expr symbol(SymbolKind kind, std::vector<Expr> args);
  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr pow(const Expr& base, int n);

  ExprOp op() const;
  const Rational& value() const;
  int var_id() const;
  SymbolKind symbol_kind() const;
  int exponent() const;
  const std::vector<Expr>& args() const;
  /// Base variables the expression depends on.
  VarMask free_vars() const;
  std::size_t hash() const;
  const ExprNode* node() const { return node_.get(); }
  std::size_t dag_size() const;

  bool is_const() const { return op() == ExprOp::Const; }
  bool is_zero() const { return is_const() && value() == 0; }
  bool is_one() const { return is_const() && value() == 1; }

  friend bool structurally_equal(const Expr& a, const Expr& b);

  friend Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
  friend Expr operator/(const Expr& a, const Expr& b) { return mul({a, pow(b, -1)}); }
  Expr operator-() const { return mul({constant(-1), *this}); }

 private:
  friend struct ExprFactory;
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprOp op = ExprOp::Const;
  Rational value;
  int var = -1;
  SymbolKind sym = SymbolKind::Exp;
  int exponent = 0;
  std::vector<Expr> args;
  VarMask free = 0;
  std::size_t hash = 0;
};

inline Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

/// Memo for repeated differentiation of a shared DAG.
class DiffCache {
 public:
  explicit DiffCache(Context& ctx) : ctx_(&ctx) {}
  Expr diff(const Expr& e, int var);
  Context& context() const { return *ctx_; }

 private:
  struct Key {
    const ExprNode* node;
    int var;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<const void*>()(k.node) ^ (static_cast<std::size_t>(k.var) * 0x9e3779b97f4a7c15ULL);
    }
  };
  Context* ctx_;
  std::unordered_map<Key, std::pair<Expr, Expr>, KeyHash> memo_;  // key node kept alive in .first
};

/// Partial derivative treating all other base variables as independent.
Expr diff(const Expr& e, int var, Context& ctx);

NormalForm normalize(const Expr& e, Context& ctx);
bool is_zero(const Expr& e, Context& ctx);
/// Interns every special-function node of `e` without normalizing the whole DAG.
void intern_symbols(const Expr& e, Context& ctx);

/// Rebuilds an expression from a normal form (numerator over denominator atoms).
Expr to_expr(const NormalForm& nf);

struct Binding {
  Expr target;  // a variable or a symbol node
  Expr value;
};

class CyclicBindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simultaneous substitution. Self-references (u -> u - b) are allowed; cycles
/// through two or more bindings are rejected.
Expr substitute(const Expr& e, const std::vector<Binding>& bindings);

/// Canonical text in the input grammar.
std::string to_string(const Expr& e, const Context& ctx);

/// Shorthand builders for the standard special functions.
Expr exp_of(const Expr& arg);
Expr ln_of(const Expr& arg);
Expr sqrt_of(const Expr& arg);
Expr cubic_of(const Expr& arg, const Expr& constant);
Expr f_of(const Expr& arg);
Expr fa_of(const Expr& arg, const Context& ctx);
Expr omega_of(const Expr& arg);
Expr omega_prime_of(const Expr& arg);

}  // namespace hypsym
