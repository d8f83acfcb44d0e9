#include "hypsym/parser.hpp"

#include <cctype>
#include <charconv>

namespace hypsym {

int jet_var_from_name(std::string_view name) {
  if (name == "u" || name == "u0") return Context::ux(0);
  if (name == "uy") return Context::vy(1);
  if (name == "uyy") return Context::vy(2);
  if (name == "uyyy") return Context::vy(3);
  auto digits = [](std::string_view s, int lo, int hi) {
    if (s.empty() || s.size() > 2 || (s.size() == 2 && s[0] == '0')) return -1;
    int v = 0;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
      v = v * 10 + (c - '0');
    }
    return v >= lo && v <= hi ? v : -1;
  };
  if (name.size() >= 2 && name[0] == 'u') {
    int k = digits(name.substr(1), 1, Context::kMaxXJet);
    if (k > 0) return Context::ux(k);
  }
  if (name.size() >= 2 && name[0] == 'v') {
    int k = digits(name.substr(1), 1, Context::kMaxYJet);
    if (k > 0) return Context::vy(k);
  }
  return -1;
}

namespace {

class Parser {
 public:
  Parser(std::string_view s, const Context& ctx) : s_(s), ctx_(ctx) {}

  Expr parse() {
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr sum() {
    std::vector<Expr> terms{product()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(product());
      } else if (accept('-')) {
        terms.push_back(-product());
      } else {
        break;
      }
    }
    return Expr::add(std::move(terms));
  }

  Expr product() {
    std::vector<Expr> fs{unary()};
    for (;;) {
      if (accept('*')) {
        fs.push_back(unary());
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        fs.push_back(Expr::pow(d, -1));
      } else {
        break;
      }
    }
    return Expr::mul(std::move(fs));
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = primary();
    if (accept('^')) {
      std::size_t at = pos_;
      Expr ex = unary();
      if (!ex.is_const() || ex.value().get_den() != 1 || !ex.value().get_num().fits_sint_p()) {
        throw ParseError("exponent must be an integer", at);
      }
      long n = ex.value().get_num().get_si();
      if (n > 1000 || n < -1000) throw ParseError("exponent too large", at);
      if (b.is_zero() && n < 0) throw ParseError("division by zero", at);
      return Expr::pow(b, static_cast<int>(n));
    }
    return b;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '.' || std::isalpha(static_cast<unsigned char>(s_[pos_])))) {
        throw ParseError("malformed number", start);
      }
      return Expr::constant(Rational(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') return call(name, start);
      if (int j = jet_var_from_name(name); j >= 0) return Expr::var(j);
      auto id = ctx_.find(name);
      if (!id || ctx_.is_symbol(*id)) throw ParseError("unknown identifier '" + std::string(name) + "'", start);
      return Expr::var(*id);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr call(std::string_view name, std::size_t at) {
    expect('(');
    std::vector<Expr> args{sum()};
    while (accept(',')) args.push_back(sum());
    expect(')');
    auto want = [&](std::size_t n) {
      if (args.size() != n) {
        throw ParseError(std::string(name) + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"), at);
      }
    };
    if (name == "cubic") {
      want(2);
      return cubic_of(args[0], args[1]);
    }
    want(1);
    if (name == "exp") return exp_of(args[0]);
    if (name == "ln") return ln_of(args[0]);
    if (name == "sqrt") return sqrt_of(args[0]);
    if (name == "f") return f_of(args[0]);
    if (name == "fa") return fa_of(args[0], ctx_);
    if (name == "w") return omega_of(args[0]);
    if (name == "wp") return omega_prime_of(args[0]);
    throw ParseError("unknown function '" + std::string(name) + "'", at);
  }

  std::string_view s_;
  const Context& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const Context& ctx) {
  Parser p(text, ctx);
  return p.parse();
}

}  // namespace hypsym
