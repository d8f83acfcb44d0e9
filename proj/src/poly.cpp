#include "hypsym/poly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <map>
#include <unordered_map>

namespace hypsym {

namespace {

std::atomic<std::size_t> g_term_limit{2'000'000};

void check_size(std::size_t n) {
  if (n > g_term_limit.load(std::memory_order_relaxed)) {
    throw SizeLimitError("polynomial exceeds the configured term limit (" + std::to_string(n) + " terms)");
  }
}

}  // namespace

void set_term_limit(std::size_t limit) { g_term_limit = limit; }
std::size_t term_limit() { return g_term_limit; }

Monomial Monomial::var(int id, int power) {
  Monomial m;
  m.set(id, power);
  return m;
}

void Monomial::set(int id, int power) {
  if (id < 0 || static_cast<std::size_t>(id) >= kMaxVars) throw std::out_of_range("variable id out of range");
  if (power < 0 || power > 255) throw SizeLimitError("exponent out of range: " + std::to_string(power));
  auto& slot = exp[static_cast<std::size_t>(id)];
  degree = static_cast<std::uint16_t>(degree - slot + power);
  slot = static_cast<std::uint8_t>(power);
}

VarMask Monomial::mask() const {
  VarMask m = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (exp[i]) m |= VarMask{1} << i;
  }
  return m;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree > other.degree) return false;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (exp[i] > other.exp[i]) return false;
  }
  return true;
}

int mono_compare(const Monomial& a, const Monomial& b) {
  if (a.degree != b.degree) return a.degree > b.degree ? 1 : -1;
  int c = std::memcmp(a.exp.data(), b.exp.data(), kMaxVars);
  return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

bool mono_greater(const Monomial& a, const Monomial& b) { return mono_compare(a, b) > 0; }

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned s = unsigned(a.exp[i]) + b.exp[i];
    if (s > 255) throw SizeLimitError("exponent overflow in monomial product");
    r.exp[i] = static_cast<std::uint8_t>(s);
  }
  r.degree = static_cast<std::uint16_t>(a.degree + b.degree);
  return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<std::uint8_t>(a.exp[i] - b.exp[i]);
  r.degree = static_cast<std::uint16_t>(a.degree - b.degree);
  return r;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < kMaxVars; i += 8) {
    std::uint64_t w;
    std::memcpy(&w, m.exp.data() + i, 8);
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Poly::Poly(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

Poly Poly::var(int id, int power) { return term(Monomial::var(id, power), 1); }

Poly Poly::term(const Monomial& m, const Rational& c) {
  Poly p;
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return mono_greater(a.mono, b.mono); });
  Poly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
  check_size(p.terms_.size());
  return p;
}

Rational Poly::constant_value() const {
  if (terms_.empty()) return 0;
  if (!terms_.back().mono.is_one()) return 0;
  return terms_.back().coef;
}

VarMask Poly::mask() const {
  VarMask m = 0;
  for (const auto& t : terms_) m |= t.mono.mask();
  return m;
}

int Poly::degree_in(int id) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono[id]);
  return d;
}

int Poly::min_degree_in(int id) const {
  if (terms_.empty()) return 0;
  int d = 255;
  for (const auto& t : terms_) d = std::min(d, t.mono[id]);
  return d;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

namespace {

template <bool Subtract>
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = mono_compare(a[i].mono, b[j].mono);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(b[j++]);
      if constexpr (Subtract) out.back().coef = -out.back().coef;
    } else {
      Rational s = Subtract ? Rational(a[i].coef - b[j].coef) : Rational(a[i].coef + b[j].coef);
      if (s != 0) out.push_back({a[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) {
    out.push_back(b[j]);
    if constexpr (Subtract) out.back().coef = -out.back().coef;
  }
  return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge<false>(terms_, o.terms_);
  check_size(terms_.size());
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge<true>(terms_, o.terms_);
  check_size(terms_.size());
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else if (c != 1) {
    for (auto& t : terms_) t.coef *= c;
  }
  return *this;
}

Poly Poly::mul_monomial(const Monomial& m, const Rational& c) const {
  Poly r;
  if (c == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.terms_.empty() || b.terms_.empty()) return {};
  const Poly& small = a.size() <= b.size() ? a : b;
  const Poly& big = a.size() <= b.size() ? b : a;
  if (small.size() == 1) return big.mul_monomial(small.terms_[0].mono, small.terms_[0].coef);
  if (static_cast<double>(small.size()) * static_cast<double>(big.size()) > 4.0 * static_cast<double>(term_limit()) * 50) {
    throw SizeLimitError("polynomial product too large");
  }
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(std::min<std::size_t>(small.size() * big.size(), std::size_t{1} << 20));
  Rational tmp;
  for (const auto& s : small.terms_) {
    for (const auto& t : big.terms_) {
      mpq_mul(tmp.get_mpq_t(), s.coef.get_mpq_t(), t.coef.get_mpq_t());
      auto [it, inserted] = acc.try_emplace(s.mono * t.mono, tmp);
      if (!inserted) it->second += tmp;
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) out.push_back({m, std::move(c)});
  }
  std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return mono_greater(x.mono, y.mono); });
  Poly r;
  r.terms_ = std::move(out);
  check_size(r.terms_.size());
  return r;
}

Poly Poly::pow(unsigned n) const {
  Poly result(1);
  Poly base = *this;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

Poly Poly::partial(int id) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    int e = t.mono[id];
    if (e == 0) continue;
    Monomial m = t.mono;
    m.set(id, e - 1);
    out.push_back({m, t.coef * e});
  }
  // Lowering the same exponent in every surviving term preserves their order.
  Poly r;
  r.terms_ = std::move(out);
  return r;
}

bool Poly::divides_into(const Poly& numerator, Poly& quotient) const {
  if (terms_.empty()) throw std::domain_error("division by zero polynomial");
  quotient = Poly();
  if (numerator.is_zero()) return true;
  const Term& lt = terms_.front();
  if (terms_.size() == 1) {
    std::vector<Term> q;
    q.reserve(numerator.size());
    for (const auto& t : numerator.terms_) {
      if (!lt.mono.divides(t.mono)) return false;
      q.push_back({t.mono / lt.mono, t.coef / lt.coef});
    }
    quotient.terms_ = std::move(q);
    return true;
  }
  if (!lt.mono.divides(numerator.leading().mono)) return false;
  VarMask vm = mask();
  for (int id = 0; vm; ++id, vm >>= 1) {
    if ((vm & 1u) && degree_in(id) > numerator.degree_in(id)) return false;
  }
  auto cmp = [](const Monomial& x, const Monomial& y) { return mono_greater(x, y); };
  std::map<Monomial, Rational, decltype(cmp)> rem(cmp);
  for (const auto& t : numerator.terms_) rem.emplace(t.mono, t.coef);
  std::vector<Term> q;
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!lt.mono.divides(it->first)) return false;
    Monomial qm = it->first / lt.mono;
    Rational qc = it->second / lt.coef;
    rem.erase(it);
    for (std::size_t k = 1; k < terms_.size(); ++k) {
      Monomial m = terms_[k].mono * qm;
      Rational c = terms_[k].coef * qc;
      auto [jt, inserted] = rem.try_emplace(m, -c);
      if (!inserted) {
        jt->second -= c;
        if (jt->second == 0) rem.erase(jt);
      }
    }
    q.push_back({qm, std::move(qc)});
    check_size(q.size());
  }
  quotient.terms_ = std::move(q);
  return true;
}

Poly Poly::shift_down(int id, int k) const {
  if (k == 0) return *this;
  Poly r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m = t.mono;
    m.set(id, t.mono[id] - k);
    r.terms_.push_back({m, t.coef});
  }
  // Uniform shift of one variable preserves relative graded-lex order.
  return r;
}

std::pair<Rational, Poly> Poly::content_primitive() const {
  if (terms_.empty()) return {Rational(0), Poly()};
  Integer num_gcd = 0;
  Integer den_lcm = 1;
  for (const auto& t : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coef.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coef.get_den_mpz_t());
  }
  Rational content(num_gcd, den_lcm);
  content.canonicalize();
  if (terms_.front().coef < 0) content = -content;
  Poly prim = *this;
  Rational inv = 1 / content;
  prim *= inv;
  return {content, prim};
}

std::vector<Poly> Poly::coefficients_in(int id) const {
  std::vector<Poly> out(static_cast<std::size_t>(degree_in(id)) + 1);
  std::vector<std::vector<Term>> buckets(out.size());
  for (const auto& t : terms_) {
    int e = t.mono[id];
    Monomial m = t.mono;
    m.set(id, 0);
    buckets[static_cast<std::size_t>(e)].push_back({m, t.coef});
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = from_terms(std::move(buckets[k]));
  return out;
}

Poly Poly::substitute(int id, const Poly& value) const {
  std::vector<Poly> cs = coefficients_in(id);
  Poly r;
  Poly power(1);
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (k) power = power * value;
    if (!cs[k].is_zero()) r += cs[k] * power;
  }
  return r;
}

double Poly::eval(std::span<const double> values) const {
  double s = 0;
  for (const auto& t : terms_) {
    double v = t.coef.get_d();
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (t.mono.exp[i]) v *= std::pow(values[i], t.mono.exp[i]);
    }
    s += v;
  }
  return s;
}

double Poly::eval_max_term(std::span<const double> values) const {
  double mx = 0;
  for (const auto& t : terms_) {
    double v = t.coef.get_d();
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (t.mono.exp[i]) v *= std::pow(values[i], t.mono.exp[i]);
    }
    mx = std::max(mx, std::fabs(v));
  }
  return mx;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) return false;
  }
  return true;
}

int compare(const Poly& a, const Poly& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = mono_compare(a.terms_[i].mono, b.terms_[i].mono);
    if (c) return c;
    int d = cmp(a.terms_[i].coef, b.terms_[i].coef);
    if (d) return d > 0 ? 1 : -1;
  }
  if (a.terms_.size() == b.terms_.size()) return 0;
  return a.terms_.size() > b.terms_.size() ? 1 : -1;
}

}  // namespace hypsym
