#include "opcalc/polynomial.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "opcalc/error.hpp"

namespace opcalc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::summability: return "summability";
    case ErrorKind::construction: return "construction";
    case ErrorKind::unsupported: return "unsupported";
  }
  return "unknown";
}

RealPolynomial::RealPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  normalize();
}

RealPolynomial::RealPolynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) {
  normalize();
}

void RealPolynomial::normalize() {
  for (auto& c : coeffs_) c.canonicalize();
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

RealPolynomial RealPolynomial::from_doubles(std::span<const double> coeffs) {
  std::vector<Rational> out;
  out.reserve(coeffs.size());
  for (double c : coeffs) {
    if (!std::isfinite(c)) fail(ErrorKind::input, "non-finite polynomial coefficient");
    out.emplace_back(c);
  }
  return RealPolynomial(std::move(out));
}

RealPolynomial RealPolynomial::constant(const Rational& c) { return RealPolynomial({c}); }

RealPolynomial RealPolynomial::monomial(std::size_t k, const Rational& c) {
  std::vector<Rational> v(k + 1, Rational(0));
  v[k] = c;
  return RealPolynomial(std::move(v));
}

Rational RealPolynomial::coeff(std::size_t k) const {
  return k < coeffs_.size() ? coeffs_[k] : Rational(0);
}

const Rational& RealPolynomial::leading() const {
  if (coeffs_.empty()) fail(ErrorKind::input, "leading coefficient of zero polynomial");
  return coeffs_.back();
}

Rational RealPolynomial::eval(const Rational& t) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double RealPolynomial::eval(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + it->get_d();
  return acc;
}

std::complex<double> RealPolynomial::eval(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + it->get_d();
  return acc;
}

std::complex<long double> RealPolynomial::eval(std::complex<long double> z) const {
  std::complex<long double> acc = 0.0L;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * z + static_cast<long double>(it->get_d());
  return acc;
}

RealPolynomial RealPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
  return RealPolynomial(std::move(d));
}

RealPolynomial RealPolynomial::rescaled(const Rational& c) const {
  std::vector<Rational> out(coeffs_.size());
  Rational pw = 1;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    out[k] = coeffs_[k] * pw;
    pw *= c;
  }
  return RealPolynomial(std::move(out));
}

namespace {

void taylor_shift_one(std::vector<mpz_class>& c) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) c[j] += c[j + 1];
}

// sign changes of (1 + x)^n q(1 / (1 + x)), an upper bound for the roots in (0,1)
int descartes_unit(const std::vector<mpz_class>& q) {
  std::vector<mpz_class> r(q.rbegin(), q.rend());
  taylor_shift_one(r);
  int changes = 0, last = 0;
  for (const auto& v : r) {
    const int s = sgn(v);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

mpz_class sum_of(const std::vector<mpz_class>& q) {
  mpz_class s = 0;
  for (const auto& v : q) s += v;
  return s;
}

}  // namespace

std::optional<bool> positive_on_unit_interval(const RealPolynomial& p, int max_depth) {
  if (p.is_zero()) return false;
  mpz_class lcm_den = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> a;
  a.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) a.emplace_back(c.get_num() * (lcm_den / c.get_den()));
  if (sgn(a.front()) <= 0 || sgn(sum_of(a)) <= 0) return false;

  const std::size_t n = a.size() - 1;
  std::vector<std::pair<std::vector<mpz_class>, int>> stack;
  stack.emplace_back(std::move(a), 0);
  while (!stack.empty()) {
    auto [q, depth] = std::move(stack.back());
    stack.pop_back();
    if (descartes_unit(q) == 0) continue;
    if (depth >= max_depth) return std::nullopt;
    // left half 2^n q(x/2), right half its shift by one
    std::vector<mpz_class> left(q.size());
    for (std::size_t k = 0; k <= n; ++k) left[k] = q[k] << static_cast<mp_bitcnt_t>(n - k);
    if (sgn(sum_of(left)) <= 0) return false;
    std::vector<mpz_class> right = left;
    taylor_shift_one(right);
    stack.emplace_back(std::move(left), depth + 1);
    stack.emplace_back(std::move(right), depth + 1);
  }
  return true;
}

std::vector<double> RealPolynomial::to_doubles() const {
  std::vector<double> out(coeffs_.size());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k] = coeffs_[k].get_d();
  return out;
}

std::string RealPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    if (!first) os << " + ";
    os << coeffs_[k].get_str();
    if (k == 1) os << "*t";
    if (k > 1) os << "*t^" << k;
    first = false;
  }
  return os.str();
}

RealPolynomial& RealPolynomial::operator+=(const RealPolynomial& rhs) {
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  normalize();
  return *this;
}

RealPolynomial& RealPolynomial::operator-=(const RealPolynomial& rhs) {
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  normalize();
  return *this;
}

RealPolynomial& RealPolynomial::operator*=(const Rational& c) {
  for (auto& x : coeffs_) x *= c;
  normalize();
  return *this;
}

RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      if (b.coeffs_[j] != 0) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return RealPolynomial(std::move(out));
}

std::pair<RealPolynomial, RealPolynomial> divmod(const RealPolynomial& a,
                                                 const RealPolynomial& b) {
  if (b.is_zero()) fail(ErrorKind::input, "polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {RealPolynomial{}, a};
  std::vector<Rational> quo(a.degree() - db + 1, Rational(0));
  const Rational lead_inv = 1 / b.leading();
  for (int k = a.degree(); k >= db; --k) {
    Rational c = rem[k] * lead_inv;
    c.canonicalize();
    quo[k - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) rem[k - db + j] -= c * b.coeffs()[j];
  }
  rem.resize(db);
  return {RealPolynomial(std::move(quo)), RealPolynomial(std::move(rem))};
}

namespace {

RealPolynomial monic(const RealPolynomial& p) {
  if (p.is_zero()) return p;
  return p * (1 / p.leading());
}

// Arithmetic modulo a 61-bit prime, used only to certify square-freeness.
constexpr std::uint64_t kPrime = 2305843009213693951ULL;  // 2^61 - 1

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t reduce_mod(const mpz_class& z) {
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
  return mpz_fdiv_ui(z.get_mpz_t(), kPrime);
}

// Returns false when a denominator vanishes modulo the prime.
bool to_modular(const RealPolynomial& q, std::vector<std::uint64_t>& out) {
  out.assign(q.coeffs().size(), 0);
  for (std::size_t k = 0; k < q.coeffs().size(); ++k) {
    const std::uint64_t num = reduce_mod(q.coeffs()[k].get_num());
    const std::uint64_t den = reduce_mod(q.coeffs()[k].get_den());
    if (den == 0) return false;
    out[k] = mulmod(num, powmod(den, kPrime - 2));
  }
  return true;
}

void trim(std::vector<std::uint64_t>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

std::vector<std::uint64_t> modular_gcd(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a <- a mod b
    const std::uint64_t inv = powmod(b.back(), kPrime - 2);
    while (a.size() >= b.size() && !a.empty()) {
      const std::uint64_t c = mulmod(a.back(), inv);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t j = 0; j < b.size(); ++j) {
        const std::uint64_t t = mulmod(c, b[j]);
        a[shift + j] = (a[shift + j] + kPrime - t) % kPrime;
      }
      trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace

RealPolynomial gcd(const RealPolynomial& a, const RealPolynomial& b) {
  RealPolynomial x = a, y = b;
  while (!y.is_zero()) {
    auto r = divmod(x, y).second;
    x = std::move(y);
    y = monic(r);
  }
  return monic(x);
}

bool is_squarefree(const RealPolynomial& q) {
  if (q.degree() <= 1) return true;
  std::vector<std::uint64_t> qm, dm;
  if (to_modular(q, qm) && to_modular(q.derivative(), dm)) {
    trim(qm);
    // Degree must survive the reduction for the modular certificate to apply.
    if (static_cast<int>(qm.size()) - 1 == q.degree()) {
      auto g = modular_gcd(qm, dm);
      if (g.size() == 1) return true;
    }
  }
  return gcd(q, q.derivative()).degree() == 0;
}

std::vector<std::pair<RealPolynomial, int>> squarefree_decomposition(const RealPolynomial& q) {
  if (q.is_zero()) fail(ErrorKind::input, "square-free decomposition of zero polynomial");
  std::vector<std::pair<RealPolynomial, int>> out;
  if (q.degree() == 0) return out;
  if (is_squarefree(q)) {
    out.emplace_back(monic(q), 1);
    return out;
  }
  // Yun's algorithm.
  RealPolynomial dq = q.derivative();
  RealPolynomial a = gcd(q, dq);
  RealPolynomial b = divmod(q, a).first;
  RealPolynomial c = divmod(dq, a).first;
  RealPolynomial d = c - b.derivative();
  int k = 1;
  while (b.degree() > 0) {
    RealPolynomial fk = gcd(b, d);
    if (fk.degree() > 0) out.emplace_back(fk, k);
    b = divmod(b, fk).first;
    c = divmod(d, fk).first;
    d = c - b.derivative();
    ++k;
  }
  return out;
}

bool nonnegative_coeffs(const RealPolynomial& p) {
  return std::all_of(p.coeffs().begin(), p.coeffs().end(),
                     [](const Rational& c) { return c >= 0; });
}

bool strictly_dominates_zero(const RealPolynomial& p) {
  return !p.is_zero() && p.coeffs()[0] > 0 && nonnegative_coeffs(p);
}

RationalSeries::RationalSeries(RealPolynomial num, RealPolynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero() || den_.coeff(0) == 0)
    fail(ErrorKind::input, "rational series needs a denominator nonzero at the origin");
}

RationalSeries RationalSeries::polynomial(RealPolynomial p) {
  return RationalSeries(std::move(p), RealPolynomial::constant(1));
}

bool RationalSeries::is_polynomial() const {
  if (den_.degree() == 0) return true;
  return divmod(num_, den_).second.is_zero();
}

std::vector<Rational> RationalSeries::taylor(std::size_t count) const {
  std::vector<Rational> c(count, Rational(0));
  const Rational d0_inv = 1 / den_.coeff(0);
  const auto& d = den_.coeffs();
  for (std::size_t n = 0; n < count; ++n) {
    Rational acc = num_.coeff(n);
    const std::size_t lim = std::min<std::size_t>(n, d.size() - 1);
    for (std::size_t j = 1; j <= lim; ++j) acc -= d[j] * c[n - j];
    c[n] = acc * d0_inv;
    c[n].canonicalize();
  }
  return c;
}

Rational RationalSeries::at_one() const {
  Rational d = den_.eval(Rational(1));
  if (d == 0) fail(ErrorKind::input, "rational series has a pole at t = 1");
  Rational v = num_.eval(Rational(1)) / d;
  v.canonicalize();
  return v;
}

double RationalSeries::eval(double t) const { return num_.eval(t) / den_.eval(t); }

RationalSeries RationalSeries::reduced() const {
  RealPolynomial g = gcd(num_, den_);
  RealPolynomial n = num_.is_zero() ? num_ : divmod(num_, g).first;
  RealPolynomial d = divmod(den_, g).first;
  const Rational d0 = d.coeff(0);
  return RationalSeries(n * (1 / d0), d * (1 / d0));
}

RationalSeries operator*(const RationalSeries& a, const RationalSeries& b) {
  return RationalSeries(a.num_ * b.num_, a.den_ * b.den_);
}

}  // namespace opcalc
