#include "orbitspace/rational.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace orbitspace {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

std::optional<Rational> Rational::parse(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.erase(s.begin());
  if (s.empty()) return std::nullopt;
  mpq_class v;
  if (v.set_str(s, 10) != 0) return std::nullopt;
  if (sgn(v.get_den()) == 0) return std::nullopt;
  v.canonicalize();
  return Rational(v);
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(v_))); }

Rational Rational::pow(unsigned e) const {
  mpq_class r;
  mpz_pow_ui(r.get_num_mpz_t(), v_.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), v_.get_den_mpz_t(), e);
  return Rational(r);
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("Rational: inverse of zero");
  return Rational(mpq_class(1 / v_));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("Rational: division by zero");
  return Rational(mpq_class(a.v_ / b.v_));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

std::string Rational::str() const { return v_.get_str(); }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.v_.get_str(); }

std::optional<Rational> rationalize(double x, long max_denominator, double rel_tol) {
  if (!std::isfinite(x) || max_denominator < 1) return std::nullopt;
  const double tol = rel_tol * std::max(1.0, std::abs(x));
  const double ax = std::abs(x);

  long prev_num = 0, prev_den = 1;
  long num = 1, den = 0;
  double y = ax;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(y);
    if (fl > static_cast<double>(std::numeric_limits<long>::max()) / 2) break;
    const long term = static_cast<long>(fl);
    const long next_num = term * num + prev_num;
    const long next_den = term * den + prev_den;
    if (next_den > max_denominator || next_num < 0 || next_den < 0) break;
    prev_num = num;
    prev_den = den;
    num = next_num;
    den = next_den;
    if (den > 0 && std::abs(ax - static_cast<double>(num) / static_cast<double>(den)) <= tol) {
      return Rational(x < 0 ? -num : num, den);
    }
    const double frac = y - fl;
    if (frac < 1e-18) break;
    y = 1.0 / frac;
  }
  if (den > 0 && std::abs(ax - static_cast<double>(num) / static_cast<double>(den)) <= tol) {
    return Rational(x < 0 ? -num : num, den);
  }
  return std::nullopt;
}

}  // namespace orbitspace
