#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace orbitspace {

// Arbitrary-precision rational scalar. Thin value wrapper around GMP's
// mpq_class: gmpxx returns expression templates from its operators, which do
// not mix with Eigen or with std::map value semantics, so every operation
// here returns a plain canonicalized value.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}
  Rational(long n) : v_(static_cast<long>(n)) {}
  Rational(long num, long den);
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  // Accepts "12", "-3/4", "+7/2". Returns nullopt on malformed input.
  static std::optional<Rational> parse(const std::string& text);

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  Rational abs() const;
  double to_double() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  Rational pow(unsigned e) const;
  Rational inverse() const;

  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.v_ + b.v_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.v_ - b.v_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.v_ * b.v_));
  }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational& operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
  }
  Rational& operator/=(const Rational& o);

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class v_;
};

// Best rational approximation of x with denominator <= max_denominator,
// found by continued fractions. Returns nullopt when no convergent within
// the bound reproduces x to rel_tol * max(1, |x|).
std::optional<Rational> rationalize(double x, long max_denominator, double rel_tol);

}  // namespace orbitspace

namespace Eigen {

template <>
struct NumTraits<orbitspace::Rational> : GenericNumTraits<orbitspace::Rational> {
  using Real = orbitspace::Rational;
  using NonInteger = orbitspace::Rational;
  using Nested = orbitspace::Rational;
  using Literal = long;
  static inline Real epsilon() { return orbitspace::Rational(0); }
  static inline Real dummy_precision() { return orbitspace::Rational(0); }
  static inline int digits10() { return 0; }
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 40,
    MulCost = 40,
  };
};

}  // namespace Eigen
