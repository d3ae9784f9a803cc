#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitspace/rational.hpp"

namespace orbitspace {

// Exponent vector of a monomial; length always equals the variable count of
// the polynomial that owns it.
using Exponents = std::vector<int>;

int total_degree(const Exponents& e);

// Graded lexicographic order, descending variant: higher total degree first,
// ties broken by exponent of the earliest variable.
bool grlex_greater(const Exponents& a, const Exponents& b);

struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const { return grlex_greater(a, b); }
};

// Degrees d_1..d_q of the integrity-basis elements. Convention: sorted
// non-increasing with d_q == 2 (the last basis element is |x|^2).
struct WeightSystem {
  std::vector<int> degrees;

  int size() const { return static_cast<int>(degrees.size()); }
  long weight_of(const Exponents& e) const;
  void validate() const;  // throws ConfigError on a violated convention
};

// All exponent vectors e with sum_a e_a * d_a == weight, in descending
// graded-lex order. Empty when no monomial has that weight.
std::vector<Exponents> w_monomials(long weight, const WeightSystem& ws);

// Weighted graded order used for p-space reductions: higher weight first,
// ties broken lexicographically (p1 > p2 > ... > pq).
bool weighted_greater(const Exponents& a, const Exponents& b, const WeightSystem& ws);

// Immutable multivariate polynomial with exact rational coefficients.
// Terms are kept in a canonical descending graded-lex map, no zero
// coefficients are stored, so structural equality is semantic equality.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Rational, GrlexGreater>;

  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static Polynomial constant(std::vector<std::string> vars, const Rational& c);
  static Polynomial variable(std::vector<std::string> vars, int index);
  static Polynomial monomial(std::vector<std::string> vars, const Exponents& e, const Rational& c);

  const std::vector<std::string>& variables() const { return vars_; }
  int variable_count() const { return static_cast<int>(vars_.size()); }
  const TermMap& terms() const { return terms_; }
  int term_count() const { return static_cast<int>(terms_.size()); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Rational coefficient(const Exponents& e) const;

  // Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;
  // Weight when w-homogeneous, nullopt otherwise (zero polynomial: 0).
  std::optional<long> weight(const WeightSystem& ws) const;

  Polynomial derivative(int var) const;
  std::vector<Polynomial> gradient() const;

  template <typename T>
  T evaluate(const std::vector<T>& point) const;

  std::string str() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& f);
  Polynomial pow(int e) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

 private:
  std::vector<std::string> vars_;
  TermMap terms_;

  void add_term(const Exponents& e, const Rational& c);
  static void require_same_vars(const Polynomial& a, const Polynomial& b);
  friend Polynomial parse_polynomial(const std::string&, const std::vector<std::string>&);
  friend std::optional<Polynomial> exact_divide(const Polynomial&, const Polynomial&);
  friend Polynomial substitute(const Polynomial&, const std::vector<Polynomial>&);
  friend Polynomial reduce_weighted(const Polynomial&, const std::vector<Polynomial>&,
                                    const WeightSystem&);
};

// Quotient f/g when the division is exact, nullopt otherwise.
// Throws std::domain_error when g == 0.
std::optional<Polynomial> exact_divide(const Polynomial& f, const Polynomial& g);

// f(images[0], ..., images[k-1]); all images must share one variable list.
Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images);

// Parses the plain-text format: sum of terms "coeff * v1^e1 * v2^e2", with
// rational coefficients written as "num/den". Throws std::invalid_argument.
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars);

// Remainder of f under multivariate division by gens, using the weighted
// graded order. A zero remainder certifies membership in the ideal.
Polynomial reduce_weighted(const Polynomial& f, const std::vector<Polynomial>& gens,
                           const WeightSystem& ws);

// Scales f to coprime integer coefficients with a positive coefficient on the
// weighted-order leading term.
Polynomial canonical_signed(const Polynomial& f, const WeightSystem& ws);

// Rendering with terms in descending weighted order; same grammar as str().
std::string weighted_str(const Polynomial& f, const WeightSystem& ws);

namespace detail {
template <typename T>
T scalar_from_rational(const Rational& r);
template <>
inline double scalar_from_rational<double>(const Rational& r) {
  return r.to_double();
}
template <>
inline Rational scalar_from_rational<Rational>(const Rational& r) {
  return r;
}
}  // namespace detail

template <typename T>
T Polynomial::evaluate(const std::vector<T>& point) const {
  if (static_cast<int>(point.size()) != variable_count()) {
    throw std::invalid_argument("Polynomial::evaluate: dimension mismatch");
  }
  // Per-variable power tables; exponents in this project stay small.
  std::vector<int> max_exp(vars_.size(), 0);
  for (const auto& [e, c] : terms_) {
    for (size_t i = 0; i < e.size(); ++i) max_exp[i] = std::max(max_exp[i], e[i]);
  }
  std::vector<std::vector<T>> powers(vars_.size());
  for (size_t i = 0; i < vars_.size(); ++i) {
    powers[i].resize(static_cast<size_t>(max_exp[i]) + 1);
    powers[i][0] = detail::scalar_from_rational<T>(Rational(1));
    for (int k = 1; k <= max_exp[i]; ++k) powers[i][k] = powers[i][k - 1] * point[i];
  }
  T acc = detail::scalar_from_rational<T>(Rational(0));
  for (const auto& [e, c] : terms_) {
    T term = detail::scalar_from_rational<T>(c);
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) term = term * powers[i][e[i]];
    }
    acc = acc + term;
  }
  return acc;
}

}  // namespace orbitspace
