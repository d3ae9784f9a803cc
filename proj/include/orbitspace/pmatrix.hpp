#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orbitspace/exact_linalg.hpp"
#include "orbitspace/polynomial.hpp"

namespace orbitspace {

// Minimal integrity basis: the generators p_1..p_q of the invariant algebra,
// as exact polynomials in the x variables, ordered by non-increasing degree
// with p_q = |x|^2.
struct MIBSpec {
  std::vector<std::string> x_vars;
  std::vector<Polynomial> polys;
  WeightSystem weights;

  int n() const { return static_cast<int>(x_vars.size()); }
  int q() const { return static_cast<int>(polys.size()); }
  std::vector<std::string> p_vars() const;

  void validate() const;  // degree/homogeneity/|x|^2 conventions
};

// Flattened numeric form of an exact polynomial; the evaluation hot path for
// sampling and minimization.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const Polynomial& p);

  double eval(const double* x) const {
    double acc = 0.0;
    const int* e = exps_.data();
    for (double c : coeffs_) {
      double v = c;
      for (int i = 0; i < nvars_; ++i) {
        const double xi = x[i];
        for (int k = e[i]; k > 0; --k) v *= xi;
      }
      acc += v;
      e += nvars_;
    }
    return acc;
  }

 private:
  int nvars_ = 0;
  std::vector<double> coeffs_;
  std::vector<int> exps_;
};

// Numeric view of the orbit map: p(x) and its Jacobian, with the gradient
// polynomials expanded and compiled once.
class OrbitMapEvaluator {
 public:
  explicit OrbitMapEvaluator(const MIBSpec& mib);

  Eigen::VectorXd p(const Eigen::VectorXd& x) const;
  // rows: gradient of p_a at x
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
  // Gram matrix of MIB gradients at x (numeric P(x))
  Eigen::MatrixXd gram(const Eigen::VectorXd& x) const;

  int n() const { return n_; }
  int q() const { return q_; }

 private:
  int n_ = 0;
  int q_ = 0;
  std::vector<CompiledPoly> polys_;
  std::vector<std::vector<CompiledPoly>> gradients_;
};

Polynomial compose_with_orbit_map(const Polynomial& f_hat, const MIBSpec& mib);

struct ExpressResult {
  std::optional<Polynomial> expression;  // nullopt: not in the MIB algebra
  std::vector<Polynomial> kernel;        // syzygies found at this weight
};

// Writes a G-invariant homogeneous f(x) as a polynomial in the MIB by exact
// coefficient matching over the w-monomials of its degree. When syzygies make
// the system underdetermined, returns the solution with the fewest terms
// (ties resolved by the graded-lex enumeration order of the monomials).
ExpressResult express_in_mib(const Polynomial& f, const MIBSpec& mib);

class PHatMatrix {
 public:
  PHatMatrix() = default;
  PHatMatrix(std::vector<Polynomial> entries, WeightSystem ws, std::vector<std::string> p_vars);

  int q() const { return q_; }
  const Polynomial& at(int a, int b) const;
  const WeightSystem& weights() const { return ws_; }
  const std::vector<std::string>& p_vars() const { return p_vars_; }

  Eigen::MatrixXd evaluate(const Eigen::VectorXd& p) const;
  RationalMatrix evaluate_exact(const std::vector<Rational>& p) const;

  // Numeric rank with singular values below rel_tol * sigma_max counted as 0.
  int rank(const Eigen::VectorXd& p, double rel_tol = 1e-7) const;
  double min_eigenvalue(const Eigen::VectorXd& p) const;

 private:
  int q_ = 0;
  std::vector<Polynomial> entries_;  // row-major q x q
  WeightSystem ws_;
  std::vector<std::string> p_vars_;
};

// Gram matrix of MIB gradients expressed in MIB coordinates. Checks the
// grading of every entry and the 2*d_a*p_a form of the last row; throws
// NotExpressible when the MIB cannot express some entry.
PHatMatrix compute_phat(const MIBSpec& mib);

Polynomial det_phat(const PHatMatrix& ph);

struct Syzygy {
  Polynomial poly;
  long weight = 0;
};

// Exact kernel of the composition map, weight by weight; generators that
// reduce to zero modulo lower-weight syzygies are dropped.
std::vector<Syzygy> find_syzygies(const MIBSpec& mib, long max_weight);

}  // namespace orbitspace
