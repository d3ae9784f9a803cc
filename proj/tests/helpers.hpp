#pragma once

#include <string>
#include <vector>

#include "orbitspace/config.hpp"
#include "orbitspace/group.hpp"
#include "orbitspace/pmatrix.hpp"
#include "orbitspace/rng.hpp"

namespace testutil {

using namespace orbitspace;

inline std::vector<std::string> x_vars() { return {"x1", "y1", "x2", "y2"}; }
inline std::vector<std::string> p_vars() { return {"p1", "p2", "p3"}; }

// Hexagonal superconductor example: C3v x time reversal x U(1) acting on R^4
// with eta+ = x1 + i y1, eta- = x2 + i y2.
inline GroupPresentation example_group() {
  GroupPresentation gp;
  gp.dimension = 4;
  const double h = 0.5, s = std::sqrt(3.0) / 2.0;
  Eigen::MatrixXd c3(4, 4), sv(4, 4), r(4, 4);
  c3 << -h, -s, 0, 0,
         s, -h, 0, 0,
         0, 0, -h, s,
         0, 0, -s, -h;
  sv << 0, 0, 1, 0,
        0, 0, 0, 1,
        1, 0, 0, 0,
        0, 1, 0, 0;
  r << 0, 0, 1, 0,
       0, 0, 0, -1,
       1, 0, 0, 0,
       0, -1, 0, 0;
  gp.generators.push_back({c3, "C3_1z"});
  gp.generators.push_back({sv, "sigma_v"});
  gp.generators.push_back({r, "R"});
  RotationFamily fam;
  fam.pairs = {{0, 1}, {2, 3}};
  fam.multipliers = {1, 1};
  gp.family = fam;
  return gp;
}

inline MIBSpec example_mib() {
  MIBSpec mib;
  mib.x_vars = x_vars();
  mib.weights.degrees = {6, 4, 2};
  mib.polys = {
      parse_polynomial("16*x1^3*x2^3 - 48*x1^3*x2*y2^2 + 144*x1^2*x2^2*y1*y2"
                       " - 48*x1*x2^3*y1^2 + 144*x1*x2*y1^2*y2^2 - 48*x1^2*y1*y2^3"
                       " - 48*x2^2*y1^3*y2 + 16*y1^3*y2^3",
                       mib.x_vars),
      parse_polynomial("4*x1^2*x2^2 + 4*x1^2*y2^2 + 4*x2^2*y1^2 + 4*y1^2*y2^2", mib.x_vars),
      parse_polynomial("x1^2 + y1^2 + x2^2 + y2^2", mib.x_vars),
  };
  return mib;
}

inline Eigen::VectorXd vec4(double a, double b, double c, double d) {
  Eigen::VectorXd v(4);
  v << a, b, c, d;
  return v;
}

inline Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

// Random polynomial with small rational coefficients; for property tests.
inline Polynomial random_polynomial(const std::vector<std::string>& vars, int max_degree,
                                    int terms, Rng& rng) {
  Polynomial out(vars);
  for (int t = 0; t < terms; ++t) {
    Exponents e(vars.size(), 0);
    int budget = rng.uniform_int(0, max_degree);
    for (int k = 0; k < budget; ++k) e[rng.uniform_int(0, static_cast<int>(vars.size()) - 1)]++;
    const long num = rng.uniform_int(-6, 6);
    const long den = rng.uniform_int(1, 4);
    out = out + Polynomial::monomial(vars, e, Rational(num, den));
  }
  return out;
}

inline std::vector<Rational> random_rational_point(int n, Rng& rng) {
  std::vector<Rational> v;
  for (int i = 0; i < n; ++i) v.emplace_back(rng.uniform_int(-8, 8), rng.uniform_int(1, 5));
  return v;
}

}  // namespace testutil
