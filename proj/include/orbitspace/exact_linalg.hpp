#pragma once

#include <vector>

#include <Eigen/Core>

#include "orbitspace/rational.hpp"

namespace orbitspace {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

struct ExactLinearSolution {
  bool consistent = false;
  RationalVector particular;             // one solution when consistent
  std::vector<RationalVector> kernel;    // basis of homogeneous solutions
  std::vector<int> pivot_columns;
};

// Gauss-Jordan over the rationals; deterministic pivoting in column order.
ExactLinearSolution solve_exact(const RationalMatrix& A, const RationalVector& b);

std::vector<RationalVector> nullspace_exact(const RationalMatrix& A);

}  // namespace orbitspace
