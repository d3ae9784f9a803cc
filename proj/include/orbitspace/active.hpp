#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orbitspace/group.hpp"
#include "orbitspace/pmatrix.hpp"

namespace orbitspace {

struct BoundarySample {
  Eigen::VectorXd x;
  Eigen::VectorXd p;
  int rank = 0;
  int subspace = -1;  // index into the fixed-subspace list; -1 for the origin
};

struct BoundarySampleOptions {
  int per_subspace = 80;
  double rank_rel_tol = 1e-7;
};

// Unit-norm points drawn inside each fixed subspace, mapped through the orbit
// map, with the numeric rank of P-hat at the image. One origin sample is
// always appended.
std::vector<BoundarySample> boundary_samples(const MIBSpec& mib, const PHatMatrix& ph,
                                             const std::vector<FixedSubspace>& subspaces,
                                             const BoundarySampleOptions& opts, Rng& rng);

struct InterpolationResult {
  std::vector<Polynomial> candidates;     // canonical integer-coefficient polys
  std::vector<std::string> diagnostics;   // rationalization failures etc.
};

struct InterpolationOptions {
  double svd_tol = 1e-8;
  long max_denominator = 1000000;
  double rationalize_tol = 1e-6;
};

// Kernel of the (samples x w-monomials) evaluation matrix, rationalized.
// Kernel vectors are brought to reduced row echelon form first so that the
// entries of a rational kernel become small rationals.
InterpolationResult interpolate_vanishing(const std::vector<Eigen::VectorXd>& p_samples,
                                          long weight, const WeightSystem& ws,
                                          const std::vector<std::string>& p_vars,
                                          const InterpolationOptions& opts = {});

struct ActivePolynomial {
  Polynomial poly;
  long weight = 0;
  std::vector<Polynomial> multipliers;  // lambda_a, weight d_a - 2
  bool composite_flag = false;          // divisible by another verified active
};

// Exact check of the master relations: sum_b Phat_ab * da/dp_b = lambda_a * a
// for every row, with polynomial multipliers. Rational arithmetic throughout.
std::optional<ActivePolynomial> verify_master(const Polynomial& a, const PHatMatrix& ph);

struct FindActiveResult {
  std::vector<ActivePolynomial> actives;
  Polynomial product;  // A(p); the constant 1 when no active exists
  std::vector<std::string> diagnostics;
  std::vector<BoundarySample> uncovered;  // rank q-1 samples no active annihilates
};

struct FindActiveOptions {
  BoundarySampleOptions sampling;
  InterpolationOptions interpolation;
  double cover_tol = 1e-7;
  double vanish_tol = 1e-7;
};

// Interpolates candidate sheet polynomials from rank-(q-1) boundary samples
// (grouped by source subspace, smallest weight first, capped at the weight of
// det P-hat) and keeps those that pass the exact master-relation check.
// Throws IncompleteCover when a rank-(q-1) sample satisfies no verified
// active polynomial.
FindActiveResult find_active(const PHatMatrix& ph, const MIBSpec& mib,
                             const std::vector<FixedSubspace>& subspaces,
                             const FindActiveOptions& opts, Rng& rng);

}  // namespace orbitspace
