#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orbitspace/polynomial.hpp"
#include "orbitspace/rng.hpp"

namespace orbitspace {

struct GroupElement {
  Eigen::MatrixXd matrix;
  std::string word;
};

// One-parameter family of simultaneous block rotations u(alpha): each listed
// coordinate pair (i, j) rotates by multiplier * alpha. Multipliers are
// restricted to +-1 so fixed-point equations stay linear in (cos a, sin a).
struct RotationFamily {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> multipliers;
  std::string name = "U1";

  Eigen::MatrixXd matrix(double alpha, int dimension) const;
  bool touches(int coordinate) const;
  void validate(int dimension) const;

  // If m == u(alpha) * g for some alpha, returns that alpha.
  std::optional<double> coset_angle(const Eigen::MatrixXd& m, const Eigen::MatrixXd& g,
                                    double tol) const;
};

struct GroupPresentation {
  int dimension = 0;
  std::vector<GroupElement> generators;
  std::optional<RotationFamily> family;

  void validate(double orthogonality_tol = 1e-9) const;
};

// All distinct products of the finite generators, identified modulo left
// multiplication by the rotation family (coset representatives). The identity
// comes first; order is deterministic (breadth-first over generators).
std::vector<GroupElement> finite_closure(const GroupPresentation& gp, int max_elements);

struct InvarianceViolation {
  std::string word;
  Eigen::VectorXd x;
  double f_x = 0.0;
  double f_gx = 0.0;
  double error = 0.0;
};

struct InvarianceReport {
  bool pass = true;
  double worst_error = 0.0;
  std::vector<InvarianceViolation> violations;  // capped at a handful
};

// Checks |f(g x) - f(x)| <= tol * max(1, |f(x)|) at random sample points for
// every coset representative combined with a grid of rotation angles.
InvarianceReport verify_invariance(const Polynomial& f, const GroupPresentation& gp,
                                   int samples, double tol, Rng& rng, int alpha_grid = 72);

struct FixedSubspace {
  Eigen::MatrixXd basis;  // n x k, orthonormal columns spanning ker(g - I)
  std::string word;
  int coset = 0;
  double alpha = 0.0;
};

struct FixedSubspaceOptions {
  int alpha_grid = 720;
  double refine_width = 1e-12;
  double kernel_tol = 1e-7;
  double root_tol = 1e-9;
  double dedup_tol = 1e-6;
};

// Fixed subspaces ker(u(alpha) h - I) over all coset representatives h and
// all angles alpha where the kernel is nontrivial, deduplicated.
std::vector<FixedSubspace> fixed_subspaces(const GroupPresentation& gp,
                                           const std::vector<GroupElement>& closure,
                                           const FixedSubspaceOptions& opts = {});

struct IsotropyElement {
  int coset = 0;
  double alpha = 0.0;
  bool full_circle = false;  // every alpha fixes the point for this coset
  std::string word;
  Eigen::MatrixXd matrix;
};

struct IsotropySubgroup {
  Eigen::VectorXd point;
  std::vector<IsotropyElement> elements;
  int continuous_dimension = 0;
};

IsotropySubgroup isotropy_subgroup(const Eigen::VectorXd& x, const GroupPresentation& gp,
                                   const std::vector<GroupElement>& closure, double tol = 1e-9);

// Conjugation-invariant proxy for the isotropy type: continuous dimension,
// number of isolated-angle solutions, and the multiset of their element
// orders. Lexicographic comparison matches "larger isotropy".
struct IsotropySignature {
  int continuous_dim = 0;
  int element_count = 0;
  std::vector<int> orders;

  auto operator<=>(const IsotropySignature&) const = default;
  std::string str() const;
};

IsotropySignature isotropy_signature(const IsotropySubgroup& iso);

// Smallest k <= cap with m^k == I (within tol); 0 when none is found.
int element_order(const Eigen::MatrixXd& m, int cap = 60, double tol = 1e-8);

std::string format_angle_word(double alpha, const std::string& family_name,
                              const std::string& coset_word);

}  // namespace orbitspace
