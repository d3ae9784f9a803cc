#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orbitspace/strata.hpp"

namespace orbitspace {

// One term of a Landau potential in orbit-space coordinates: a w-monomial
// with a coefficient that is either a literal rational or a named parameter
// scaled by a rational.
struct PotentialTerm {
  Exponents monomial;
  Rational scale{1};
  std::optional<std::string> parameter;  // multiplies scale when present
};

struct ParameterSpec {
  std::string name;
  double value = 0.0;          // fixed value (ignored when swept)
  bool swept = false;
  double min = 0.0, max = 0.0;
  int steps = 1;
};

struct PotentialSpec {
  std::vector<PotentialTerm> terms;
  std::vector<ParameterSpec> parameters;
  bool allow_unbounded = false;  // run the minimization even when the
                                 // boundedness screen does not pass

  void validate(const WeightSystem& ws) const;
};

// Potential with all parameters substituted; numeric evaluation in p or,
// through the orbit map, in x.
class InstantiatedPotential {
 public:
  InstantiatedPotential(const PotentialSpec& spec,
                        const std::map<std::string, double>& params, const WeightSystem& ws);

  double evaluate_p(const Eigen::VectorXd& p) const;
  Eigen::VectorXd gradient_p(const Eigen::VectorXd& p) const;
  // Leading w-homogeneous part evaluated at p; governs growth along rays.
  double leading_part(const Eigen::VectorXd& p) const;
  long max_weight() const { return max_weight_; }

 private:
  std::vector<std::pair<Exponents, double>> terms_;
  long max_weight_ = 0;
  WeightSystem ws_;
};

enum class Boundedness { Bounded, Unbounded, Inconclusive };

struct ScreenReport {
  Boundedness verdict = Boundedness::Inconclusive;
  double min_leading = 0.0;  // smallest leading-part value over the rays
  int rays = 0;
};

// Evaluates the leading-weight part of the potential along random rays inside
// the orbit space (images of random unit x). Negative somewhere: unbounded;
// positive everywhere: bounded; zero within tolerance: inconclusive.
ScreenReport boundedness_screen(const InstantiatedPotential& pot, const MIBSpec& mib, int rays,
                                Rng& rng, double tol = 1e-9);

enum class MinimizeStatus { Attained, BoundaryInfimum, Diverged, Empty };

struct MinimizeResult {
  MinimizeStatus status = MinimizeStatus::Empty;
  double value = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd p;
  std::string landed_label;  // stratum the minimizer actually identifies to
};

struct MinimizeOptions {
  int multistarts = 64;
  double start_radius = 3.0;
  double grad_tol = 1e-10;
  int max_iters = 2000;
  double max_radius = 100.0;  // descent beyond this radius counts as divergent
};

// Multistart descent of V(p(x)) over x restricted to the fixed subspace that
// parametrizes the stratum's preimage; stratum equalities hold automatically
// there. Results landing in a different stratum are kept as boundary infima.
MinimizeResult minimize_on_stratum(const InstantiatedPotential& pot,
                                   const StratumDescriptor& descriptor,
                                   const StratumCatalog& catalog, const MinimizeOptions& opts,
                                   Rng& rng);

struct PhasePoint {
  std::map<std::string, double> parameters;
  std::string label;
  double value = 0.0;
  Eigen::VectorXd p;
  Eigen::VectorXd x;
  bool degenerate = false;
  bool screen_bounded = true;
};

struct StablePhaseOptions {
  MinimizeOptions minimize;
  int screen_rays = 200;
  bool screen_override = false;
  double degeneracy_rel_tol = 1e-8;
};

// Runs minimize_on_stratum over the whole catalog and reports the stratum
// hosting the least attained minimum. Throws AllUnbounded when every descent
// diverges, or ComputationError when the screen blocks and no override is
// set.
PhasePoint stable_phase(const InstantiatedPotential& pot, const StratumCatalog& catalog,
                        const StablePhaseOptions& opts, Rng& rng);

struct SweepTransition {
  std::map<std::string, double> from_params, to_params;
  std::string from_label, to_label;
  bool second_order_allowed = false;
};

struct PhaseSweepResult {
  std::vector<PhasePoint> grid;
  std::vector<SweepTransition> transitions;
  std::vector<std::string> sweep_parameters;  // 1 or 2 names
};

PhaseSweepResult phase_sweep(const PotentialSpec& family, const StratumCatalog& catalog,
                             const StratumGraph& graph, const StablePhaseOptions& opts,
                             Rng& rng);

struct Observables {
  double n = 0.0;
  double z = 0.0;
  bool magnetic = false;
};

// Physical observables of the superconducting order parameter: pair density
// n = p_q and the time-reversal-odd combination z = sqrt(p_q^2 - p_{q-1}).
// Throws ComputationError when the discriminant is negative beyond tolerance
// (the point is outside the orbit space).
Observables observables(const Eigen::VectorXd& p, double tol = 1e-9);

}  // namespace orbitspace
