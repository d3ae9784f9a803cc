#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "orbitspace/active.hpp"
#include "orbitspace/group.hpp"
#include "orbitspace/pmatrix.hpp"

namespace orbitspace {

// Semialgebraic description of one stratum: polynomials required to vanish
// plus strict sign conditions, exactly in the style of the defining-relation
// tables (non-polynomial rows are stored as a polynomial equality plus the
// sign of a coordinate).
struct StratumDescriptor {
  std::string label;
  std::vector<Polynomial> equalities;                  // in p variables
  std::vector<std::pair<Polynomial, int>> inequalities;  // sign * poly > 0
  int dimension = 0;
  IsotropySignature signature;
  Eigen::VectorXd representative_x;
  Eigen::VectorXd representative_p;
  int source_subspace = -1;  // -1 for the origin stratum
};

struct StrataOptions {
  int samples_per_subspace = 80;
  double rank_rel_tol = 1e-7;
  // Vanish/sign classification band on samples. Samples drawn inside a fixed
  // subspace satisfy their sheet relations to machine precision, so the band
  // can sit far below the rank threshold.
  double relation_tol = 1e-9;
  double identify_tol = 1e-9;
  long equality_max_weight = 0;  // 0: use the largest active weight
  int min_cluster_samples = 3;   // smaller clusters are tolerance accidents
  int validation_target = 50;
  int validation_rounds = 12;
  int witness_starts = 12;
  int witness_iters = 250;
  double witness_tol = 1e-12;
  double bordering_tol = 1e-9;
};

struct StratumCatalog {
  MIBSpec mib;
  PHatMatrix phat;
  std::vector<ActivePolynomial> actives;
  std::vector<Syzygy> syzygies;
  std::vector<FixedSubspace> subspaces;
  std::vector<StratumDescriptor> descriptors;
  std::vector<std::vector<Eigen::VectorXd>> validated_x;  // per descriptor
  StrataOptions opts;
  bool complete = true;
  std::vector<std::string> diagnostics;

  const StratumDescriptor* find(const std::string& label) const;
  int index_of(const std::string& label) const;
};

struct MembershipResult {
  bool inside = false;
  int rank = 0;
  double min_eigenvalue = 0.0;
  double worst_syzygy = 0.0;
};

// A point of R^q is in the orbit space when the syzygies vanish and P-hat is
// positive semi-definite there (eigenvalues >= -tol * scale).
MembershipResult membership(const Eigen::VectorXd& p, const PHatMatrix& ph,
                            const std::vector<Syzygy>& syzygies, double tol);

// Closure test: equalities within tolerance, strict inequalities relaxed to
// their non-strict form.
bool closure_contains(const StratumDescriptor& d, const Eigen::VectorXd& p,
                      const WeightSystem& ws, double tol);

// Unique descriptor whose equalities and strict inequalities hold at p(x);
// descriptors with more equalities are tested first, so boundary points
// resolve to the most specific stratum.
std::optional<std::string> identify_stratum(const Eigen::VectorXd& x,
                                            const StratumCatalog& catalog);
std::optional<std::string> identify_by_p(const Eigen::VectorXd& p,
                                         const StratumCatalog& catalog);

// Builds the full catalog by sampling every fixed subspace, clustering the
// images by (vanishing actives, signs, rank, isotropy signature), splitting
// sign-ambiguous clusters when the zero slice provably leaves the cluster,
// and interpolating the defining equalities per cluster.
StratumCatalog enumerate_strata(const PHatMatrix& ph,
                                const std::vector<ActivePolynomial>& actives,
                                const std::vector<Syzygy>& syzygies, const MIBSpec& mib,
                                const GroupPresentation& gp, const StrataOptions& opts,
                                Rng& rng);

struct StratumGraph {
  std::vector<std::string> labels;
  // (i, j): stratum i lies in the boundary of stratum j (dim i < dim j).
  std::vector<std::pair<int, int>> edges;

  bool borders(int smaller, int larger) const;
};

StratumGraph bordering(const StratumCatalog& catalog);

// Unordered pairs allowed for a second-order transition: bordering pairs plus
// every pair involving the origin or the principal stratum.
std::vector<std::pair<std::string, std::string>> allowed_transitions(
    const StratumGraph& graph, const StratumCatalog& catalog);

struct SectionPoint {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  std::string label;  // "outside" or a stratum label
};

// Grid section of the orbit space in the plane p_q = r2 (requires q == 3 for
// the planar grid). The box covers |p1| <= 2 p3^3 and 0 <= p2 <= p3^2 with a
// margin so outside points appear.
std::vector<SectionPoint> section(const StratumCatalog& catalog, double r2, int grid);

}  // namespace orbitspace
