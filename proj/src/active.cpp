#include "orbitspace/active.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <Eigen/SVD>

#include "orbitspace/errors.hpp"

namespace orbitspace {

std::vector<BoundarySample> boundary_samples(const MIBSpec& mib, const PHatMatrix& ph,
                                             const std::vector<FixedSubspace>& subspaces,
                                             const BoundarySampleOptions& opts, Rng& rng) {
  OrbitMapEvaluator orbit(mib);
  std::vector<BoundarySample> out;
  out.reserve(subspaces.size() * opts.per_subspace + 1);
  for (size_t s = 0; s < subspaces.size(); ++s) {
    const Eigen::MatrixXd& basis = subspaces[s].basis;
    const int k = static_cast<int>(basis.cols());
    for (int i = 0; i < opts.per_subspace; ++i) {
      const Eigen::VectorXd x = basis * rng.unit_vector(k);
      const Eigen::VectorXd p = orbit.p(x);
      out.push_back({x, p, ph.rank(p, opts.rank_rel_tol), static_cast<int>(s)});
    }
  }
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(mib.n());
  out.push_back({origin, orbit.p(origin), ph.rank(orbit.p(origin), opts.rank_rel_tol), -1});
  return out;
}

namespace {

// Reduced row echelon form with a pivot tolerance; rationalizes cleanly when
// the row space is rational.
Eigen::MatrixXd numeric_rref(Eigen::MatrixXd m, double tol) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    double best = tol;
    for (int r = row; r < rows; ++r) {
      if (std::abs(m(r, col)) > best) {
        best = std::abs(m(r, col));
        pivot = r;
      }
    }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(row));
    m.row(row) /= m(row, col);
    for (int r = 0; r < rows; ++r) {
      if (r != row && std::abs(m(r, col)) > 0) m.row(r) -= m(r, col) * m.row(row);
    }
    ++row;
  }
  return m.topRows(row);
}

}  // namespace

InterpolationResult interpolate_vanishing(const std::vector<Eigen::VectorXd>& p_samples,
                                          long weight, const WeightSystem& ws,
                                          const std::vector<std::string>& p_vars,
                                          const InterpolationOptions& opts) {
  InterpolationResult out;
  const auto monos = w_monomials(weight, ws);
  if (monos.empty()) return out;
  if (p_samples.size() < 2 * monos.size()) {
    out.diagnostics.push_back("interpolate_vanishing: need at least " +
                              std::to_string(2 * monos.size()) + " samples at weight " +
                              std::to_string(weight) + ", got " +
                              std::to_string(p_samples.size()));
    return out;
  }

  Eigen::MatrixXd M(static_cast<int>(p_samples.size()), static_cast<int>(monos.size()));
  for (size_t r = 0; r < p_samples.size(); ++r) {
    for (size_t c = 0; c < monos.size(); ++c) {
      double v = 1.0;
      for (size_t a = 0; a < monos[c].size(); ++a) {
        for (int e = 0; e < monos[c][a]; ++e) v *= p_samples[r](static_cast<int>(a));
      }
      M(static_cast<int>(r), static_cast<int>(c)) = v;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = opts.svd_tol * std::max(sv(0), 1e-300);
  int kernel_dim = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cutoff) ++kernel_dim;
  }
  if (static_cast<int>(monos.size()) > sv.size()) {
    kernel_dim += static_cast<int>(monos.size()) - static_cast<int>(sv.size());
  }
  if (kernel_dim == 0) return out;

  const Eigen::MatrixXd kernel = svd.matrixV().rightCols(kernel_dim).transpose();
  const Eigen::MatrixXd reduced = numeric_rref(kernel, 1e-10);

  for (int r = 0; r < reduced.rows(); ++r) {
    Polynomial cand(p_vars);
    bool ok = true;
    for (int c = 0; c < reduced.cols(); ++c) {
      const double v = reduced(r, c);
      if (std::abs(v) < 1e-12) continue;
      const auto rat = rationalize(v, opts.max_denominator, opts.rationalize_tol);
      if (!rat) {
        std::ostringstream os;
        os << "RationalizationFailed: kernel entry " << v << " at weight " << weight
           << " has no rational fit with denominator <= " << opts.max_denominator;
        out.diagnostics.push_back(os.str());
        ok = false;
        break;
      }
      cand = cand + Polynomial::monomial(p_vars, monos[c], *rat);
    }
    if (!ok || cand.is_zero()) continue;
    cand = canonical_signed(cand, ws);
    if (std::find(out.candidates.begin(), out.candidates.end(), cand) == out.candidates.end()) {
      out.candidates.push_back(std::move(cand));
    }
  }
  return out;
}

std::optional<ActivePolynomial> verify_master(const Polynomial& a, const PHatMatrix& ph) {
  if (a.is_zero()) return std::nullopt;
  const auto w = a.weight(ph.weights());
  if (!w) return std::nullopt;

  ActivePolynomial out;
  out.poly = a;
  out.weight = *w;
  const int q = ph.q();
  std::vector<Polynomial> da;
  da.reserve(q);
  for (int b = 0; b < q; ++b) da.push_back(a.derivative(b));

  for (int row = 0; row < q; ++row) {
    Polynomial lhs(a.variables());
    for (int b = 0; b < q; ++b) lhs = lhs + ph.at(row, b) * da[b];
    auto lambda = exact_divide(lhs, a);
    if (!lambda) return std::nullopt;
    const auto lw = lambda->weight(ph.weights());
    if (!lw || (!lambda->is_zero() && *lw != ph.weights().degrees[row] - 2)) {
      return std::nullopt;
    }
    out.multipliers.push_back(std::move(*lambda));
  }
  // Euler identity on the last row: lambda_q == 2w, always, for a
  // w-homogeneous polynomial. A failure here is an internal inconsistency.
  const Polynomial euler = Polynomial::constant(a.variables(), Rational(2 * out.weight));
  if (!(out.multipliers.back() == euler)) {
    throw ComputationError("verify_master: Euler multiplier mismatch on the last row");
  }
  return out;
}

FindActiveResult find_active(const PHatMatrix& ph, const MIBSpec& mib,
                             const std::vector<FixedSubspace>& subspaces,
                             const FindActiveOptions& opts, Rng& rng) {
  FindActiveResult out;
  const int q = mib.q();
  const auto p_vars = mib.p_vars();
  const auto samples = boundary_samples(mib, ph, subspaces, opts.sampling, rng);

  const Polynomial det = det_phat(ph);
  const long weight_cap = det.weight(ph.weights()).value_or(0);

  // Group rank-(q-1) samples by their source subspace; each proper subspace
  // lies in the closure of a single sheet. The full space and the origin
  // carry no sheet (a full-space sample with deficient numeric rank is a
  // tolerance accident next to a boundary, not a boundary point).
  std::map<int, std::vector<Eigen::VectorXd>> groups;
  std::vector<const BoundarySample*> sheet_samples;
  for (const auto& s : samples) {
    if (s.rank != q - 1 || s.subspace < 0) continue;
    if (subspaces[s.subspace].basis.cols() >= mib.n()) continue;
    if (s.p.norm() < 1e-12) continue;
    groups[s.subspace].push_back(s.p);
    sheet_samples.push_back(&s);
  }

  for (const auto& [subspace, pts] : groups) {
    bool found = false;
    for (long w = 1; w <= weight_cap && !found; ++w) {
      InterpolationResult interp =
          interpolate_vanishing(pts, w, ph.weights(), p_vars, opts.interpolation);
      for (auto& d : interp.diagnostics) out.diagnostics.push_back(std::move(d));
      for (const auto& cand : interp.candidates) {
        auto verified = verify_master(cand, ph);
        if (!verified) continue;
        bool known = false;
        for (const auto& a : out.actives) {
          if (a.poly == verified->poly) {
            known = true;
            break;
          }
        }
        if (!known) out.actives.push_back(std::move(*verified));
        found = true;
      }
    }
    if (!found) {
      out.diagnostics.push_back("find_active: no verified active for subspace " +
                                std::to_string(subspace) + " (" + subspaces[subspace].word + ")");
    }
  }

  std::sort(out.actives.begin(), out.actives.end(), [](const auto& a, const auto& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return grlex_greater(b.poly.terms().begin()->first, a.poly.terms().begin()->first);
  });

  // Composite candidates are reported, flagged, not rejected.
  for (auto& a : out.actives) {
    for (const auto& b : out.actives) {
      if (&a != &b && exact_divide(a.poly, b.poly)) a.composite_flag = true;
    }
  }

  std::vector<double> pv;
  for (const auto* s : sheet_samples) {
    pv.assign(s->p.data(), s->p.data() + s->p.size());
    bool covered = false;
    for (const auto& a : out.actives) {
      const auto w = a.poly.weight(ph.weights()).value_or(2);
      const double scale = std::pow(std::max(1.0, std::abs(s->p(q - 1))),
                                    static_cast<double>(w) / 2.0);
      if (std::abs(a.poly.evaluate<double>(pv)) <= opts.cover_tol * scale) {
        covered = true;
        break;
      }
    }
    if (!covered) out.uncovered.push_back(*s);
  }

  out.product = Polynomial::constant(p_vars, Rational(1));
  for (const auto& a : out.actives) out.product = out.product * a.poly;

  if (!out.uncovered.empty()) {
    std::ostringstream os;
    os << "find_active: " << out.uncovered.size()
       << " rank-(q-1) samples satisfy no verified active polynomial; first p = (";
    const auto& p0 = out.uncovered.front().p;
    for (int i = 0; i < p0.size(); ++i) os << (i ? ", " : "") << p0(i);
    os << ")";
    throw IncompleteCover(os.str());
  }
  if (!exact_divide(det, out.product)) {
    throw ComputationError("find_active: product of actives does not divide det P-hat");
  }
  return out;
}

}  // namespace orbitspace
