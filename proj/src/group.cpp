#include "orbitspace/group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "orbitspace/errors.hpp"

namespace orbitspace {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a > kTwoPi - 1e-12) a = 0.0;
  return a;
}
}  // namespace

Eigen::MatrixXd RotationFamily::matrix(double alpha, int dimension) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dimension, dimension);
  for (size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    const double t = multipliers[p] * alpha;
    m(i, i) = std::cos(t);
    m(i, j) = -std::sin(t);
    m(j, i) = std::sin(t);
    m(j, j) = std::cos(t);
  }
  return m;
}

bool RotationFamily::touches(int coordinate) const {
  for (const auto& [i, j] : pairs) {
    if (i == coordinate || j == coordinate) return true;
  }
  return false;
}

void RotationFamily::validate(int dimension) const {
  if (pairs.size() != multipliers.size()) {
    throw ConfigError("RotationFamily: pairs/multipliers length mismatch");
  }
  std::vector<bool> used(dimension, false);
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= dimension || j >= dimension || i == j) {
      throw ConfigError("RotationFamily: invalid coordinate pair");
    }
    if (used[i] || used[j]) throw ConfigError("RotationFamily: coordinate reused across pairs");
    used[i] = used[j] = true;
  }
  for (int m : multipliers) {
    if (m != 1 && m != -1) throw ConfigError("RotationFamily: multipliers must be +-1");
  }
  if (pairs.empty()) throw ConfigError("RotationFamily: no rotation pairs");
}

std::optional<double> RotationFamily::coset_angle(const Eigen::MatrixXd& m,
                                                  const Eigen::MatrixXd& g, double tol) const {
  // m == u(alpha) g  <=>  m g^T == u(alpha); g orthogonal.
  const Eigen::MatrixXd r = m * g.transpose();
  const auto [i, j] = pairs[0];
  const double c = r(i, i);
  const double s = r(j, i) * multipliers[0];
  if (std::abs(c * c + s * s - 1.0) > 1e-6) return std::nullopt;
  const double alpha = std::atan2(s, c);
  const int n = static_cast<int>(m.rows());
  if (max_abs_diff(r, matrix(alpha, n)) > tol) return std::nullopt;
  return wrap_angle(alpha);
}

void GroupPresentation::validate(double orthogonality_tol) const {
  if (dimension < 1) throw ConfigError("GroupPresentation: dimension must be positive");
  for (const auto& g : generators) {
    if (g.matrix.rows() != dimension || g.matrix.cols() != dimension) {
      throw ConfigError("GroupPresentation: generator '" + g.word + "' has wrong shape");
    }
    const Eigen::MatrixXd gram = g.matrix.transpose() * g.matrix;
    if (max_abs_diff(gram, Eigen::MatrixXd::Identity(dimension, dimension)) >
        orthogonality_tol) {
      throw ConfigError("GroupPresentation: generator '" + g.word + "' is not orthogonal");
    }
  }
  if (family) {
    family->validate(dimension);
    // u(a) u(b) == u(a+b), sampled
    for (double a : {0.3, 1.1}) {
      for (double b : {0.7, 2.9}) {
        const Eigen::MatrixXd lhs = family->matrix(a, dimension) * family->matrix(b, dimension);
        if (max_abs_diff(lhs, family->matrix(a + b, dimension)) > 1e-9) {
          throw ConfigError("GroupPresentation: rotation family is not a one-parameter group");
        }
      }
    }
  }
}

std::vector<GroupElement> finite_closure(const GroupPresentation& gp, int max_elements) {
  const int n = gp.dimension;
  std::vector<GroupElement> reps;
  reps.push_back({Eigen::MatrixXd::Identity(n, n), "E"});

  auto same_coset = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (gp.family) return gp.family->coset_angle(a, b, 1e-8).has_value();
    return max_abs_diff(a, b) <= 1e-8;
  };

  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    const int idx = frontier.front();
    frontier.pop_front();
    for (const auto& gen : gp.generators) {
      const Eigen::MatrixXd candidate = reps[idx].matrix * gen.matrix;
      bool known = false;
      for (const auto& rep : reps) {
        if (same_coset(candidate, rep.matrix)) {
          known = true;
          break;
        }
      }
      if (known) continue;
      if (static_cast<int>(reps.size()) >= max_elements) {
        throw ClosureExceeded("finite_closure: more than " + std::to_string(max_elements) +
                              " cosets; generators do not close (or raise the bound)");
      }
      std::string word = reps[idx].word == "E" ? gen.word : reps[idx].word + "*" + gen.word;
      reps.push_back({candidate, std::move(word)});
      frontier.push_back(static_cast<int>(reps.size()) - 1);
    }
  }
  return reps;
}

InvarianceReport verify_invariance(const Polynomial& f, const GroupPresentation& gp, int samples,
                                   double tol, Rng& rng, int alpha_grid) {
  InvarianceReport report;
  const auto closure = finite_closure(gp, 4096);
  const int n = gp.dimension;
  const int grid = gp.family ? std::max(alpha_grid, 36) : 1;

  std::vector<Eigen::VectorXd> points;
  points.reserve(samples);
  for (int s = 0; s < samples; ++s) points.push_back(1.5 * rng.ball_vector(n));

  std::vector<double> x_std(n), gx_std(n);
  for (const auto& rep : closure) {
    for (int k = 0; k < grid; ++k) {
      const double alpha = kTwoPi * k / grid;
      Eigen::MatrixXd g = rep.matrix;
      if (gp.family) g = gp.family->matrix(alpha, n) * g;
      for (const auto& x : points) {
        const Eigen::VectorXd gx = g * x;
        for (int i = 0; i < n; ++i) {
          x_std[i] = x(i);
          gx_std[i] = gx(i);
        }
        const double fx = f.evaluate<double>(x_std);
        const double fgx = f.evaluate<double>(gx_std);
        const double err = std::abs(fgx - fx) / std::max(1.0, std::abs(fx));
        report.worst_error = std::max(report.worst_error, err);
        if (err > tol) {
          report.pass = false;
          if (report.violations.size() < 5) {
            report.violations.push_back(
                {format_angle_word(gp.family ? alpha : 0.0,
                                   gp.family ? gp.family->name : std::string{}, rep.word),
                 x, fx, fgx, err});
          }
        }
      }
    }
  }
  return report;
}

namespace {

double smallest_singular_value(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().tail(1)(0);
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int k = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tol) ++k;
  }
  return svd.matrixV().rightCols(k);
}

bool same_subspace(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
  if (a.cols() != b.cols()) return false;
  const Eigen::MatrixXd pa = a * a.transpose();
  const Eigen::MatrixXd pb = b * b.transpose();
  return (pa - pb).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

std::vector<FixedSubspace> fixed_subspaces(const GroupPresentation& gp,
                                           const std::vector<GroupElement>& closure,
                                           const FixedSubspaceOptions& opts) {
  const int n = gp.dimension;
  std::vector<FixedSubspace> out;

  auto emit = [&](const Eigen::MatrixXd& m, int coset, double alpha) {
    const Eigen::MatrixXd basis = kernel_basis(m - Eigen::MatrixXd::Identity(n, n),
                                               opts.kernel_tol);
    if (basis.cols() == 0) return;
    for (const auto& existing : out) {
      if (same_subspace(existing.basis, basis, opts.dedup_tol)) return;
    }
    out.push_back({basis,
                   format_angle_word(alpha, gp.family ? gp.family->name : std::string{},
                                     closure[coset].word),
                   coset, alpha});
  };

  for (int ci = 0; ci < static_cast<int>(closure.size()); ++ci) {
    const Eigen::MatrixXd& h = closure[ci].matrix;
    if (!gp.family) {
      emit(h, ci, 0.0);
      continue;
    }
    const int grid = opts.alpha_grid;
    std::vector<double> svmin(grid);
    int tiny = 0;
    for (int k = 0; k < grid; ++k) {
      const double alpha = kTwoPi * k / grid;
      svmin[k] = smallest_singular_value(gp.family->matrix(alpha, n) * h -
                                         Eigen::MatrixXd::Identity(n, n));
      if (svmin[k] < opts.root_tol) ++tiny;
    }
    if (tiny > 3 * grid / 4) {
      // Every angle fixes a subspace (continuous family of involution-like
      // cosets); a few representatives are enough for sampling purposes.
      for (double alpha : {0.0, kTwoPi / 8, kTwoPi / 4, kTwoPi * 3 / 8, kTwoPi / 2,
                           kTwoPi * 5 / 8, kTwoPi * 3 / 4, kTwoPi * 7 / 8}) {
        emit(gp.family->matrix(alpha, n) * h, ci, alpha);
      }
      continue;
    }
    for (int k = 0; k < grid; ++k) {
      const int prev = (k + grid - 1) % grid;
      const int next = (k + 1) % grid;
      if (svmin[k] > svmin[prev] || svmin[k] > svmin[next]) continue;
      if (svmin[k] > 1e-2) continue;
      // Ternary refinement of the local minimum of the smallest singular value.
      double lo = kTwoPi * (k - 1) / grid;
      double hi = kTwoPi * (k + 1) / grid;
      auto value = [&](double a) {
        return smallest_singular_value(gp.family->matrix(a, n) * h -
                                       Eigen::MatrixXd::Identity(n, n));
      };
      while (hi - lo > opts.refine_width) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (value(m1) <= value(m2)) {
          hi = m2;
        } else {
          lo = m1;
        }
      }
      const double alpha = wrap_angle(0.5 * (lo + hi));
      if (value(alpha) > opts.root_tol) continue;
      emit(gp.family->matrix(alpha, n) * h, ci, alpha);
    }
  }
  return out;
}

IsotropySubgroup isotropy_subgroup(const Eigen::VectorXd& x, const GroupPresentation& gp,
                                   const std::vector<GroupElement>& closure, double tol) {
  IsotropySubgroup iso;
  iso.point = x;
  const int n = gp.dimension;
  const double scale = std::max(1.0, x.norm());
  const std::string family_name = gp.family ? gp.family->name : std::string{};

  auto push = [&](int coset, double alpha, bool full_circle) {
    Eigen::MatrixXd m = closure[coset].matrix;
    if (gp.family) m = gp.family->matrix(alpha, n) * m;
    if ((m * x - x).norm() > tol * scale) return;
    for (const auto& e : iso.elements) {
      if (e.coset == coset && (e.full_circle || std::abs(wrap_angle(e.alpha) -
                                                         wrap_angle(alpha)) < 1e-9)) {
        return;
      }
    }
    std::string word;
    if (full_circle) {
      word = family_name + "(alpha)";
      if (closure[coset].word != "E") word += "*" + closure[coset].word;
    } else {
      word = format_angle_word(alpha, family_name, closure[coset].word);
    }
    iso.elements.push_back({coset, wrap_angle(alpha), full_circle, std::move(word), m});
  };

  for (int ci = 0; ci < static_cast<int>(closure.size()); ++ci) {
    const Eigen::VectorXd y = closure[ci].matrix * x;
    if (!gp.family) {
      push(ci, 0.0, false);
      continue;
    }
    // u(alpha) y == x is linear in (cos alpha, sin alpha):
    //   c*y_i - m*s*y_j = x_i,  m*s*y_i + c*y_j = x_j  per rotation pair,
    // plus y_k == x_k on coordinates the family does not touch.
    bool feasible = true;
    for (int k = 0; k < n; ++k) {
      if (!gp.family->touches(k) && std::abs(y(k) - x(k)) > tol * scale) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;

    const int rows = static_cast<int>(gp.family->pairs.size()) * 2;
    Eigen::MatrixXd A(rows, 2);
    Eigen::VectorXd b(rows);
    int r = 0;
    for (size_t p = 0; p < gp.family->pairs.size(); ++p) {
      const auto [i, j] = gp.family->pairs[p];
      const double m = gp.family->multipliers[p];
      A(r, 0) = y(i);
      A(r, 1) = -m * y(j);
      b(r) = x(i);
      ++r;
      A(r, 0) = y(j);
      A(r, 1) = m * y(i);
      b(r) = x(j);
      ++r;
    }

    // The pair blocks of A are scaled rotations, so A^T A = c_norm * I:
    // the system has either no constraint (c_norm ~ 0) or a unique
    // least-squares candidate (cos a, sin a) = A^T b / c_norm.
    const double c_norm = A.col(0).squaredNorm();
    if (c_norm <= (tol * scale) * (tol * scale)) {
      // Every angle works when the rotating block of x vanishes too.
      if (b.cwiseAbs().maxCoeff() <= tol * scale) {
        iso.continuous_dimension = 1;
        push(ci, 0.0, true);
      }
      continue;
    }
    const Eigen::Vector2d cs = A.transpose() * b / c_norm;
    if ((A * cs - b).norm() <= tol * scale && std::abs(cs.squaredNorm() - 1.0) <= 1e-9) {
      push(ci, std::atan2(cs(1), cs(0)), false);
    }
  }

  std::sort(iso.elements.begin(), iso.elements.end(), [](const auto& a, const auto& b) {
    if (a.coset != b.coset) return a.coset < b.coset;
    return a.alpha < b.alpha;
  });
  return iso;
}

int element_order(const Eigen::MatrixXd& m, int cap, double tol) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd acc = m;
  for (int k = 1; k <= cap; ++k) {
    if (max_abs_diff(acc, Eigen::MatrixXd::Identity(n, n)) <= tol) return k;
    acc = acc * m;
  }
  return 0;
}

IsotropySignature isotropy_signature(const IsotropySubgroup& iso) {
  IsotropySignature sig;
  sig.continuous_dim = iso.continuous_dimension;
  for (const auto& e : iso.elements) {
    if (e.full_circle) continue;
    ++sig.element_count;
    sig.orders.push_back(element_order(e.matrix));
  }
  std::sort(sig.orders.begin(), sig.orders.end());
  return sig;
}

std::string IsotropySignature::str() const {
  std::ostringstream os;
  os << "(c=" << continuous_dim << ",k=" << element_count << ",orders=[";
  for (size_t i = 0; i < orders.size(); ++i) {
    if (i) os << ",";
    os << orders[i];
  }
  os << "])";
  return os.str();
}

std::string format_angle_word(double alpha, const std::string& family_name,
                              const std::string& coset_word) {
  alpha = wrap_angle(alpha);
  if (family_name.empty() || std::abs(alpha) < 1e-9) return coset_word;
  std::ostringstream os;
  os << family_name << "(";
  const auto frac = rationalize(alpha / std::numbers::pi, 120, 1e-9);
  if (frac) {
    if (*frac == Rational(1)) {
      os << "pi";
    } else {
      os << frac->str() << "*pi";
    }
  } else {
    os << alpha;
  }
  os << ")";
  if (coset_word != "E") os << "*" << coset_word;
  return os.str();
}

}  // namespace orbitspace
