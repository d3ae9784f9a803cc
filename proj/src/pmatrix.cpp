#include "orbitspace/pmatrix.hpp"

#include <algorithm>
#include <map>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "orbitspace/errors.hpp"

namespace orbitspace {

std::vector<std::string> MIBSpec::p_vars() const {
  std::vector<std::string> out;
  out.reserve(polys.size());
  for (size_t a = 0; a < polys.size(); ++a) out.push_back("p" + std::to_string(a + 1));
  return out;
}

void MIBSpec::validate() const {
  weights.validate();
  if (static_cast<int>(polys.size()) != weights.size()) {
    throw ConfigError("MIBSpec: degree list and polynomial list differ in length");
  }
  if (x_vars.empty()) throw ConfigError("MIBSpec: no variables");
  for (int a = 0; a < q(); ++a) {
    if (polys[a].variables() != x_vars) {
      throw ConfigError("MIBSpec: p" + std::to_string(a + 1) + " uses a foreign variable list");
    }
    if (polys[a].is_zero() || !polys[a].is_homogeneous() ||
        polys[a].degree() != weights.degrees[a]) {
      throw ConfigError("MIBSpec: p" + std::to_string(a + 1) +
                        " is not homogeneous of the declared degree");
    }
  }
  Polynomial norm2(x_vars);
  for (int i = 0; i < n(); ++i) {
    Exponents e(n(), 0);
    e[i] = 2;
    norm2 = norm2 + Polynomial::monomial(x_vars, e, Rational(1));
  }
  if (!(polys.back() == norm2)) {
    throw ConfigError("MIBSpec: the last basis element must be |x|^2 exactly");
  }
}

CompiledPoly::CompiledPoly(const Polynomial& p) : nvars_(p.variable_count()) {
  coeffs_.reserve(p.term_count());
  exps_.reserve(static_cast<size_t>(p.term_count()) * nvars_);
  for (const auto& [e, c] : p.terms()) {
    coeffs_.push_back(c.to_double());
    exps_.insert(exps_.end(), e.begin(), e.end());
  }
}

OrbitMapEvaluator::OrbitMapEvaluator(const MIBSpec& mib) : n_(mib.n()), q_(mib.q()) {
  polys_.reserve(mib.polys.size());
  gradients_.reserve(mib.polys.size());
  for (const auto& p : mib.polys) {
    polys_.emplace_back(p);
    std::vector<CompiledPoly> row;
    for (const auto& g : p.gradient()) row.emplace_back(g);
    gradients_.push_back(std::move(row));
  }
}

Eigen::VectorXd OrbitMapEvaluator::p(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(q_);
  for (int a = 0; a < q_; ++a) out(a) = polys_[a].eval(x.data());
  return out;
}

Eigen::MatrixXd OrbitMapEvaluator::jacobian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out(q_, n_);
  for (int a = 0; a < q_; ++a) {
    for (int i = 0; i < n_; ++i) out(a, i) = gradients_[a][i].eval(x.data());
  }
  return out;
}

Eigen::MatrixXd OrbitMapEvaluator::gram(const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd j = jacobian(x);
  return j * j.transpose();
}

Polynomial compose_with_orbit_map(const Polynomial& f_hat, const MIBSpec& mib) {
  return substitute(f_hat, mib.polys);
}

ExpressResult express_in_mib(const Polynomial& f, const MIBSpec& mib) {
  ExpressResult out;
  const auto p_vars = mib.p_vars();
  if (f.is_zero()) {
    out.expression = Polynomial(p_vars);
    return out;
  }
  if (!f.is_homogeneous()) {
    throw std::invalid_argument("express_in_mib: f must be homogeneous");
  }
  const long degree = f.degree();
  const auto monos = w_monomials(degree, mib.weights);

  // Column a = x-expansion of the a-th w-monomial; match coefficients.
  std::vector<Polynomial> columns;
  columns.reserve(monos.size());
  std::map<Exponents, int, GrlexGreater> row_index;
  auto note_rows = [&](const Polynomial& p) {
    for (const auto& [e, c] : p.terms()) row_index.emplace(e, 0);
  };
  note_rows(f);
  for (const auto& m : monos) {
    Polynomial composed =
        compose_with_orbit_map(Polynomial::monomial(p_vars, m, Rational(1)), mib);
    note_rows(composed);
    columns.push_back(std::move(composed));
  }
  int idx = 0;
  for (auto& [e, i] : row_index) i = idx++;

  RationalMatrix A = RationalMatrix::Constant(idx, static_cast<int>(columns.size()), Rational(0));
  RationalVector b = RationalVector::Constant(idx, Rational(0));
  for (size_t c = 0; c < columns.size(); ++c) {
    for (const auto& [e, coeff] : columns[c].terms()) {
      A(row_index.at(e), static_cast<int>(c)) = coeff;
    }
  }
  for (const auto& [e, coeff] : f.terms()) b(row_index.at(e)) = coeff;

  ExactLinearSolution sol = solve_exact(A, b);
  for (const auto& k : sol.kernel) {
    Polynomial syz(p_vars);
    for (size_t c = 0; c < monos.size(); ++c) {
      if (!k(static_cast<int>(c)).is_zero()) {
        syz = syz + Polynomial::monomial(p_vars, monos[c], k(static_cast<int>(c)));
      }
    }
    out.kernel.push_back(std::move(syz));
  }
  if (!sol.consistent) return out;

  RationalVector chosen = sol.particular;
  if (!sol.kernel.empty()) {
    // Underdetermined (a syzygy is present): search for the solution with the
    // fewest nonzero coefficients. Subsets are enumerated smallest first in
    // the graded-lex order of the monomial list, so the result is canonical.
    const int cols = static_cast<int>(columns.size());
    bool found = false;
    long budget = 200000;
    std::vector<int> subset;
    auto try_subset = [&](const std::vector<int>& cs) -> bool {
      RationalMatrix As = RationalMatrix::Constant(idx, static_cast<int>(cs.size()), Rational(0));
      for (size_t c = 0; c < cs.size(); ++c) {
        for (int r = 0; r < idx; ++r) As(r, static_cast<int>(c)) = A(r, cs[c]);
      }
      ExactLinearSolution s = solve_exact(As, b);
      if (!s.consistent) return false;
      chosen = RationalVector::Constant(cols, Rational(0));
      for (size_t c = 0; c < cs.size(); ++c) chosen(cs[c]) = s.particular(static_cast<int>(c));
      return true;
    };
    for (int size = 1; size <= cols && !found && budget > 0; ++size) {
      std::vector<int> cs(size);
      auto rec = [&](auto&& self, int pos, int next) -> bool {
        if (budget-- <= 0) return false;
        if (pos == size) return try_subset(cs);
        for (int c = next; c <= cols - (size - pos); ++c) {
          cs[pos] = c;
          if (self(self, pos + 1, c + 1)) return true;
        }
        return false;
      };
      found = rec(rec, 0, 0);
    }
    // On budget exhaustion the particular solution stands.
  }

  Polynomial expr(p_vars);
  for (size_t c = 0; c < monos.size(); ++c) {
    if (!chosen(static_cast<int>(c)).is_zero()) {
      expr = expr + Polynomial::monomial(p_vars, monos[c], chosen(static_cast<int>(c)));
    }
  }
  out.expression = std::move(expr);
  return out;
}

PHatMatrix::PHatMatrix(std::vector<Polynomial> entries, WeightSystem ws,
                       std::vector<std::string> p_vars)
    : entries_(std::move(entries)), ws_(std::move(ws)), p_vars_(std::move(p_vars)) {
  q_ = ws_.size();
  if (static_cast<int>(entries_.size()) != q_ * q_) {
    throw std::invalid_argument("PHatMatrix: entry count must be q*q");
  }
}

const Polynomial& PHatMatrix::at(int a, int b) const { return entries_.at(a * q_ + b); }

Eigen::MatrixXd PHatMatrix::evaluate(const Eigen::VectorXd& p) const {
  std::vector<double> ps(p.data(), p.data() + p.size());
  Eigen::MatrixXd out(q_, q_);
  for (int a = 0; a < q_; ++a) {
    for (int b = a; b < q_; ++b) {
      out(a, b) = out(b, a) = at(a, b).evaluate<double>(ps);
    }
  }
  return out;
}

RationalMatrix PHatMatrix::evaluate_exact(const std::vector<Rational>& p) const {
  RationalMatrix out(q_, q_);
  for (int a = 0; a < q_; ++a) {
    for (int b = 0; b < q_; ++b) out(a, b) = at(a, b).evaluate<Rational>(p);
  }
  return out;
}

int PHatMatrix::rank(const Eigen::VectorXd& p, double rel_tol) const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(evaluate(p));
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = rel_tol * std::max(sv(0), 1e-300);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++r;
  }
  return r;
}

double PHatMatrix::min_eigenvalue(const Eigen::VectorXd& p) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(evaluate(p));
  return es.eigenvalues().minCoeff();
}

PHatMatrix compute_phat(const MIBSpec& mib) {
  mib.validate();
  const int q = mib.q();
  const auto p_vars = mib.p_vars();
  std::vector<std::vector<Polynomial>> grads;
  grads.reserve(q);
  for (const auto& p : mib.polys) grads.push_back(p.gradient());

  std::vector<Polynomial> entries(static_cast<size_t>(q) * q, Polynomial(p_vars));
  for (int a = 0; a < q; ++a) {
    for (int b = a; b < q; ++b) {
      Polynomial dot(mib.x_vars);
      for (int i = 0; i < mib.n(); ++i) dot = dot + grads[a][i] * grads[b][i];
      ExpressResult res = express_in_mib(dot, mib);
      if (!res.expression) {
        throw NotExpressible("compute_phat: entry (" + std::to_string(a + 1) + "," +
                             std::to_string(b + 1) +
                             ") is not in the algebra generated by the basis; "
                             "the basis is not an integrity basis for this action");
      }
      entries[a * q + b] = *res.expression;
      entries[b * q + a] = *res.expression;
    }
  }

  PHatMatrix ph(std::move(entries), mib.weights, p_vars);
  // Grading checks: entry (a,b) has weight d_a + d_b - 2, and the last row is
  // exactly 2 d_a p_a by Euler's identity.
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      const auto w = ph.at(a, b).weight(mib.weights);
      if (!w || (!ph.at(a, b).is_zero() &&
                 *w != mib.weights.degrees[a] + mib.weights.degrees[b] - 2)) {
        throw ComputationError("compute_phat: entry weight grading violated");
      }
    }
  }
  for (int a = 0; a < q; ++a) {
    Exponents e(q, 0);
    e[a] = 1;
    const Polynomial expected =
        Polynomial::monomial(p_vars, e, Rational(2L * mib.weights.degrees[a]));
    if (!(ph.at(q - 1, a) == expected)) {
      throw ComputationError("compute_phat: last-row identity 2*d_a*p_a violated");
    }
  }
  return ph;
}

namespace {
Polynomial det_recursive(const PHatMatrix& ph, std::vector<int> rows, std::vector<int> cols) {
  const auto& vars = ph.p_vars();
  if (rows.empty()) return Polynomial::constant(vars, Rational(1));
  Polynomial acc(vars);
  const int r = rows[0];
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (size_t k = 0; k < cols.size(); ++k) {
    const Polynomial& e = ph.at(r, cols[k]);
    if (e.is_zero()) continue;
    std::vector<int> sub_cols;
    sub_cols.reserve(cols.size() - 1);
    for (size_t m = 0; m < cols.size(); ++m) {
      if (m != k) sub_cols.push_back(cols[m]);
    }
    Polynomial minor = det_recursive(ph, sub_rows, sub_cols);
    Polynomial term = e * minor;
    acc = (k % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}
}  // namespace

Polynomial det_phat(const PHatMatrix& ph) {
  std::vector<int> idx(ph.q());
  for (int i = 0; i < ph.q(); ++i) idx[i] = i;
  return det_recursive(ph, idx, idx);
}

std::vector<Syzygy> find_syzygies(const MIBSpec& mib, long max_weight) {
  std::vector<Syzygy> out;
  const auto p_vars = mib.p_vars();
  std::vector<Polynomial> found;
  for (long w = 1; w <= max_weight; ++w) {
    const auto monos = w_monomials(w, mib.weights);
    if (monos.empty()) continue;

    std::map<Exponents, int, GrlexGreater> row_index;
    std::vector<Polynomial> columns;
    columns.reserve(monos.size());
    for (const auto& m : monos) {
      Polynomial composed =
          compose_with_orbit_map(Polynomial::monomial(p_vars, m, Rational(1)), mib);
      for (const auto& [e, c] : composed.terms()) row_index.emplace(e, 0);
      columns.push_back(std::move(composed));
    }
    int idx = 0;
    for (auto& [e, i] : row_index) i = idx++;
    RationalMatrix A =
        RationalMatrix::Constant(std::max(idx, 1), static_cast<int>(columns.size()), Rational(0));
    for (size_t c = 0; c < columns.size(); ++c) {
      for (const auto& [e, coeff] : columns[c].terms()) {
        A(row_index.at(e), static_cast<int>(c)) = coeff;
      }
    }
    for (const auto& k : nullspace_exact(A)) {
      Polynomial syz(p_vars);
      for (size_t c = 0; c < monos.size(); ++c) {
        if (!k(static_cast<int>(c)).is_zero()) {
          syz = syz + Polynomial::monomial(p_vars, monos[c], k(static_cast<int>(c)));
        }
      }
      if (!reduce_weighted(syz, found, mib.weights).is_zero()) {
        syz = canonical_signed(syz, mib.weights);
        found.push_back(syz);
        out.push_back({std::move(syz), w});
      }
    }
  }
  return out;
}

}  // namespace orbitspace
