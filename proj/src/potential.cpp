#include "orbitspace/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orbitspace/errors.hpp"

namespace orbitspace {

void PotentialSpec::validate(const WeightSystem& ws) const {
  for (const auto& t : terms) {
    if (static_cast<int>(t.monomial.size()) != ws.size()) {
      throw ConfigError("PotentialSpec: monomial length does not match the weight system");
    }
    for (int e : t.monomial) {
      if (e < 0) throw ConfigError("PotentialSpec: negative exponent");
    }
    if (t.parameter) {
      bool known = false;
      for (const auto& p : parameters) known = known || p.name == *t.parameter;
      if (!known) throw ConfigError("PotentialSpec: unknown parameter '" + *t.parameter + "'");
    }
  }
  int swept = 0;
  for (const auto& p : parameters) {
    if (p.swept) {
      ++swept;
      if (p.steps < 2) throw ConfigError("PotentialSpec: swept parameter needs >= 2 steps");
    }
  }
  if (swept > 2) throw ConfigError("PotentialSpec: at most two swept parameters");
}

InstantiatedPotential::InstantiatedPotential(const PotentialSpec& spec,
                                             const std::map<std::string, double>& params,
                                             const WeightSystem& ws)
    : ws_(ws) {
  for (const auto& t : spec.terms) {
    double c = t.scale.to_double();
    if (t.parameter) {
      auto it = params.find(*t.parameter);
      if (it == params.end()) {
        throw ConfigError("InstantiatedPotential: missing value for '" + *t.parameter + "'");
      }
      c *= it->second;
    }
    if (c == 0.0) continue;
    terms_.emplace_back(t.monomial, c);
    max_weight_ = std::max(max_weight_, ws.weight_of(t.monomial));
  }
}

double InstantiatedPotential::evaluate_p(const Eigen::VectorXd& p) const {
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double v = c;
    for (size_t a = 0; a < e.size(); ++a) {
      for (int k = 0; k < e[a]; ++k) v *= p(static_cast<int>(a));
    }
    acc += v;
  }
  return acc;
}

Eigen::VectorXd InstantiatedPotential::gradient_p(const Eigen::VectorXd& p) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(p.size());
  for (const auto& [e, c] : terms_) {
    for (size_t a = 0; a < e.size(); ++a) {
      if (e[a] == 0) continue;
      double v = c * e[a];
      for (size_t b = 0; b < e.size(); ++b) {
        const int pow = e[b] - (b == a ? 1 : 0);
        for (int k = 0; k < pow; ++k) v *= p(static_cast<int>(b));
      }
      g(static_cast<int>(a)) += v;
    }
  }
  return g;
}

double InstantiatedPotential::leading_part(const Eigen::VectorXd& p) const {
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    if (ws_.weight_of(e) != max_weight_) continue;
    double v = c;
    for (size_t a = 0; a < e.size(); ++a) {
      for (int k = 0; k < e[a]; ++k) v *= p(static_cast<int>(a));
    }
    acc += v;
  }
  return acc;
}

ScreenReport boundedness_screen(const InstantiatedPotential& pot, const MIBSpec& mib, int rays,
                                Rng& rng, double tol) {
  ScreenReport report;
  report.rays = rays;
  OrbitMapEvaluator orbit(mib);
  double min_leading = 1e300;
  for (int i = 0; i < rays; ++i) {
    const Eigen::VectorXd x = rng.unit_vector(mib.n());
    min_leading = std::min(min_leading, pot.leading_part(orbit.p(x)));
  }
  report.min_leading = min_leading;
  if (min_leading < -tol) {
    report.verdict = Boundedness::Unbounded;
  } else if (min_leading > tol) {
    report.verdict = Boundedness::Bounded;
  } else {
    report.verdict = Boundedness::Inconclusive;
  }
  return report;
}

namespace {

// Gradient descent with backtracking on f(u) = V(p(B u)).
struct SubspaceDescent {
  const InstantiatedPotential& pot;
  const OrbitMapEvaluator& orbit;
  const Eigen::MatrixXd& basis;

  double value(const Eigen::VectorXd& u) const { return pot.evaluate_p(orbit.p(basis * u)); }

  Eigen::VectorXd grad(const Eigen::VectorXd& u) const {
    const Eigen::VectorXd x = basis * u;
    const Eigen::VectorXd gp = pot.gradient_p(orbit.p(x));
    return basis.transpose() * (orbit.jacobian(x).transpose() * gp);
  }
};

}  // namespace

MinimizeResult minimize_on_stratum(const InstantiatedPotential& pot,
                                   const StratumDescriptor& descriptor,
                                   const StratumCatalog& catalog, const MinimizeOptions& opts,
                                   Rng& rng) {
  MinimizeResult out;
  OrbitMapEvaluator orbit(catalog.mib);
  const int n = catalog.mib.n();

  if (descriptor.source_subspace < 0) {
    // The origin stratum is the single point x = 0.
    out.status = MinimizeStatus::Attained;
    out.x = Eigen::VectorXd::Zero(n);
    out.p = orbit.p(out.x);
    out.value = pot.evaluate_p(out.p);
    out.landed_label = descriptor.label;
    return out;
  }

  const Eigen::MatrixXd& basis = catalog.subspaces[descriptor.source_subspace].basis;
  const int k = static_cast<int>(basis.cols());
  SubspaceDescent descent{pot, orbit, basis};

  bool diverged = false;
  bool have_best = false;
  double best_value = 0.0;
  Eigen::VectorXd best_u;

  for (int start = 0; start < opts.multistarts; ++start) {
    Eigen::VectorXd u = opts.start_radius * rng.ball_vector(k);
    double f = descent.value(u);
    Eigen::VectorXd g = descent.grad(u);
    double step = 1.0 / std::max(1.0, g.norm());
    bool this_diverged = false;
    int stalled = 0;
    for (int it = 0; it < opts.max_iters; ++it) {
      const double gnorm = g.norm();
      if (gnorm <= opts.grad_tol * std::max(1.0, std::abs(f))) break;
      bool moved = false;
      double t = step;
      for (int bt = 0; bt < 60; ++bt) {
        const Eigen::VectorXd trial = u - t * g;
        const double ft = descent.value(trial);
        if (ft <= f - 1e-4 * t * gnorm * gnorm) {
          const Eigen::VectorXd g_new = descent.grad(trial);
          // Barzilai-Borwein step for the next iteration
          const Eigen::VectorXd du = trial - u;
          const Eigen::VectorXd dg = g_new - g;
          const double dgg = dg.squaredNorm();
          step = dgg > 1e-300 ? std::abs(du.dot(dg)) / dgg : t * 2;
          step = std::clamp(step, 1e-14, 1e6);
          stalled = (f - ft <= 1e-16 * std::max(1.0, std::abs(f))) ? stalled + 1 : 0;
          u = trial;
          f = ft;
          g = g_new;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved || stalled > 25) break;
      if (u.norm() > opts.max_radius) {
        this_diverged = true;
        break;
      }
    }
    if (this_diverged) {
      diverged = true;
      continue;
    }
    if (!have_best || f < best_value) {
      have_best = true;
      best_value = f;
      best_u = u;
    }
  }

  if (!have_best) {
    out.status = diverged ? MinimizeStatus::Diverged : MinimizeStatus::Empty;
    if (diverged) out.value = -std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = best_value;
  out.x = basis * best_u;
  out.p = orbit.p(out.x);
  out.landed_label = identify_by_p(out.p, catalog).value_or("");
  out.status = out.landed_label == descriptor.label ? MinimizeStatus::Attained
                                                    : MinimizeStatus::BoundaryInfimum;
  return out;
}

PhasePoint stable_phase(const InstantiatedPotential& pot, const StratumCatalog& catalog,
                        const StablePhaseOptions& opts, Rng& rng) {
  PhasePoint out;
  ScreenReport screen = boundedness_screen(pot, catalog.mib, opts.screen_rays, rng);
  out.screen_bounded = screen.verdict == Boundedness::Bounded;
  if (screen.verdict != Boundedness::Bounded && !opts.screen_override) {
    std::ostringstream os;
    os << "stable_phase: boundedness screen verdict is "
       << (screen.verdict == Boundedness::Unbounded ? "unbounded" : "inconclusive")
       << " (min leading value " << screen.min_leading
       << "); pass the unbounded override to search for local minima anyway";
    throw ComputationError(os.str());
  }

  struct Entry {
    const StratumDescriptor* d;
    MinimizeResult r;
  };
  std::vector<Entry> attained;
  bool any_result = false;
  for (size_t i = 0; i < catalog.descriptors.size(); ++i) {
    Rng stratum_rng = rng.fork(1000 + i);
    MinimizeResult r = minimize_on_stratum(pot, catalog.descriptors[i], catalog, opts.minimize,
                                           stratum_rng);
    if (r.status == MinimizeStatus::Attained) {
      attained.push_back({&catalog.descriptors[i], std::move(r)});
      any_result = true;
    } else if (r.status == MinimizeStatus::BoundaryInfimum) {
      any_result = true;  // its value is realized by some smaller stratum's own entry
    }
  }
  if (attained.empty()) {
    if (!any_result) throw AllUnbounded("stable_phase: descent diverged on every stratum");
    throw ComputationError("stable_phase: no stratum attains its infimum");
  }

  std::sort(attained.begin(), attained.end(), [](const Entry& a, const Entry& b) {
    if (a.r.value != b.r.value) return a.r.value < b.r.value;
    return a.d->dimension < b.d->dimension;
  });
  const Entry* best = &attained.front();
  // Tie-break toward the most symmetric (smallest-dimension) stratum.
  const double tie = opts.degeneracy_rel_tol * std::max(1.0, std::abs(best->r.value));
  for (auto& e : attained) {
    if (e.r.value <= best->r.value + tie && e.d->dimension < best->d->dimension) best = &e;
  }

  int ties = 0;
  for (const auto& e : attained) {
    if (e.r.value <= best->r.value + tie) ++ties;
  }
  out.degenerate = ties > 1;

  // Degenerate as well when the argmin sits on the closure of a smaller
  // stratum (the minimum migrates to the boundary).
  for (const auto& d : catalog.descriptors) {
    if (d.label == best->d->label || d.dimension >= best->d->dimension) continue;
    if (closure_contains(d, best->r.p, catalog.phat.weights(), catalog.opts.identify_tol)) {
      out.degenerate = true;
    }
  }

  out.label = best->d->label;
  out.value = best->r.value;
  out.p = best->r.p;
  out.x = best->r.x;
  return out;
}

PhaseSweepResult phase_sweep(const PotentialSpec& family, const StratumCatalog& catalog,
                             const StratumGraph& graph, const StablePhaseOptions& opts,
                             Rng& rng) {
  family.validate(catalog.phat.weights());
  PhaseSweepResult out;
  std::vector<const ParameterSpec*> swept;
  std::map<std::string, double> fixed;
  for (const auto& p : family.parameters) {
    if (p.swept) {
      swept.push_back(&p);
      out.sweep_parameters.push_back(p.name);
    } else {
      fixed[p.name] = p.value;
    }
  }
  const int ni = swept.empty() ? 1 : swept[0]->steps;
  const int nj = swept.size() > 1 ? swept[1]->steps : 1;

  auto cell_params = [&](int i, int j) {
    std::map<std::string, double> params = fixed;
    if (!swept.empty()) {
      params[swept[0]->name] =
          swept[0]->min + (swept[0]->max - swept[0]->min) * i / std::max(1, ni - 1);
    }
    if (swept.size() > 1) {
      params[swept[1]->name] =
          swept[1]->min + (swept[1]->max - swept[1]->min) * j / std::max(1, nj - 1);
    }
    return params;
  };

  StablePhaseOptions cell_opts = opts;
  if (family.allow_unbounded) cell_opts.screen_override = true;

  std::vector<std::vector<PhasePoint>> cells(ni, std::vector<PhasePoint>(nj));
  for (int i = 0; i < ni; ++i) {
    for (int j = 0; j < nj; ++j) {
      const auto params = cell_params(i, j);
      InstantiatedPotential pot(family, params, catalog.phat.weights());
      Rng cell_rng = rng.fork(static_cast<std::uint64_t>(i) * 100003 + j);
      PhasePoint pp = stable_phase(pot, catalog, cell_opts, cell_rng);
      pp.parameters = params;
      cells[i][j] = pp;
      out.grid.push_back(cells[i][j]);
    }
  }

  auto record = [&](const PhasePoint& a, const PhasePoint& b) {
    if (a.label == b.label) return;
    SweepTransition t;
    t.from_params = a.parameters;
    t.to_params = b.parameters;
    t.from_label = a.label;
    t.to_label = b.label;
    const int ia = catalog.index_of(a.label);
    const int ib = catalog.index_of(b.label);
    if (ia >= 0 && ib >= 0) {
      t.second_order_allowed = graph.borders(std::min(ia, ib), std::max(ia, ib)) ||
                               graph.borders(std::max(ia, ib), std::min(ia, ib));
      const int da = catalog.descriptors[ia].dimension;
      const int db = catalog.descriptors[ib].dimension;
      t.second_order_allowed =
          t.second_order_allowed ||
          (da < db ? graph.borders(ia, ib) : graph.borders(ib, ia));
      // Pairs with the origin or principal stratum are always allowed.
      if (da == 0 || db == 0 || da == catalog.mib.q() || db == catalog.mib.q()) {
        t.second_order_allowed = true;
      }
    }
    out.transitions.push_back(std::move(t));
  };
  for (int i = 0; i < ni; ++i) {
    for (int j = 0; j < nj; ++j) {
      if (i + 1 < ni) record(cells[i][j], cells[i + 1][j]);
      if (j + 1 < nj) record(cells[i][j], cells[i][j + 1]);
    }
  }
  return out;
}

Observables observables(const Eigen::VectorXd& p, double tol) {
  if (p.size() < 2) throw std::invalid_argument("observables: need at least two invariants");
  Observables out;
  const int q = static_cast<int>(p.size());
  out.n = p(q - 1);
  const double disc = p(q - 1) * p(q - 1) - p(q - 2);
  const double scale = std::max(1.0, p(q - 1) * p(q - 1));
  if (disc < -tol * scale) {
    std::ostringstream os;
    os << "observables: negative discriminant " << disc << " (point outside the orbit space)";
    throw ComputationError(os.str());
  }
  out.z = std::sqrt(std::max(disc, 0.0));
  // The flag is decided on the discriminant: the square root turns rounding
  // noise of an exact zero into ~1e-8, the discriminant stays at ~1e-16.
  out.magnetic = disc > tol * scale;
  return out;
}

}  // namespace orbitspace
