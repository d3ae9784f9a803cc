#include "orbitspace/strata.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "orbitspace/errors.hpp"

namespace orbitspace {

namespace {

double weight_scale(const Eigen::VectorXd& p, long w) {
  const double base = std::max(1.0, std::abs(p(p.size() - 1)));
  return std::pow(base, static_cast<double>(w) / 2.0);
}

double eval_p(const Polynomial& f, const Eigen::VectorXd& p) {
  std::vector<double> ps(p.data(), p.data() + p.size());
  return f.evaluate<double>(ps);
}

}  // namespace

const StratumDescriptor* StratumCatalog::find(const std::string& label) const {
  for (const auto& d : descriptors) {
    if (d.label == label) return &d;
  }
  return nullptr;
}

int StratumCatalog::index_of(const std::string& label) const {
  for (size_t i = 0; i < descriptors.size(); ++i) {
    if (descriptors[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

MembershipResult membership(const Eigen::VectorXd& p, const PHatMatrix& ph,
                            const std::vector<Syzygy>& syzygies, double tol) {
  MembershipResult out;
  for (const auto& s : syzygies) {
    const double v = std::abs(eval_p(s.poly, p));
    out.worst_syzygy = std::max(out.worst_syzygy, v / weight_scale(p, s.weight));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ph.evaluate(p));
  const auto& ev = es.eigenvalues();
  out.min_eigenvalue = ev.minCoeff();
  const double eig_scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  out.inside = out.worst_syzygy <= tol && out.min_eigenvalue >= -tol * eig_scale;
  const double cutoff = 1e-7 * eig_scale;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) > cutoff) ++out.rank;
  }
  return out;
}

bool closure_contains(const StratumDescriptor& d, const Eigen::VectorXd& p,
                      const WeightSystem& ws, double tol) {
  for (const auto& g : d.equalities) {
    const long w = g.weight(ws).value_or(2);
    if (std::abs(eval_p(g, p)) > tol * weight_scale(p, w)) return false;
  }
  for (const auto& [g, sign] : d.inequalities) {
    const long w = g.weight(ws).value_or(2);
    if (sign * eval_p(g, p) < -tol * weight_scale(p, w)) return false;
  }
  return true;
}

namespace {

std::vector<const StratumDescriptor*> identify_order(const StratumCatalog& catalog) {
  std::vector<const StratumDescriptor*> order;
  order.reserve(catalog.descriptors.size());
  for (const auto& d : catalog.descriptors) order.push_back(&d);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->equalities.size() != b->equalities.size()) {
      return a->equalities.size() > b->equalities.size();
    }
    if (a->dimension != b->dimension) return a->dimension < b->dimension;
    return a->label < b->label;
  });
  return order;
}

}  // namespace

std::optional<std::string> identify_by_p(const Eigen::VectorXd& p,
                                         const StratumCatalog& catalog) {
  for (const auto* d : identify_order(catalog)) {
    if (closure_contains(*d, p, catalog.phat.weights(), catalog.opts.identify_tol)) {
      return d->label;
    }
  }
  return std::nullopt;
}

std::optional<std::string> identify_stratum(const Eigen::VectorXd& x,
                                            const StratumCatalog& catalog) {
  OrbitMapEvaluator orbit(catalog.mib);
  return identify_by_p(orbit.p(x), catalog);
}

namespace {

struct SampleRecord {
  Eigen::VectorXd x;
  Eigen::VectorXd p;
  int rank = 0;
  int subspace = -1;
  std::vector<int> active_signs;  // -1 / 0 / +1 per active
  IsotropySignature signature;
};

struct Cluster {
  std::vector<int> samples;          // indices into the record list
  std::vector<int> active_signs;
  int rank = 0;
  IsotropySignature signature;
  int split_coord = -1;
  int split_sign = 0;
  std::set<int> sources;
};

std::string cluster_key(const std::vector<int>& signs, int rank,
                        const IsotropySignature& sig) {
  std::ostringstream os;
  os << "r" << rank << "|";
  for (int s : signs) os << (s < 0 ? "-" : (s > 0 ? "+" : "0"));
  os << "|" << sig.str();
  return os.str();
}

// Tangential Newton iteration for one zero of g on the unit sphere of a
// subspace; quadratic convergence onto the zero set of g makes the witness
// check cheap and sharp.
struct WitnessSearch {
  const Eigen::MatrixXd& basis;
  const Polynomial& g;           // in x variables
  const std::vector<Polynomial>& grad;

  std::optional<Eigen::VectorXd> run(Eigen::VectorXd u, int iters, double tol) const {
    u.normalize();
    std::vector<double> xs;
    for (int it = 0; it < iters; ++it) {
      const Eigen::VectorXd x = basis * u;
      xs.assign(x.data(), x.data() + x.size());
      const double val = g.evaluate<double>(xs);
      if (std::abs(val) <= tol) return basis * u;
      Eigen::VectorXd gx(x.size());
      for (int i = 0; i < x.size(); ++i) gx(i) = grad[i].evaluate<double>(xs);
      Eigen::VectorXd gu = basis.transpose() * gx;
      gu -= gu.dot(u) * u;  // tangent component
      const double norm2 = gu.squaredNorm();
      if (norm2 < 1e-18) return std::nullopt;
      u = (u - (val / norm2) * gu).normalized();
    }
    return std::nullopt;
  }
};

}  // namespace

StratumCatalog enumerate_strata(const PHatMatrix& ph,
                                const std::vector<ActivePolynomial>& actives,
                                const std::vector<Syzygy>& syzygies, const MIBSpec& mib,
                                const GroupPresentation& gp, const StrataOptions& opts,
                                Rng& rng) {
  StratumCatalog catalog;
  catalog.mib = mib;
  catalog.phat = ph;
  catalog.actives = actives;
  catalog.syzygies = syzygies;
  catalog.opts = opts;

  const int q = mib.q();
  const auto p_vars = mib.p_vars();
  const auto closure = finite_closure(gp, 4096);
  catalog.subspaces = fixed_subspaces(gp, closure);
  OrbitMapEvaluator orbit(mib);

  long equality_cap = opts.equality_max_weight;
  if (equality_cap == 0) {
    for (const auto& a : actives) equality_cap = std::max(equality_cap, a.weight);
    equality_cap = std::max<long>(equality_cap, mib.weights.degrees.front());
  }

  // ---- sample every fixed subspace at unit norm -------------------------
  std::vector<SampleRecord> records;
  auto make_record = [&](const Eigen::VectorXd& x, int subspace) {
    SampleRecord r;
    r.x = x;
    r.p = orbit.p(x);
    r.rank = ph.rank(r.p, opts.rank_rel_tol);
    r.subspace = subspace;
    for (const auto& a : actives) {
      const double scale = weight_scale(r.p, a.weight);
      const double v = eval_p(a.poly, r.p);
      r.active_signs.push_back(std::abs(v) <= opts.relation_tol * scale ? 0
                               : (v > 0 ? 1 : -1));
    }
    r.signature = isotropy_signature(isotropy_subgroup(x, gp, closure));
    return r;
  };
  for (size_t s = 0; s < catalog.subspaces.size(); ++s) {
    const auto& basis = catalog.subspaces[s].basis;
    for (int i = 0; i < opts.samples_per_subspace; ++i) {
      records.push_back(make_record(basis * rng.unit_vector(static_cast<int>(basis.cols())),
                                    static_cast<int>(s)));
    }
  }

  // ---- primary clustering ----------------------------------------------
  // Samples in the tolerance band of a sheet they do not belong to are
  // detectable: the actives divide det P-hat, so full rank forces every
  // active to be nonzero and deficient rank (away from the origin) forces
  // some active to vanish.
  std::map<std::string, Cluster> clusters;
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    int vanishing = 0;
    for (int s : r.active_signs) {
      if (s == 0) ++vanishing;
    }
    if (r.rank == q && vanishing > 0) continue;
    if (r.rank < q && vanishing == 0 && !actives.empty()) continue;
    auto& c = clusters[cluster_key(r.active_signs, r.rank, r.signature)];
    if (c.samples.empty()) {
      c.active_signs = r.active_signs;
      c.rank = r.rank;
      c.signature = r.signature;
    }
    c.samples.push_back(static_cast<int>(i));
    c.sources.insert(r.subspace);
  }

  std::vector<Cluster> work;
  work.reserve(clusters.size());
  for (auto& [key, c] : clusters) work.push_back(std::move(c));

  // Rank misreads next to a smaller stratum: a genuinely smaller stratum
  // carries more vanishing relations or a larger isotropy signature, so a
  // cluster that differs from another only by a lower rank is a band
  // artifact of the rank threshold.
  {
    IsotropySignature principal_sig;
    for (const auto& c : work) {
      if (c.rank == q) principal_sig = c.signature;
    }
    std::vector<Cluster> kept;
    for (const auto& c : work) {
      bool drop = false;
      for (const auto& d : work) {
        if (&c != &d && c.active_signs == d.active_signs && c.signature == d.signature &&
            c.rank < d.rank) {
          drop = true;
        }
      }
      if (c.rank > 0 && c.rank < q && c.signature == principal_sig) drop = true;
      if (!drop && static_cast<int>(c.samples.size()) < opts.min_cluster_samples) {
        catalog.diagnostics.push_back(
            "enumerate_strata: dropped a micro-cluster of " +
            std::to_string(c.samples.size()) + " sample(s) at rank " + std::to_string(c.rank) +
            ", signature " + c.signature.str());
        drop = true;
      }
      if (!drop) kept.push_back(c);
    }
    work = std::move(kept);
  }

  // ---- split sign-ambiguous clusters ------------------------------------
  // A coordinate with both signs inside one cluster either passes through
  // zero inside the stratum (no split: the zero slice keeps the cluster's
  // rank) or the zero slice falls into a lower stratum (split by sign).
  std::vector<Cluster> final_clusters;
  std::vector<Polynomial> coord_polys;
  std::vector<std::vector<Polynomial>> coord_grads_x;
  for (int a = 0; a < q; ++a) {
    coord_polys.push_back(mib.polys[a]);
    coord_grads_x.push_back(mib.polys[a].gradient());
  }

  std::deque<Cluster> queue(work.begin(), work.end());
  while (!queue.empty()) {
    Cluster c = std::move(queue.front());
    queue.pop_front();
    int split_on = -1;
    for (int a = 0; a < q && split_on < 0; ++a) {
      bool pos = false, neg = false;
      for (int idx : c.samples) {
        const auto& r = records[idx];
        const double scale = weight_scale(r.p, mib.weights.degrees[a]);
        const double v = r.p(a);
        if (v > opts.relation_tol * scale) pos = true;
        if (v < -opts.relation_tol * scale) neg = true;
      }
      if (!(pos && neg)) continue;
      // Witness: a zero of p_a inside a source subspace that keeps both the
      // cluster rank and the cluster signature. Near a pinch the zero set of
      // p_a exits into a smaller stratum, and the signature check rejects
      // the almost-converged points next to it.
      bool witness = false;
      for (int s : c.sources) {
        if (s < 0 || witness) continue;
        WitnessSearch search{catalog.subspaces[s].basis, coord_polys[a], coord_grads_x[a]};
        for (int t = 0; t < opts.witness_starts && !witness; ++t) {
          auto z = search.run(rng.unit_vector(static_cast<int>(
                                  catalog.subspaces[s].basis.cols())),
                              opts.witness_iters, opts.witness_tol);
          if (!z) continue;
          if (ph.rank(orbit.p(*z), opts.rank_rel_tol) != c.rank) continue;
          if (isotropy_signature(isotropy_subgroup(*z, gp, closure)) != c.signature) continue;
          witness = true;
        }
      }
      if (!witness) split_on = a;
    }
    if (split_on < 0) {
      final_clusters.push_back(std::move(c));
      continue;
    }
    Cluster pos = c, neg = c;
    pos.samples.clear();
    neg.samples.clear();
    pos.sources.clear();
    neg.sources.clear();
    pos.split_coord = neg.split_coord = split_on;
    pos.split_sign = 1;
    neg.split_sign = -1;
    for (int idx : c.samples) {
      const auto& r = records[idx];
      const double scale = weight_scale(r.p, mib.weights.degrees[split_on]);
      if (r.p(split_on) > opts.relation_tol * scale) {
        pos.samples.push_back(idx);
        pos.sources.insert(r.subspace);
      } else if (r.p(split_on) < -opts.relation_tol * scale) {
        neg.samples.push_back(idx);
        neg.sources.insert(r.subspace);
      }
    }
    if (!pos.samples.empty()) queue.push_back(std::move(pos));
    if (!neg.samples.empty()) queue.push_back(std::move(neg));
  }

  // ---- build descriptors -------------------------------------------------
  auto coordinate_poly = [&](int a) {
    Exponents e(q, 0);
    e[a] = 1;
    return Polynomial::monomial(p_vars, e, Rational(1));
  };

  std::vector<StratumDescriptor> descriptors;
  std::vector<int> descriptor_split_sign;  // 0 when not from a sign split

  // Origin stratum.
  {
    StratumDescriptor d;
    d.label = "sigma_0";
    for (int a = 0; a < q; ++a) d.equalities.push_back(coordinate_poly(a));
    d.dimension = 0;
    d.signature =
        isotropy_signature(isotropy_subgroup(Eigen::VectorXd::Zero(mib.n()), gp, closure));
    d.representative_x = Eigen::VectorXd::Zero(mib.n());
    d.representative_p = Eigen::VectorXd::Zero(q);
    d.source_subspace = -1;
    descriptors.push_back(std::move(d));
    descriptor_split_sign.push_back(0);
  }

  for (const auto& c : final_clusters) {
    if (c.rank == 0) continue;  // the origin cluster is already in place
    StratumDescriptor d;
    d.dimension = c.rank;
    d.signature = c.signature;

    std::vector<Eigen::VectorXd> cluster_p;
    cluster_p.reserve(c.samples.size());
    for (int idx : c.samples) cluster_p.push_back(records[idx].p);

    // Coordinate sign census inside the cluster.
    std::vector<int> coord_state(q, 9);  // -1, 0, +1, or 9 = mixed
    for (int a = 0; a < q; ++a) {
      bool pos = false, neg = false, zero = false;
      for (const auto& p : cluster_p) {
        const double scale = weight_scale(p, mib.weights.degrees[a]);
        if (p(a) > opts.relation_tol * scale) {
          pos = true;
        } else if (p(a) < -opts.relation_tol * scale) {
          neg = true;
        } else {
          zero = true;
        }
      }
      if (zero && !pos && !neg) {
        coord_state[a] = 0;
      } else if (pos && !neg && !zero) {
        coord_state[a] = 1;
      } else if (neg && !pos && !zero) {
        coord_state[a] = -1;
      }
    }

    // Equalities: vanishing coordinates first, then interpolated relations,
    // then vanishing actives; everything reducible to already-accepted
    // equalities is dropped.
    auto accept = [&](const Polynomial& cand) {
      if (cand.is_zero()) return;
      if (!reduce_weighted(cand, d.equalities, mib.weights).is_zero()) {
        d.equalities.push_back(canonical_signed(cand, mib.weights));
      }
    };
    for (int a = 0; a < q; ++a) {
      if (coord_state[a] == 0) accept(coordinate_poly(a));
    }
    if (c.rank < q) {
      for (long w = 2; w <= equality_cap; ++w) {
        InterpolationResult interp = interpolate_vanishing(cluster_p, w, mib.weights, p_vars);
        for (const auto& cand : interp.candidates) {
          // Interpolated relations must actually vanish on the samples.
          bool holds = true;
          for (const auto& p : cluster_p) {
            if (std::abs(eval_p(cand, p)) > opts.relation_tol * weight_scale(p, w)) {
              holds = false;
              break;
            }
          }
          if (holds) accept(cand);
        }
      }
    }
    for (size_t ai = 0; ai < actives.size(); ++ai) {
      if (c.active_signs[ai] == 0) accept(actives[ai].poly);
    }
    std::sort(d.equalities.begin(), d.equalities.end(),
              [&](const Polynomial& a, const Polynomial& b) {
                const long wa = a.weight(mib.weights).value_or(0);
                const long wb = b.weight(mib.weights).value_or(0);
                if (wa != wb) return wa < wb;
                return a.str() < b.str();
              });

    // Inequalities: stable coordinate signs, the split coordinate, and the
    // nonvanishing actives.
    if (c.split_coord >= 0) {
      d.inequalities.emplace_back(coordinate_poly(c.split_coord), c.split_sign);
    }
    for (int a = 0; a < q; ++a) {
      if (a == c.split_coord) continue;
      if (coord_state[a] == 1 || coord_state[a] == -1) {
        d.inequalities.emplace_back(coordinate_poly(a), coord_state[a]);
      }
    }
    for (size_t ai = 0; ai < actives.size(); ++ai) {
      if (c.active_signs[ai] != 0) {
        d.inequalities.emplace_back(actives[ai].poly, c.active_signs[ai]);
      }
    }

    // Representative: the sample farthest from all its strict boundaries.
    double best_margin = -1.0;
    for (int idx : c.samples) {
      const auto& r = records[idx];
      double margin = 1e300;
      for (const auto& [g, sign] : d.inequalities) {
        const long w = g.weight(mib.weights).value_or(2);
        margin = std::min(margin, sign * eval_p(g, r.p) / weight_scale(r.p, w));
      }
      if (d.inequalities.empty()) margin = 1.0;
      if (margin > best_margin) {
        best_margin = margin;
        d.representative_x = r.x;
        d.representative_p = r.p;
        d.source_subspace = r.subspace;
      }
    }

    descriptors.push_back(std::move(d));
    descriptor_split_sign.push_back(c.split_coord >= 0 ? c.split_sign : 0);
  }

  // ---- labels ------------------------------------------------------------
  // Naming follows the usual section-diagram convention: "sigma_0" for the
  // origin, "sigma_p" for the principal stratum, "sigma_<dim>" otherwise,
  // with "+"/"-" for the two halves of a sign split and letters when several
  // distinct strata share a dimension.
  std::vector<size_t> order(descriptors.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (descriptors[a].dimension != descriptors[b].dimension) {
      return descriptors[a].dimension < descriptors[b].dimension;
    }
    if (descriptor_split_sign[a] != descriptor_split_sign[b]) {
      // unsplit first, then "+", then "-"
      auto key = [](int s) { return s == 0 ? 0 : (s > 0 ? 1 : 2); };
      return key(descriptor_split_sign[a]) < key(descriptor_split_sign[b]);
    }
    return descriptors[a].equalities.size() > descriptors[b].equalities.size();
  });

  std::set<std::string> used;
  used.insert("sigma_0");
  for (size_t pos : order) {
    auto& d = descriptors[pos];
    if (d.label == "sigma_0") continue;
    std::string base = d.dimension == q ? "sigma_p" : "sigma_" + std::to_string(d.dimension);
    if (descriptor_split_sign[pos] > 0) {
      base += "+";
    } else if (descriptor_split_sign[pos] < 0) {
      base += "-";
    }
    std::string label = base;
    for (char extra = 'a'; !used.insert(label).second; ++extra) {
      label = base + std::string(1, extra);
    }
    d.label = label;
  }
  std::sort(descriptors.begin(), descriptors.end(), [](const auto& a, const auto& b) {
    if (a.dimension != b.dimension) return a.dimension < b.dimension;
    return a.label < b.label;
  });
  catalog.descriptors = std::move(descriptors);

  // ---- validation + sample pool ------------------------------------------
  // Fresh samples per descriptor: rank must match the stored dimension and
  // the signature must be constant; the pool also feeds the bordering test.
  catalog.validated_x.assign(catalog.descriptors.size(), {});
  const int origin_idx = catalog.index_of("sigma_0");
  if (origin_idx >= 0) {
    catalog.validated_x[origin_idx].push_back(Eigen::VectorXd::Zero(mib.n()));
  }
  for (int round = 0; round < opts.validation_rounds; ++round) {
    bool saturated = true;
    for (const auto& pool : catalog.validated_x) {
      if (static_cast<int>(pool.size()) < opts.validation_target) saturated = false;
    }
    if (saturated) break;
    for (const auto& sub : catalog.subspaces) {
      for (int i = 0; i < opts.samples_per_subspace / 4 + 1; ++i) {
        const Eigen::VectorXd x = sub.basis * rng.unit_vector(static_cast<int>(sub.basis.cols()));
        const Eigen::VectorXd p = orbit.p(x);
        const auto label = identify_by_p(p, catalog);
        if (!label) {
          catalog.complete = false;
          std::ostringstream os;
          os << "enumerate_strata: sample not separated by the available relations, p = (";
          for (int k = 0; k < p.size(); ++k) os << (k ? ", " : "") << p(k);
          os << ")";
          if (catalog.diagnostics.size() < 10) catalog.diagnostics.push_back(os.str());
          continue;
        }
        const int di = catalog.index_of(*label);
        if (di < 0) continue;
        auto& pool = catalog.validated_x[di];
        if (static_cast<int>(pool.size()) >= opts.validation_target) continue;
        const auto& d = catalog.descriptors[di];
        // Skip the numerically ambiguous shell next to a smaller stratum: the
        // singular values scale with the boundary distance but the rank
        // cutoff scales with the largest matrix entry, so the shell is a few
        // orders of magnitude wider than the rank tolerance itself.
        double margin = 1e300;
        for (const auto& [g, sign] : d.inequalities) {
          const long w = g.weight(mib.weights).value_or(2);
          margin = std::min(margin, sign * eval_p(g, p) / weight_scale(p, w));
        }
        if (!d.inequalities.empty() && margin < 1e3 * opts.rank_rel_tol) continue;
        if (ph.rank(p, opts.rank_rel_tol) != d.dimension) {
          catalog.complete = false;
          catalog.diagnostics.push_back("enumerate_strata: rank drift in " + d.label);
          continue;
        }
        if (isotropy_signature(isotropy_subgroup(x, gp, closure)) != d.signature) {
          catalog.complete = false;
          catalog.diagnostics.push_back("enumerate_strata: signature drift in " + d.label);
          continue;
        }
        pool.push_back(x);
      }
    }
  }
  for (size_t i = 0; i < catalog.descriptors.size(); ++i) {
    if (catalog.validated_x[i].empty()) {
      catalog.complete = false;
      catalog.diagnostics.push_back("enumerate_strata: no validated samples for " +
                                    catalog.descriptors[i].label);
    }
  }
  return catalog;
}

StratumGraph bordering(const StratumCatalog& catalog) {
  StratumGraph graph;
  const auto& ds = catalog.descriptors;
  for (const auto& d : ds) graph.labels.push_back(d.label);
  OrbitMapEvaluator orbit(catalog.mib);
  for (size_t i = 0; i < ds.size(); ++i) {
    for (size_t j = 0; j < ds.size(); ++j) {
      if (ds[i].dimension >= ds[j].dimension) continue;
      bool all_inside = true;
      for (const auto& x : catalog.validated_x[i]) {
        if (!closure_contains(ds[j], orbit.p(x), catalog.phat.weights(),
                              catalog.opts.bordering_tol)) {
          all_inside = false;
          break;
        }
      }
      if (all_inside && !catalog.validated_x[i].empty()) {
        graph.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return graph;
}

bool StratumGraph::borders(int smaller, int larger) const {
  return std::find(edges.begin(), edges.end(), std::make_pair(smaller, larger)) != edges.end();
}

std::vector<std::pair<std::string, std::string>> allowed_transitions(
    const StratumGraph& graph, const StratumCatalog& catalog) {
  std::set<std::pair<std::string, std::string>> pairs;
  auto norm = [](std::string a, std::string b) {
    if (a > b) std::swap(a, b);
    return std::make_pair(a, b);
  };
  for (const auto& [i, j] : graph.edges) {
    pairs.insert(norm(graph.labels[i], graph.labels[j]));
  }
  // All pairs involving the origin or the principal stratum are allowed.
  std::vector<std::string> special;
  for (const auto& d : catalog.descriptors) {
    if (d.dimension == 0 || d.dimension == catalog.mib.q()) special.push_back(d.label);
  }
  for (const auto& s : special) {
    for (const auto& d : catalog.descriptors) {
      if (d.label != s) pairs.insert(norm(s, d.label));
    }
  }
  return {pairs.begin(), pairs.end()};
}

std::vector<SectionPoint> section(const StratumCatalog& catalog, double r2, int grid) {
  if (catalog.mib.q() != 3) {
    throw ComputationError("section: planar section export requires q == 3");
  }
  if (r2 <= 0) throw std::invalid_argument("section: r2 must be positive");
  std::vector<SectionPoint> out;
  out.reserve(static_cast<size_t>(grid) * grid);
  const double p3 = r2;
  const double p1_max = 2.2 * p3 * p3 * p3;
  const double p2_min = -0.1 * p3 * p3;
  const double p2_max = 1.1 * p3 * p3;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      Eigen::VectorXd p(3);
      p(0) = -p1_max + 2 * p1_max * (i + 0.5) / grid;
      p(1) = p2_min + (p2_max - p2_min) * (j + 0.5) / grid;
      p(2) = p3;
      MembershipResult m = membership(p, catalog.phat, catalog.syzygies, 1e-9);
      std::string label = "outside";
      if (m.inside) {
        label = identify_by_p(p, catalog).value_or("unresolved");
      }
      out.push_back({p(0), p(1), p(2), std::move(label)});
    }
  }
  return out;
}

}  // namespace orbitspace
