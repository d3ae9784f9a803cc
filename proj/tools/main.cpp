// Command-line front end: builds the P-hat matrix of a configured group
// action, finds the active polynomials, enumerates the orbit-space strata and
// transitions, exports plot sections, and analyzes Landau potentials.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "orbitspace/active.hpp"
#include "orbitspace/config.hpp"
#include "orbitspace/errors.hpp"
#include "orbitspace/potential.hpp"
#include "orbitspace/strata.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace orbitspace;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitComputation = 2;
constexpr int kExitGoldenMismatch = 3;

double round12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::atof(buf);
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json vec_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(round12(v(i)));
  return out;
}

// Everything the subcommands need, computed lazily and cached so `all` does
// each stage once.
struct Pipeline {
  AnalysisConfig cfg;
  Rng rng;

  explicit Pipeline(AnalysisConfig c) : cfg(std::move(c)), rng(cfg.seed) {}

  const std::vector<GroupElement>& closure() {
    if (!closure_) closure_ = finite_closure(cfg.group, cfg.tolerances.closure_max_elements);
    return *closure_;
  }
  const std::vector<FixedSubspace>& subspaces() {
    if (!subspaces_) subspaces_ = fixed_subspaces(cfg.group, closure());
    return *subspaces_;
  }
  const PHatMatrix& phat() {
    if (!phat_) {
      cfg.mib.validate();
      phat_ = compute_phat(cfg.mib);
    }
    return *phat_;
  }
  const Polynomial& det() {
    if (!det_) det_ = det_phat(phat());
    return *det_;
  }
  const std::vector<Syzygy>& syzygies() {
    if (!syzygies_) {
      long cap = cfg.tolerances.syzygy_max_weight;
      if (cap == 0) {
        for (int a = 0; a < cfg.mib.q(); ++a) {
          for (int b = 0; b < cfg.mib.q(); ++b) {
            const auto w = phat().at(a, b).weight(cfg.mib.weights);
            if (w) cap = std::max(cap, 2 * *w);
          }
        }
      }
      syzygies_ = find_syzygies(cfg.mib, cap);
    }
    return *syzygies_;
  }
  const FindActiveResult& actives() {
    if (!actives_) {
      Rng r = rng.fork(1);
      actives_ = find_active(phat(), cfg.mib, subspaces(), cfg.active, r);
    }
    return *actives_;
  }
  const StratumCatalog& catalog() {
    if (!catalog_) {
      Rng r = rng.fork(2);
      catalog_ =
          enumerate_strata(phat(), actives().actives, syzygies(), cfg.mib, cfg.group,
                           cfg.strata, r);
      if (!catalog_->complete) {
        for (const auto& d : catalog_->diagnostics) std::cerr << "warning: " << d << "\n";
        throw IncompleteCover("strata catalog is incomplete; see warnings above");
      }
    }
    return *catalog_;
  }
  const StratumGraph& graph() {
    if (!graph_) graph_ = bordering(catalog());
    return *graph_;
  }

 private:
  std::optional<std::vector<GroupElement>> closure_;
  std::optional<std::vector<FixedSubspace>> subspaces_;
  std::optional<PHatMatrix> phat_;
  std::optional<Polynomial> det_;
  std::optional<std::vector<Syzygy>> syzygies_;
  std::optional<FindActiveResult> actives_;
  std::optional<StratumCatalog> catalog_;
  std::optional<StratumGraph> graph_;
};

struct Output {
  fs::path dir;
  std::vector<fs::path> written;

  void write_text(const std::string& name, const std::string& content) {
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    written.push_back(path);
    std::cout << "wrote " << path.string() << "\n";
  }
  void write_json(const std::string& name, const json& j) {
    write_text(name, j.dump(2) + "\n");
  }
};

// ---- subcommand bodies ------------------------------------------------------

int run_verify(Pipeline& pl, Output& out) {
  json report;
  std::ostringstream table;
  bool ok = true;
  try {
    pl.cfg.mib.validate();
    report["mib_structure"] = "ok";
    table << "MIB structure: ok\n";
  } catch (const std::exception& e) {
    report["mib_structure"] = e.what();
    table << "MIB structure: FAIL (" << e.what() << ")\n";
    ok = false;
  }

  json inv = json::array();
  if (ok) {
    const auto p_names = pl.cfg.mib.p_vars();
    for (int a = 0; a < pl.cfg.mib.q(); ++a) {
      Rng r = pl.rng.fork(100 + a);
      const auto rep = verify_invariance(pl.cfg.mib.polys[a], pl.cfg.group,
                                         pl.cfg.tolerances.invariance_samples,
                                         pl.cfg.tolerances.invariance_tol, r);
      json entry;
      entry["polynomial"] = p_names[a];
      entry["pass"] = rep.pass;
      entry["worst_error"] = round12(rep.worst_error);
      if (!rep.pass && !rep.violations.empty()) {
        entry["violation_word"] = rep.violations.front().word;
      }
      inv.push_back(entry);
      table << "invariance " << p_names[a] << ": " << (rep.pass ? "pass" : "FAIL")
            << "  (worst relative error " << fmt12(rep.worst_error) << ")\n";
      ok = ok && rep.pass;
    }

    // orbit separation spot check: p(gx) = p(x), distinct norms separate
    OrbitMapEvaluator orbit(pl.cfg.mib);
    Rng r = pl.rng.fork(200);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const Eigen::VectorXd x = 1.5 * r.ball_vector(pl.cfg.group.dimension);
      const int ci = r.uniform_int(0, static_cast<int>(pl.closure().size()) - 1);
      Eigen::MatrixXd g = pl.closure()[ci].matrix;
      if (pl.cfg.group.family) {
        g = pl.cfg.group.family->matrix(r.uniform(0.0, 6.283185307), pl.cfg.group.dimension) * g;
      }
      const Eigen::VectorXd d = orbit.p(g * x) - orbit.p(x);
      const double scale = std::max(1.0, orbit.p(x).cwiseAbs().maxCoeff());
      worst = std::max(worst, d.cwiseAbs().maxCoeff() / scale);
    }
    report["orbit_constancy_worst_error"] = round12(worst);
    table << "orbit-map constancy on orbits: worst relative error " << fmt12(worst) << "\n";
    ok = ok && worst <= 1e-9;
  }
  report["invariance"] = inv;
  report["pass"] = ok;
  out.write_json("verify.json", report);
  std::cout << table.str();
  if (!ok) {
    std::cerr << "verify: FAILED\n";
    return kExitComputation;
  }
  std::cout << "verify: all checks passed\n";
  return 0;
}

int run_phat(Pipeline& pl, Output& out) {
  const PHatMatrix& ph = pl.phat();
  const auto& ws = pl.cfg.mib.weights;
  std::ostringstream text;
  text << "P-hat matrix (q = " << ph.q() << "):\n";
  for (int a = 0; a < ph.q(); ++a) {
    for (int b = 0; b < ph.q(); ++b) {
      text << (b ? "  |  " : "  ") << weighted_str(ph.at(a, b), ws);
    }
    text << "\n";
  }
  text << "det = " << weighted_str(pl.det(), ws) << "\n";
  const auto& syz = pl.syzygies();
  if (syz.empty()) {
    text << "syzygies: none (the basis elements are algebraically independent)\n";
  } else {
    for (const auto& s : syz) {
      text << "syzygy (weight " << s.weight << "): " << weighted_str(s.poly, ws) << "\n";
    }
  }

  json j;
  j["q"] = ph.q();
  j["degrees"] = ws.degrees;
  json entries = json::array();
  for (int a = 0; a < ph.q(); ++a) {
    json row = json::array();
    for (int b = 0; b < ph.q(); ++b) row.push_back(weighted_str(ph.at(a, b), ws));
    entries.push_back(row);
  }
  j["entries"] = entries;
  j["det"] = weighted_str(pl.det(), ws);
  json js = json::array();
  for (const auto& s : syz) {
    js.push_back({{"weight", s.weight}, {"polynomial", weighted_str(s.poly, ws)}});
  }
  j["syzygies"] = js;

  out.write_text("phat.txt", text.str());
  out.write_json("phat.json", j);
  std::cout << text.str();
  return 0;
}

int run_active(Pipeline& pl, Output& out) {
  const auto& res = pl.actives();
  const auto& ws = pl.cfg.mib.weights;
  std::ostringstream text;
  json j;
  json list = json::array();
  text << "active polynomials (" << res.actives.size() << "):\n";
  for (const auto& a : res.actives) {
    text << "  a = " << weighted_str(a.poly, ws) << "   [weight " << a.weight << "]\n";
    json lam = json::array();
    for (const auto& l : a.multipliers) lam.push_back(weighted_str(l, ws));
    text << "    lambda = (";
    for (size_t i = 0; i < a.multipliers.size(); ++i) {
      text << (i ? ", " : "") << weighted_str(a.multipliers[i], ws);
    }
    text << ")\n";
    list.push_back({{"polynomial", weighted_str(a.poly, ws)},
                    {"weight", a.weight},
                    {"multipliers", lam},
                    {"composite", a.composite_flag}});
  }
  text << "A(p) = " << weighted_str(res.product, ws) << "\n";
  j["actives"] = list;
  j["product"] = weighted_str(res.product, ws);
  j["diagnostics"] = res.diagnostics;
  out.write_text("active.txt", text.str());
  out.write_json("active.json", j);
  std::cout << text.str();
  return 0;
}

json stratum_json(const StratumDescriptor& d, const WeightSystem& ws) {
  json j;
  j["label"] = d.label;
  j["dimension"] = d.dimension;
  json eqs = json::array();
  for (const auto& e : d.equalities) eqs.push_back(weighted_str(e, ws));
  j["equalities"] = eqs;
  json ineqs = json::array();
  for (const auto& [g, s] : d.inequalities) {
    ineqs.push_back({{"polynomial", weighted_str(g, ws)}, {"sign", s > 0 ? ">" : "<"}});
  }
  j["inequalities"] = ineqs;
  j["signature"] = {{"continuous_dim", d.signature.continuous_dim},
                    {"element_count", d.signature.element_count},
                    {"orders", d.signature.orders}};
  j["representative_x"] = vec_json(d.representative_x);
  j["representative_p"] = vec_json(d.representative_p);
  return j;
}

int run_strata(Pipeline& pl, Output& out) {
  const auto& cat = pl.catalog();
  const auto& ws = pl.cfg.mib.weights;
  std::ostringstream text;
  json j;
  json list = json::array();
  text << "strata (" << cat.descriptors.size() << "):\n";
  for (const auto& d : cat.descriptors) {
    text << "  " << d.label << "  dim " << d.dimension << "  signature "
         << d.signature.str() << "\n";
    for (const auto& e : d.equalities) text << "      " << weighted_str(e, ws) << " = 0\n";
    for (const auto& [g, s] : d.inequalities) {
      text << "      " << weighted_str(g, ws) << (s > 0 ? " > 0" : " < 0") << "\n";
    }
    list.push_back(stratum_json(d, ws));
  }
  j["strata"] = list;
  out.write_text("strata.txt", text.str());
  out.write_json("strata.json", j);
  std::cout << text.str();
  return 0;
}

int run_isotropy(Pipeline& pl, Output& out, const std::vector<std::string>& point_args) {
  std::vector<Eigen::VectorXd> points;
  if (point_args.empty()) {
    for (const auto& d : pl.catalog().descriptors) points.push_back(d.representative_x);
  } else {
    for (const auto& s : point_args) {
      std::vector<double> vals;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
      if (static_cast<int>(vals.size()) != pl.cfg.group.dimension) {
        throw ConfigError("--point needs " + std::to_string(pl.cfg.group.dimension) +
                          " comma-separated coordinates");
      }
      points.push_back(Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size()));
    }
  }

  json list = json::array();
  std::ostringstream text;
  for (const auto& x : points) {
    const auto iso = isotropy_subgroup(x, pl.cfg.group, pl.closure());
    const auto sig = isotropy_signature(iso);
    const auto label = identify_stratum(x, pl.catalog());
    json jp;
    jp["point"] = vec_json(x);
    jp["stratum"] = label.value_or("unresolved");
    jp["continuous_dimension"] = iso.continuous_dimension;
    json els = json::array();
    for (const auto& e : iso.elements) els.push_back(e.word);
    jp["elements"] = els;
    jp["signature"] = {{"continuous_dim", sig.continuous_dim},
                       {"element_count", sig.element_count},
                       {"orders", sig.orders}};
    list.push_back(jp);
    text << "x = (";
    for (int i = 0; i < x.size(); ++i) text << (i ? ", " : "") << fmt12(x(i));
    text << ")  stratum " << label.value_or("unresolved") << "\n  isotropy: ";
    for (size_t i = 0; i < iso.elements.size(); ++i) {
      text << (i ? "; " : "") << iso.elements[i].word;
    }
    text << "\n  signature " << sig.str() << "\n";
  }
  out.write_json("isotropy.json", list);
  std::cout << text.str();
  return 0;
}

int run_transitions(Pipeline& pl, Output& out) {
  const auto& cat = pl.catalog();
  const auto& graph = pl.graph();
  const auto pairs = allowed_transitions(graph, cat);

  json j;
  json edges = json::array();
  for (const auto& [i, k] : graph.edges) {
    edges.push_back({graph.labels[i], graph.labels[k]});
  }
  j["bordering"] = edges;
  json allowed = json::array();
  std::ostringstream text;
  text << "allowed second-order transitions (" << pairs.size() << "):\n";
  for (const auto& [a, b] : pairs) {
    allowed.push_back({a, b});
    text << "  " << a << " <-> " << b << "\n";
  }
  j["allowed_transitions"] = allowed;
  out.write_json("transitions.json", j);
  std::cout << text.str();
  return 0;
}

int run_section(Pipeline& pl, Output& out, double r2, int grid) {
  const auto pts = section(pl.catalog(), r2, grid);
  std::ostringstream csv;
  csv << "p1,p2,p3,label\n";
  for (const auto& pt : pts) {
    csv << fmt12(pt.p1) << "," << fmt12(pt.p2) << "," << fmt12(pt.p3) << "," << pt.label
        << "\n";
  }
  out.write_text("section.csv", csv.str());
  int inside = 0;
  for (const auto& pt : pts) inside += pt.label != "outside";
  std::cout << "section at p" << pl.cfg.mib.q() << " = " << r2 << ": " << inside << "/"
            << pts.size() << " grid points inside\n";
  return 0;
}

int run_phases(Pipeline& pl, Output& out, bool allow_unbounded) {
  if (!pl.cfg.potential) {
    throw ConfigError("phases: the config has no 'potential' section");
  }
  PotentialSpec family = *pl.cfg.potential;
  if (allow_unbounded) family.allow_unbounded = true;
  StablePhaseOptions opts = pl.cfg.phase;
  Rng r = pl.rng.fork(3);
  const auto sweep = phase_sweep(family, pl.catalog(), pl.graph(), opts, r);

  std::ostringstream csv;
  for (const auto& name : sweep.sweep_parameters) csv << name << ",";
  csv << "label,value,degenerate\n";
  for (const auto& cell : sweep.grid) {
    for (const auto& name : sweep.sweep_parameters) csv << fmt12(cell.parameters.at(name)) << ",";
    csv << cell.label << "," << fmt12(cell.value) << "," << (cell.degenerate ? 1 : 0) << "\n";
  }
  out.write_text("phases.csv", csv.str());

  json j;
  json trans = json::array();
  for (const auto& t : sweep.transitions) {
    json jt;
    jt["from_label"] = t.from_label;
    jt["to_label"] = t.to_label;
    for (const auto& [k, v] : t.from_params) jt["from_params"][k] = round12(v);
    for (const auto& [k, v] : t.to_params) jt["to_params"][k] = round12(v);
    jt["second_order_allowed"] = t.second_order_allowed;
    jt["annotation"] =
        t.second_order_allowed ? "second-order-allowed"
                               : "not-bordering (first order or resolution artifact)";
    trans.push_back(jt);
  }
  j["transitions"] = trans;
  out.write_json("phase_transitions.json", j);
  std::cout << "phase sweep: " << sweep.grid.size() << " cells, " << sweep.transitions.size()
            << " transitions\n";
  for (const auto& t : sweep.transitions) {
    std::cout << "  " << t.from_label << " <-> " << t.to_label << "  ["
              << (t.second_order_allowed ? "second-order-allowed" : "not-bordering") << "]\n";
  }
  return 0;
}

int compare_golden(const Output& out, const fs::path& golden_dir) {
  if (!fs::exists(golden_dir)) {
    std::cerr << "golden: directory " << golden_dir << " does not exist\n";
    return kExitGoldenMismatch;
  }
  int mismatches = 0;
  for (const auto& entry : fs::directory_iterator(golden_dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path produced = out.dir / entry.path().filename();
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    if (!fs::exists(produced)) {
      std::cerr << "golden: missing artifact " << produced << "\n";
      ++mismatches;
      continue;
    }
    if (slurp(entry.path()) != slurp(produced)) {
      std::cerr << "golden: mismatch in " << entry.path().filename().string() << "\n";
      ++mismatches;
    }
  }
  if (mismatches) {
    std::cerr << "golden: " << mismatches << " file(s) differ\n";
    return kExitGoldenMismatch;
  }
  std::cout << "golden: all artifacts match\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbit-space analysis of compact orthogonal group actions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string golden_dir;
  std::string golden_write_dir;
  std::optional<std::uint64_t> seed_override;
  double r2 = 1.0;
  int grid = 200;
  std::vector<std::string> point_args;
  bool allow_unbounded = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "analysis configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory for artifacts");
    sub->add_option("--seed", seed_override, "override the RNG seed");
  };
  CLI::App* sub_verify = app.add_subcommand("verify", "check basis invariance and conventions");
  CLI::App* sub_phat = app.add_subcommand("phat", "compute the P-hat matrix and determinant");
  CLI::App* sub_active = app.add_subcommand("active", "find the active polynomials");
  CLI::App* sub_strata = app.add_subcommand("strata", "enumerate the orbit-space strata");
  CLI::App* sub_isotropy = app.add_subcommand("isotropy", "isotropy subgroups of points");
  CLI::App* sub_transitions =
      app.add_subcommand("transitions", "bordering graph and allowed transitions");
  CLI::App* sub_section = app.add_subcommand("section", "grid section of the orbit space");
  CLI::App* sub_phases = app.add_subcommand("phases", "phase diagram of the potential");
  CLI::App* sub_all = app.add_subcommand("all", "run the whole pipeline");
  for (CLI::App* sub : {sub_verify, sub_phat, sub_active, sub_strata, sub_isotropy,
                        sub_transitions, sub_section, sub_phases, sub_all}) {
    add_common(sub);
  }
  sub_isotropy->add_option("--point", point_args, "point as comma-separated coordinates")
      ->take_all();
  sub_section->add_option("--r2", r2, "height of the section plane (p_q = r2)");
  sub_section->add_option("--grid", grid, "grid resolution per axis");
  sub_all->add_option("--r2", r2, "height of the section plane (p_q = r2)");
  sub_all->add_option("--grid", grid, "grid resolution per axis");
  for (CLI::App* sub : {sub_phases, sub_all}) {
    sub->add_flag("--allow-unbounded", allow_unbounded,
                  "search for local minima even when the boundedness screen fails");
  }
  sub_all->add_option("--golden", golden_dir, "compare artifacts against this directory");
  sub_all->add_option("--golden-write", golden_write_dir,
                      "write artifacts into this directory as the new expectation");

  CLI11_PARSE(app, argc, argv);

  try {
    AnalysisConfig cfg = load_config(config_path);
    if (seed_override) cfg.seed = *seed_override;
    Pipeline pl(cfg);
    Output out{fs::path(out_dir), {}};

    if (sub_verify->parsed()) return run_verify(pl, out);
    if (sub_phat->parsed()) return run_phat(pl, out);
    if (sub_active->parsed()) return run_active(pl, out);
    if (sub_strata->parsed()) return run_strata(pl, out);
    if (sub_isotropy->parsed()) return run_isotropy(pl, out, point_args);
    if (sub_transitions->parsed()) return run_transitions(pl, out);
    if (sub_section->parsed()) return run_section(pl, out, r2, grid);
    if (sub_phases->parsed()) return run_phases(pl, out, allow_unbounded);

    // all
    int rc = run_verify(pl, out);
    if (rc != 0) return rc;
    run_phat(pl, out);
    run_active(pl, out);
    run_strata(pl, out);
    run_isotropy(pl, out, {});
    run_transitions(pl, out);
    run_section(pl, out, r2, grid);
    if (pl.cfg.potential) run_phases(pl, out, allow_unbounded);

    if (!golden_write_dir.empty()) {
      fs::create_directories(golden_write_dir);
      for (const auto& f : out.written) {
        fs::copy_file(f, fs::path(golden_write_dir) / f.filename(),
                      fs::copy_options::overwrite_existing);
      }
      std::cout << "golden: wrote " << out.written.size() << " artifacts to "
                << golden_write_dir << "\n";
      return 0;
    }
    if (!golden_dir.empty()) return compare_golden(out, golden_dir);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ComputationError& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}
