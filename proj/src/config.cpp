#include "orbitspace/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "orbitspace/errors.hpp"

namespace orbitspace {

using nlohmann::json;

double parse_matrix_entry(const std::string& token) {
  std::string s;
  for (char c : token) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ConfigError("matrix entry: empty token");
  double sign = 1.0;
  size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    sign = s[i] == '-' ? -1.0 : 1.0;
    ++i;
  }
  double value = 0.0;
  if (s.compare(i, 5, "sqrt(") == 0) {
    const size_t close = s.find(')', i);
    if (close == std::string::npos) throw ConfigError("matrix entry: unbalanced sqrt()");
    const std::string inner = s.substr(i + 5, close - i - 5);
    try {
      value = std::sqrt(std::stod(inner));
    } catch (const std::exception&) {
      throw ConfigError("matrix entry: bad sqrt argument '" + inner + "'");
    }
    i = close + 1;
  } else {
    size_t j = i;
    while (j < s.size() && s[j] != '/') ++j;
    try {
      size_t used = 0;
      value = std::stod(s.substr(i, j - i), &used);
      if (used != j - i) throw ConfigError("matrix entry: trailing junk in '" + s + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("matrix entry: bad number '" + s + "'");
    }
    i = j;
  }
  if (i < s.size()) {
    if (s[i] != '/') throw ConfigError("matrix entry: unexpected character in '" + s + "'");
    const std::string den = s.substr(i + 1);
    try {
      const double d = std::stod(den);
      if (d == 0.0) throw ConfigError("matrix entry: division by zero");
      value /= d;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("matrix entry: bad denominator '" + den + "'");
    }
  }
  return sign * value;
}

namespace {

Eigen::MatrixXd parse_matrix(const json& rows, int dimension, const std::string& name) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != dimension) {
    throw ConfigError("generator '" + name + "': expected " + std::to_string(dimension) +
                      " rows");
  }
  Eigen::MatrixXd m(dimension, dimension);
  for (int r = 0; r < dimension; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dimension) {
      throw ConfigError("generator '" + name + "': row " + std::to_string(r) + " has wrong length");
    }
    for (int c = 0; c < dimension; ++c) {
      const auto& cell = row[c];
      if (cell.is_number()) {
        m(r, c) = cell.get<double>();
      } else if (cell.is_string()) {
        m(r, c) = parse_matrix_entry(cell.get<std::string>());
      } else {
        throw ConfigError("generator '" + name + "': entries must be numbers or strings");
      }
    }
  }
  return m;
}

Rational parse_rational_field(const json& j, const std::string& what) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    auto r = Rational::parse(j.get<std::string>());
    if (r) return *r;
  }
  throw ConfigError(what + ": expected an integer or a \"num/den\" string");
}

Exponents parse_monomial_text(const std::string& text, const std::vector<std::string>& p_vars) {
  const Polynomial mono = parse_polynomial(text, p_vars);
  if (mono.term_count() != 1 || !(mono.terms().begin()->second == Rational(1))) {
    throw ConfigError("potential: '" + text + "' is not a plain monomial");
  }
  return mono.terms().begin()->first;
}

}  // namespace

AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json root;
  try {
    root = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  AnalysisConfig cfg;
  cfg.name = root.value("name", std::string("analysis"));
  cfg.seed = root.value("seed", 0ULL);

  // ---- group --------------------------------------------------------------
  if (!root.contains("group")) throw ConfigError("config: missing 'group'");
  const auto& jg = root["group"];
  cfg.group.dimension = jg.value("dimension", 0);
  if (jg.contains("generators")) {
    for (const auto& jgen : jg["generators"]) {
      GroupElement e;
      e.word = jgen.value("name", std::string("g"));
      e.matrix = parse_matrix(jgen.at("matrix"), cfg.group.dimension, e.word);
      cfg.group.generators.push_back(std::move(e));
    }
  }
  if (jg.contains("continuous")) {
    const auto& jc = jg["continuous"];
    RotationFamily fam;
    fam.name = jc.value("name", std::string("U1"));
    for (const auto& jp : jc.at("pairs")) {
      if (!jp.is_array() || jp.size() != 2) {
        throw ConfigError("continuous.pairs: expected [i, j] pairs");
      }
      fam.pairs.emplace_back(jp[0].get<int>(), jp[1].get<int>());
    }
    if (jc.contains("multipliers")) {
      for (const auto& jm : jc["multipliers"]) fam.multipliers.push_back(jm.get<int>());
    } else {
      fam.multipliers.assign(fam.pairs.size(), 1);
    }
    cfg.group.family = std::move(fam);
  }
  cfg.group.validate();

  // ---- minimal integrity basis ---------------------------------------------
  if (!root.contains("mib")) throw ConfigError("config: missing 'mib'");
  const auto& jm = root["mib"];
  for (const auto& v : jm.at("variables")) cfg.mib.x_vars.push_back(v.get<std::string>());
  if (static_cast<int>(cfg.mib.x_vars.size()) != cfg.group.dimension) {
    throw ConfigError("config: mib.variables length must equal group.dimension");
  }
  for (const auto& d : jm.at("degrees")) cfg.mib.weights.degrees.push_back(d.get<int>());
  for (const auto& jp : jm.at("polynomials")) {
    try {
      cfg.mib.polys.push_back(parse_polynomial(jp.get<std::string>(), cfg.mib.x_vars));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("mib.polynomials: ") + e.what());
    }
  }
  if (cfg.mib.polys.size() != cfg.mib.weights.degrees.size()) {
    throw ConfigError("config: mib.polynomials and mib.degrees differ in length");
  }
  // Full basis validation (homogeneity, |x|^2 convention, invariance) is a
  // pipeline stage, so `verify` can report the failure instead of refusing
  // to load.

  // ---- tolerances and sampling ----------------------------------------------
  if (root.contains("tolerances")) {
    const auto& jt = root["tolerances"];
    cfg.tolerances.invariance_tol = jt.value("invariance", cfg.tolerances.invariance_tol);
    cfg.tolerances.invariance_samples =
        jt.value("invariance_samples", cfg.tolerances.invariance_samples);
    cfg.tolerances.closure_max_elements =
        jt.value("closure_max_elements", cfg.tolerances.closure_max_elements);
    cfg.tolerances.syzygy_max_weight =
        jt.value("syzygy_max_weight", cfg.tolerances.syzygy_max_weight);
    cfg.strata.rank_rel_tol = jt.value("rank", cfg.strata.rank_rel_tol);
    cfg.strata.identify_tol = jt.value("identify", cfg.strata.identify_tol);
    cfg.active.interpolation.svd_tol = jt.value("kernel_svd", cfg.active.interpolation.svd_tol);
    cfg.active.interpolation.max_denominator =
        jt.value("rationalize_denominator", cfg.active.interpolation.max_denominator);
  }
  if (root.contains("sampling")) {
    const auto& js = root["sampling"];
    cfg.strata.samples_per_subspace =
        js.value("per_subspace", cfg.strata.samples_per_subspace);
    cfg.active.sampling.per_subspace = cfg.strata.samples_per_subspace;
    cfg.strata.validation_target = js.value("validation_target", cfg.strata.validation_target);
    cfg.phase.minimize.multistarts = js.value("multistarts", cfg.phase.minimize.multistarts);
    cfg.phase.screen_rays = js.value("screen_rays", cfg.phase.screen_rays);
  }
  cfg.active.sampling.rank_rel_tol = cfg.strata.rank_rel_tol;

  // ---- potential (optional) ---------------------------------------------------
  if (root.contains("potential")) {
    const auto& jp = root["potential"];
    PotentialSpec spec;
    spec.allow_unbounded = jp.value("allow_unbounded", false);
    const auto p_vars = cfg.mib.p_vars();
    for (const auto& jt : jp.at("terms")) {
      PotentialTerm term;
      term.monomial = parse_monomial_text(jt.at("monomial").get<std::string>(), p_vars);
      if (jt.contains("coeff")) {
        const auto& jc = jt["coeff"];
        if (jc.is_string()) {
          auto lit = Rational::parse(jc.get<std::string>());
          if (lit) {
            term.scale = *lit;
          } else {
            term.parameter = jc.get<std::string>();  // a parameter name
          }
        } else if (jc.is_number_integer()) {
          term.scale = Rational(jc.get<long>());
        } else {
          throw ConfigError("potential.terms: coeff must be a rational string or parameter name");
        }
      }
      if (jt.contains("scale")) {
        term.scale = term.scale * parse_rational_field(jt["scale"], "potential.terms.scale");
      }
      spec.terms.push_back(std::move(term));
    }
    if (jp.contains("parameters")) {
      for (const auto& [name, jv] : jp["parameters"].items()) {
        ParameterSpec ps;
        ps.name = name;
        if (jv.contains("value")) {
          ps.value = jv["value"].get<double>();
        }
        if (jv.contains("min") || jv.contains("max")) {
          ps.swept = true;
          ps.min = jv.at("min").get<double>();
          ps.max = jv.at("max").get<double>();
          ps.steps = jv.value("steps", 11);
        }
        spec.parameters.push_back(std::move(ps));
      }
    }
    spec.validate(cfg.mib.weights);
    cfg.potential = std::move(spec);
  }
  return cfg;
}

}  // namespace orbitspace
