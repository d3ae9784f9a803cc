#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitspace/group.hpp"
#include "orbitspace/pmatrix.hpp"
#include "orbitspace/potential.hpp"
#include "orbitspace/strata.hpp"

namespace orbitspace {

struct ToleranceConfig {
  double invariance_tol = 1e-9;
  int invariance_samples = 64;
  int closure_max_elements = 4096;
  long syzygy_max_weight = 0;  // 0: 2x the largest P-hat entry weight
};

struct AnalysisConfig {
  std::string name;
  GroupPresentation group;
  MIBSpec mib;
  ToleranceConfig tolerances;
  StrataOptions strata;
  FindActiveOptions active;
  std::optional<PotentialSpec> potential;
  StablePhaseOptions phase;
  std::uint64_t seed = 0;
};

// Numeric matrix-entry token: decimal, "num/den", or "sqrt(k)" optionally
// divided by an integer, each with an optional sign. Examples: "-1/2",
// "sqrt(3)/2", "0.25". Throws ConfigError on anything else.
double parse_matrix_entry(const std::string& token);

// Loads and validates a JSON analysis configuration ("//" comments allowed).
AnalysisConfig load_config(const std::string& path);

}  // namespace orbitspace
