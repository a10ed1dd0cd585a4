#pragma once

// End-to-end composition used by the CLI, the sweep driver and the optimizer:
// parse the input set once, then evaluate any design variant (base model plus
// parameter overrides) under a named load combination, water level and
// support condition.

#include "jacketopt/fem.hpp"
#include "jacketopt/loads.hpp"
#include "jacketopt/mesh.hpp"
#include "jacketopt/model.hpp"
#include "jacketopt/soil.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jacketopt {

struct SimInputs {
  JacketParams params;
  SoilProfile soil;
  LoadSet loads;
  WaveEnvironment env;
  CsTable cs;         // empty table: defaults apply everywhere
  MorisonParams morison;
};

struct SimInputPaths {
  std::string model, sections, material, soil, loads, waves;
  std::string cs_table;  // optional
};

SimInputs load_sim_inputs(const SimInputPaths& paths);

struct SimOptions {
  std::string combination = "ULS";
  std::string water_level = "HWL";
  Support support = Support::spring;
  bool want_fields = false;
  SolveOptions solver;
};

struct SimResult {
  double mass_t = 0.0;
  SolveResult response;
  std::vector<std::string> warnings;  // e.g. dispersion-gap notices
};

// Solves one already-meshed design. The mesh must come from `params`.
SimResult run_simulation(const SimInputs& in, const JacketParams& params, const Mesh& mesh,
                         const SimOptions& opt);

// Convenience: apply overrides to the base design, mesh it and solve.
SimResult simulate_variant(const SimInputs& in, const std::vector<ParamOverride>& overrides,
                           const SimOptions& opt);

}  // namespace jacketopt
