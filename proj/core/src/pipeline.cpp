#include "jacketopt/pipeline.hpp"

#include "jacketopt/errors.hpp"

#include <cmath>
#include <sstream>

namespace jacketopt {

SimInputs load_sim_inputs(const SimInputPaths& paths) {
  SimInputs in;
  in.params = parse_model_files(paths.model, paths.sections, paths.material);
  in.soil = parse_soil(paths.soil);
  in.loads = parse_loads(paths.loads);
  in.env = parse_waves(paths.waves);
  if (!paths.cs_table.empty()) in.cs = parse_cs_table(paths.cs_table);
  in.morison.rho_kg_m3 = in.env.rho_kg_m3;
  for (const auto& c : in.loads.cases)
    if (!c.wave.empty()) in.env.require(c.wave);  // fail early on bad references
  return in;
}

SimResult run_simulation(const SimInputs& in, const JacketParams& params, const Mesh& mesh,
                         const SimOptions& opt) {
  SimResult out;
  out.mass_t = compute_mass_t(params, mesh);

  const FemModel model(mesh, params.material, opt.support,
                       opt.support == Support::spring ? &in.soil : nullptr);
  const CombinedLoading combo =
      combine_loads(in.loads, in.loads.require_combination(opt.combination));

  LoadAssembly load(model);
  model.add_rp_load(load, combo.rp);
  if (combo.self_weight_factor != 0.0)
    model.add_gravity(load, kGravityMmS2, combo.self_weight_factor);

  const double depth_m = in.env.level_depth_m(opt.water_level);
  for (const auto& [factor, wave_name] : combo.waves) {
    if (factor == 0.0) continue;
    const WaveScenario& sc = in.env.require(wave_name);
    WaveInput wi;
    wi.name = sc.name;
    wi.height_m = sc.hs_m;
    wi.period_s = sc.tp_s;
    wi.length_m = sc.length_m;
    wi.depth_m = depth_m;
    const WaveState ws = build_wave_state(wi);
    if (ws.dispersion_gap_rel > 0.05) {
      std::ostringstream os;
      os << "wave " << sc.name << " at " << opt.water_level << ": prescribed length "
         << sc.length_m << " m deviates " << std::round(ws.dispersion_gap_rel * 1000) / 10
         << "% from the dispersion prediction";
      out.warnings.push_back(os.str());
    }
    model.add_wave_load(load, ws, in.morison, in.cs, depth_m, in.env.direction_deg, factor);
  }

  SolveOptions solver = opt.solver;
  solver.want_fields = opt.want_fields || solver.want_fields;
  out.response = model.solve(load, solver);
  return out;
}

SimResult simulate_variant(const SimInputs& in, const std::vector<ParamOverride>& overrides,
                           const SimOptions& opt) {
  JacketParams params = in.params;
  if (!overrides.empty()) apply_overrides(params, overrides);
  const Mesh mesh = generate_mesh(params);
  return run_simulation(in, params, mesh, opt);
}

}  // namespace jacketopt
