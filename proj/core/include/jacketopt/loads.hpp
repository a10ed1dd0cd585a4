#pragma once

// Loading environment: named wave scenarios with site water levels, named
// concentrated load cases at the tower reference point, and factored load
// combinations written as "1.5*(wind1)+1.35*0.7*(wave1)+1.0*DL".

#include "jacketopt/morison.hpp"
#include "jacketopt/wave.hpp"

#include <map>
#include <string>
#include <vector>

namespace jacketopt {

struct WaveScenario {
  std::string name;
  double hs_m = 0.0;
  double tp_s = 0.0;
  double length_m = 0.0;
};

// Parsed waves.json: scenario list plus the water properties and the named
// still-water levels (depth above the mudline, metres).
struct WaveEnvironment {
  double rho_kg_m3 = 1025.0;
  double g_m_s2 = 9.81;
  double direction_deg = 45.0;  // propagation measured from global +x in plan
  std::map<std::string, double> water_levels_m;  // "LWL" | "MWL" | "HWL" -> depth
  std::vector<WaveScenario> waves;

  const WaveScenario& require(const std::string& name) const;
  double level_depth_m(const std::string& level) const;
};

WaveEnvironment parse_waves(const std::string& path);

// Concentrated loads at the reference point, solver units (N, N-mm).
struct RPLoad {
  double fx_n = 0.0, fy_n = 0.0, fz_n = 0.0;
  double mx_nmm = 0.0, my_nmm = 0.0, mz_nmm = 0.0;
};

struct LoadCaseDef {
  std::string name;
  RPLoad rp;
  bool self_weight = false;  // distributed gravity on all members
  std::string wave;          // wave scenario name, empty if none
};

struct CombinationTerm {
  double factor = 1.0;
  std::string case_name;
};

struct LoadSet {
  std::vector<LoadCaseDef> cases;
  // Named combinations in file order; each value is the parsed term list.
  std::vector<std::pair<std::string, std::vector<CombinationTerm>>> combinations;

  const LoadCaseDef& require(const std::string& name) const;
  const std::vector<CombinationTerm>& require_combination(const std::string& name) const;
};

LoadSet parse_loads(const std::string& path);

// Parses "1.5*(wind1)+1.35*0.7*(wave1)+1.0*DL": '+'-separated terms, each a
// product of numeric factors and exactly one case name (parenthesised or
// bare); a bare name alone means factor 1.
std::vector<CombinationTerm> parse_combination(const std::string& expr);

// A combination resolved against its case definitions: summed factored RP
// loads, the net factor on self-weight, and the factored wave scenarios to
// apply as member line loads.
struct CombinedLoading {
  RPLoad rp;
  double self_weight_factor = 0.0;
  std::vector<std::pair<double, std::string>> waves;  // (factor, scenario name)
};

CombinedLoading combine_loads(const LoadSet& set, const std::vector<CombinationTerm>& terms);

}  // namespace jacketopt
