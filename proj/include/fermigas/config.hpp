#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fermigas/numerics.hpp"
#include "fermigas/potentials.hpp"
#include "fermigas/scattering.hpp"

namespace fermigas {

struct SweepLists {
  std::vector<double> n;
  std::vector<std::string> beta;  // kept as text so windows can be decided exactly
  std::vector<double> levels;
  std::vector<double> amplitudes;
  std::vector<double> fermi_momenta;
  std::vector<double> couplings;
  std::vector<double> hbar;
};

struct RunOptions {
  double hbar = 0.05;
  double level = 0.0;        // spectra truncation / Weyl level; 0 selects the command default
  double half_width = 2.5;
  int points = 1200;
  int fill = 10;
  std::string trap = "harmonic_3d";  // spectra: harmonic_3d or fd_1d
  long long free_states = 0;         // spectra: free ground-state density when > 0
  double scale = 0.0;                // boxes: l, 0 selects the window midpoint
  double epsilon = 0.0;              // budget: 0 selects the default rule
  double r_max = 0.0;                // scatter: 0 selects 4 R_v
  double fermi_momentum = 1.0;       // husimi
  int profile_points = 200;
  double h2_threshold = 0.05;
};

struct RunConfig {
  std::string command;
  std::optional<PotentialSpec> potential;
  std::optional<InteractionSpec> interaction;
  SweepLists sweeps;
  Tolerance tolerance;
  RunOptions options;
  std::string output_directory = "out";
  bool json_mirror = false;
  bool seedless = false;
};

const std::vector<std::string>& known_commands();

// Strict parsing: unknown keys, wrong types and missing required sections raise ConfigError.
RunConfig parse_run_config(const std::string& json_text);
// Defaults for a command with no file (only verify-all needs no sections).
RunConfig default_run_config(const std::string& command);
void validate_run_config(const RunConfig& config);

// Compact JSON of the configuration with every default filled in; key order is fixed.
std::string resolved_config_json(const RunConfig& config);

PotentialSpec parse_potential_spec(const std::string& json_text);
InteractionSpec parse_interaction_spec(const std::string& json_text);
Tolerance parse_tolerance(const std::string& json_text);

}  // namespace fermigas
