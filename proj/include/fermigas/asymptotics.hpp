#pragma once

#include <string>
#include <vector>

#include "fermigas/scattering.hpp"
#include "fermigas/thomas_fermi.hpp"

namespace fermigas {

struct ScalingContext {
  double n = 0.0;
  double beta = 0.0;
  double hbar = 0.0;  // N^(-1/3)
  double scattering_length = 0.0;
  double range = 0.0;
};

// Requires N >= 2 and beta > 1/3; a_w and R_w come from the zero-energy solve of w.
ScalingContext make_scaling_context(double n, double beta, const Interaction& w, const Tolerance& tol = {});

struct EnergyPrediction {
  double main = 0.0;        // N E^TF
  double correction = 0.0;  // 2 pi a_w N^(4/3 - beta) int rho^2
  double total = 0.0;
  double relative_correction = 0.0;
};

EnergyPrediction predict_energy(const TFSolution& tf, const ScalingContext& ctx);

struct FirstOrderCheck {
  double coupling = 0.0;      // 8 pi a_w N^(1/3 - beta)
  double two_spin_energy = 0.0;
  double linearized = 0.0;    // E^TF + 2 pi a_w N^(1/3 - beta) int rho^2
  double scaled_defect = 0.0; // |two_spin_energy - linearized| / N^(1/3 - beta)
};

FirstOrderCheck first_order_check(const TFSolution& tf, const ScalingContext& ctx, const Tolerance& tol = {});

struct BetaWindow {
  std::string beta_exact;  // reduced fraction
  double beta = 0.0;
  double n = 0.0;
  double upper_exponent = 0.0;   // 1/3 - beta
  double lower_exponent_a = 0.0; // -(27/21)(1 - 3 beta) - beta
  double lower_exponent_b = 0.0; // beta/3 - 4/9
  bool feasible = false;         // decided in exact rational arithmetic
  bool lower_bound_regime = false;  // 1/3 < beta < 1/2
  double chosen_scale = 0.0;     // N^(mid exponent) when feasible, else 0
};

// beta as an exact binary value.
BetaWindow beta_l_window(double beta, double n);
// beta as text: "p/q" or a decimal such as "0.42", read exactly.
BetaWindow beta_l_window(const std::string& beta, double n);

struct BoxCell {
  Vec3 center{};
  long long mass = 0;               // M_i
  double kinetic_interaction = 0.0; // N^(2 beta - 2/3) (2 c L^-2 M^(5/3) + 8 pi a_w L^-3 M^2)
  double potential = 0.0;           // 2 M_i sup V over the box
};

struct BoxEstimate {
  double scale = 0.0;  // l
  double gap = 0.0;    // r = N^-beta R_w
  double gap_ratio = 0.0;
  int boxes_per_axis = 0;
  std::vector<BoxCell> cells;  // occupied cells, lexicographic by center
  long long total_particles = 0;  // sum of 2 M_i
  double kinetic_interaction_sum = 0.0;
  double potential_sum = 0.0;
  double total = 0.0;
  double prediction_total = 0.0;
  double ratio = 0.0;  // total / prediction_total
  // Box-sum analogues of int rho^(5/3) and int rho^2, and their defects against the continuum.
  double riemann_53 = 0.0;
  double riemann_2 = 0.0;
  double defect_53 = 0.0;
  double defect_2 = 0.0;
  bool window_feasible = false;
  bool scale_in_window = false;
};

// Cells of side l + r tile a cube around supp rho^TF; each carries a box of side l.
BoxEstimate box_estimate(const TFSolution& tf, const ScalingContext& ctx, double scale);

struct ErrorBudget {
  double n = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double fermi_momentum = 0.0;
  double inverse_momentum = 0.0;  // s
  double radius = 0.0;            // R
  double term_kinetic = 0.0;      // N^(5/6)
  double term_cutoff = 0.0;       // p_F^-2 N
  double term_dyson = 0.0;        // delta^-1 N^(1/3-beta) (N^-1/18 + N^(1/6-beta/2)) (R^-3 + 1/(eps s^2 R))
  double term_spread = 0.0;       // N^(1/3-beta) / (eps s^2 R)
  double total = 0.0;
  double ratio = 0.0;             // total / N^(4/3-beta)
  double epsilon_floor = 0.0;     // (N^-1/18 + N^(1/6-beta/2))^(1/4)
  bool epsilon_below_one = false;  // the default rule exceeds 1 at small N
};

// epsilon <= 0 selects (N^-1/18 + N^(1/6-beta/2))^(1/8).
ErrorBudget error_budget(double n, double beta, double epsilon = 0.0);

}  // namespace fermigas
