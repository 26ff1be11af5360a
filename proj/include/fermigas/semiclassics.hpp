#pragma once

#include <string>
#include <vector>

#include "fermigas/numerics.hpp"
#include "fermigas/potentials.hpp"

namespace fermigas {

struct PhaseSpaceBudget {
  double level = 0.0;
  double n_cl = 0.0;
  double e_cl = 0.0;
  double e_tilde = 0.0;  // e_cl - level * n_cl
};

// (2 pi)^-3 |{|p|^2 + V <= level}| and the matching energy, momentum integrals done in closed form.
PhaseSpaceBudget phase_space_counts(const Potential& v, double level, const Tolerance& tol = {});

// Level with n_cl(level) = target.
double lambda_for_filling(const Potential& v, double target, const Tolerance& tol = {});

struct LegendrePoint {
  double level = 0.0;
  double de_dlevel = 0.0;
  double dn_dlevel = 0.0;
  double residual = 0.0;  // |de - level dn|
};

// Central differences with step 1e-4 level at every grid point.
std::vector<LegendrePoint> legendre_check(const Potential& v, const std::vector<double>& levels,
                                          const Tolerance& tol = {});

struct H2Report {
  std::vector<double> levels;
  std::vector<double> n_cl;
  std::vector<double> derivative;  // central differences; 0 at the two ends
  double smoothness_score = 0.0;
  double threshold = 0.0;
  bool flagged = false;
  int points_above_minimum = 0;
  // Differentiability is only certified on the sampled grid.
  std::string note;
};

// Smoothness score: max over consecutive interior triples (all derivatives positive, lowest level at
// least ten spacings above min V) of |d_{i+1} - 2 d_i + d_{i-1}| / max(|d_{i-1}|, |d_i|, |d_{i+1}|).
H2Report h2_probe(const Potential& v, const std::vector<double>& levels, double threshold = 0.05,
                  const Tolerance& tol = {});

}  // namespace fermigas
