#pragma once

#include <vector>

#include "fermigas/numerics.hpp"
#include "fermigas/potentials.hpp"

namespace fermigas {

// c = (3/5)(6 pi^2)^(2/3), the kinetic constant per spin.
double tf_constant();
// (5/3) 2^(-2/3) c = (3 pi^2)^(2/3), inverse slope of the spin-summed inversion.
double tf_inversion_constant();

class TFSolution {
 public:
  TFSolution(Potential potential, double lambda, const Tolerance& tol);

  double lambda() const { return lambda_; }
  double support_radius() const { return support_radius_; }
  double energy() const { return energy_; }
  double kinetic_integral() const { return kinetic_; }
  double potential_integral() const { return potential_integral_; }
  double interaction_integral() const { return interaction_; }
  double mass() const { return mass_; }
  double max_lagrange_residual() const { return max_lagrange_residual_; }
  const Potential& potential() const { return potential_; }

  // Closed-form density; exactly zero where lambda - V <= 0.
  double density(const Vec3& x) const;
  double density_at_level(double v) const;
  // Sampled along the radius (radial traps) or the first axis (otherwise).
  const RadialProfile& profile() const { return profile_; }

 private:
  Potential potential_;
  double lambda_;
  double support_radius_ = 0.0;
  double energy_ = 0.0;
  double kinetic_ = 0.0;
  double potential_integral_ = 0.0;
  double interaction_ = 0.0;
  double mass_ = 0.0;
  double max_lagrange_residual_ = 0.0;
  RadialProfile profile_;
};

// Unit-mass minimizer by closed-form inversion with the multiplier found by root finding.
TFSolution tf_solve(const Potential& v, const Tolerance& tol = {});

// Mass of the inverted density at multiplier `level`.
double tf_mass_at_level(const Potential& v, double level, const Tolerance& tol);

// 2^(-2/3) c int rho^(5/3) + int V rho. No normalization is imposed.
double tf_functional(const Potential& v, const RadialProfile& rho, const Tolerance& tol = {});
double tf_functional(const Potential& v, const ScalarFunction& radial_rho, double r_max, const Tolerance& tol = {});

struct TwoSpinState {
  double coupling = 0.0;
  double energy = 0.0;
  double multiplier = 0.0;
  double mass = 0.0;
  double symmetry_gap = 0.0;  // sup |rho_up - rho_down|
  int iterations = 0;
  std::vector<double> residual_history;
  std::vector<double> radii;
  std::vector<double> rho_up;
  std::vector<double> rho_down;
};

// Minimizes c int(up^(5/3) + down^(5/3)) + int V (up + down) + g int up down at unit total mass
// by damped alternating inversion on a Gauss-Legendre panel grid (radial traps).
TwoSpinState two_spin_minimize(const Potential& v, double coupling, const Tolerance& tol = {});
TwoSpinState two_spin_minimize(const TFSolution& tf, double coupling, const Tolerance& tol = {});

struct CutoffTFSolution {
  double fermi_momentum = 0.0;
  double energy = 0.0;
  double overflow_mass = 0.0;
  double multiplier = 0.0;
  bool cutoff_active = false;
};

// Per spin the kinetic density is c s^(5/3) while the local Fermi momentum (6 pi^2 s)^(1/3)
// stays below p_F, and continues linearly as p_F^2 s - p_F^5 / (15 pi^2) beyond.
CutoffTFSolution cutoff_tf_solve(const TFSolution& tf, double fermi_momentum, const Tolerance& tol = {});
CutoffTFSolution cutoff_tf_solve(const Potential& v, double fermi_momentum, const Tolerance& tol = {});

struct PerturbationStep {
  double amplitude = 0.0;
  double energy = 0.0;
  double l53_distance = 0.0;
};

// Mass-preserving radial bumps rho (1 + t phi) of the minimizer for each amplitude t in (0, 1].
std::vector<PerturbationStep> minimizing_sequence(const TFSolution& tf, std::span<const double> amplitudes,
                                                  const Tolerance& tol = {});

}  // namespace fermigas
