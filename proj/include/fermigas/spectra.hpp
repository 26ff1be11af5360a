#pragma once

#include <string>
#include <vector>

#include "fermigas/numerics.hpp"
#include "fermigas/potentials.hpp"

namespace fermigas {

enum class CatalogProvenance { AnalyticHarmonic3d, FiniteDifference1d };

std::string provenance_name(CatalogProvenance p);

struct SpectralLevel {
  double energy = 0.0;
  long long degeneracy = 1;
  // Finite-difference catalogs: |fine - coarse| / 3 from one grid doubling, and the Richardson value.
  double refinement_error = 0.0;
  double extrapolated = 0.0;
};

struct SpectralCatalog {
  double hbar = 0.0;
  double level_max = 0.0;
  CatalogProvenance provenance = CatalogProvenance::AnalyticHarmonic3d;
  std::vector<SpectralLevel> levels;
  // Finite-difference catalogs: interior grid and, on request, states normalized with sum psi^2 dx = 1.
  std::vector<double> grid;
  double spacing = 0.0;
  std::vector<std::vector<double>> states;
};

// Levels offset + hbar (2n + 3) with degeneracy (n + 1)(n + 2) / 2 up to level_max.
SpectralCatalog harmonic_catalog(double hbar, double level_max, double offset = 0.0);

struct FdOptions {
  double half_width = 0.0;
  int points = 0;
  double level_max = 0.0;
  bool keep_states = false;
  bool estimate_refinement = true;
};

// Second-difference discretization of -hbar^2 d^2/dx^2 + v on (-L, L) with zero boundary values.
// Levels below level_max are located by Sturm counts and bisection.
SpectralCatalog fd_catalog_1d(const ScalarFunction& v, double hbar, const FdOptions& options);

struct SpectralCount {
  long long n_q = 0;
  double e_q = 0.0;
};

// Levels with energy <= level.
SpectralCount spectral_counts(const SpectralCatalog& catalog, double level);

struct WeylRow {
  double n = 0.0;
  double hbar = 0.0;
  long long n_q = 0;
  double n_cl_scaled = 0.0;  // N n_cl
  double n_err = 0.0;
  double e_q = 0.0;
  double e_cl_scaled = 0.0;  // N e_cl
  double e_err = 0.0;
};

struct WeylScan {
  std::vector<WeylRow> rows;
  double number_exponent = 0.0;  // log-log slope of n_err against N
  double energy_exponent = 0.0;
  bool exponents_defined = false;  // false when fewer than two rows carry a nonzero error
};

// Analytic 3d oscillator |x|^2 + offset with hbar = N^(-1/3).
WeylScan weyl_scan_harmonic_3d(const std::vector<double>& ns, double level, double offset = 0.0,
                               const Tolerance& tol = {});

// One-dimensional trap with hbar = 1/N, finite-difference catalog on (-L, L).
WeylScan weyl_scan_1d(const ScalarFunction& v, const std::vector<double>& ns, double level, double half_width,
                      const Tolerance& tol = {});

// One-dimensional phase-space counts (2 pi)^-1 |{p^2 + v <= level}| and energy on (-L, L).
std::pair<double, double> phase_space_counts_1d(const ScalarFunction& v, double level, double half_width,
                                                const Tolerance& tol = {});

// Radial density of the projector onto the M lowest states of -hbar^2 Delta + |x|^2. A partly
// filled shell is occupied uniformly, which keeps the density radial.
class FreeGroundState {
 public:
  static constexpr int kMaxShell = 200;

  FreeGroundState(double hbar, long long states);

  double operator()(double r) const;
  RadialProfile profile(const std::vector<double>& nodes) const;
  double mass(const Tolerance& tol = {}) const;
  // Radius beyond which the density is negligible.
  double cutoff_radius() const;
  int top_shell() const { return top_shell_; }
  double partial_fraction() const { return partial_fraction_; }

 private:
  double hbar_;
  long long states_;
  int top_shell_ = 0;
  double partial_fraction_ = 1.0;
  std::vector<double> axis_weights_;  // sum over n2 + n3 = m of phi_n2(0)^2 phi_n3(0)^2
};

struct HusimiOptions {
  double hbar_x = 0.0;          // 0 selects hbar^(4/3)
  double fermi_momentum = 1.0;  // Gamma(p) = max(1 - p_F^2/p^2, 0)
};

struct HusimiReport {
  double hbar = 0.0;
  double hbar_x = 0.0;
  double hbar_p = 0.0;
  int fill = 0;
  std::size_t x_nodes = 0;
  std::size_t p_nodes = 0;
  double resolution_residual = 0.0;       // |int m / (2 pi hbar) - fill| / fill
  double kinetic_husimi = 0.0;            // int p^2 m / (2 pi hbar)
  double kinetic_trace = 0.0;             // tr(-hbar^2 Delta gamma) from the momentum density
  double kinetic_identity_residual = 0.0; // relative, against kinetic_trace + hbar_p fill |f'|^2
  double potential_husimi = 0.0;
  double potential_trace = 0.0;
  double potential_identity_residual = 0.0;  // |potential_husimi - potential_trace| / fill
  double lowfreq_identity_residual = 0.0;    // relative to tr(-hbar^2 Delta gamma) + tr(gamma)
  double m_min = 0.0;
  double m_max = 0.0;
};

// gamma = projector on the `fill` lowest states of a finite-difference catalog built with keep_states.
HusimiReport coherent_identity_check_1d(const SpectralCatalog& catalog, const ScalarFunction& v, int fill,
                                        const HusimiOptions& options = {});

}  // namespace fermigas
