#include "fermigas/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fermigas/semiclassics.hpp"

namespace fermigas {

std::string provenance_name(CatalogProvenance p) {
  switch (p) {
    case CatalogProvenance::AnalyticHarmonic3d: return "analytic_harmonic_3d";
    case CatalogProvenance::FiniteDifference1d: return "finite_difference_1d";
  }
  return "unknown";
}

SpectralCatalog harmonic_catalog(double hbar, double level_max, double offset) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be finite and > 0");
  if (!std::isfinite(level_max) || !std::isfinite(offset)) throw ConfigError("catalog levels must be finite");
  if (!(level_max > offset)) throw ConfigError("catalog truncation must lie above the offset");
  SpectralCatalog cat;
  cat.hbar = hbar;
  cat.level_max = level_max;
  cat.provenance = CatalogProvenance::AnalyticHarmonic3d;
  for (long long n = 0;; ++n) {
    const double e = offset + hbar * static_cast<double>(2 * n + 3);
    if (e > level_max) break;
    SpectralLevel lvl;
    lvl.energy = e;
    lvl.extrapolated = e;
    lvl.degeneracy = (n + 1) * (n + 2) / 2;
    cat.levels.push_back(lvl);
  }
  return cat;
}

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  double off = 0.0;
};

// Number of eigenvalues strictly below mu (LDL^T inertia).
int sturm_count(const Tridiagonal& t, double mu) {
  const double off2 = t.off * t.off;
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    q = t.diag[i] - mu - (i == 0 ? 0.0 : off2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

// (T - shift) x = rhs by LU with partial pivoting; rhs is overwritten.
void shifted_solve(const Tridiagonal& t, double shift, std::vector<double>& rhs) {
  const std::size_t n = t.diag.size();
  std::vector<double> dl(n - 1, t.off), du(n - 1, t.off), du2(n, 0.0), d(n);
  std::vector<char> swapped(n, 0);
  double scale = std::abs(t.off);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = t.diag[i] - shift;
    scale = std::max(scale, std::abs(d[i]));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] != 0.0) {
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      }
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  const double floor = std::numeric_limits<double>::epsilon() * scale;
  for (double& p : d)
    if (std::abs(p) < floor) p = p < 0.0 ? -floor : floor;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!swapped[i]) {
      rhs[i + 1] -= dl[i] * rhs[i];
    } else {
      const double temp = rhs[i];
      rhs[i] = rhs[i + 1];
      rhs[i + 1] = temp - dl[i] * rhs[i];
    }
  }
  rhs[n - 1] /= d[n - 1];
  if (n >= 2) rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
  for (std::size_t i = n - 2; i-- > 0;) rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
}

void normalize(std::vector<double>& x, double dx) {
  double s = 0.0;
  for (double a : x) s += a * a;
  const double inv = 1.0 / std::sqrt(s * dx);
  for (double& a : x) a *= inv;
}

std::vector<double> inverse_iteration(const Tridiagonal& t, double eigenvalue, double dx,
                                      const std::vector<std::vector<double>>& neighbours) {
  const std::size_t n = t.diag.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i));
  for (int it = 0; it < 4; ++it) {
    shifted_solve(t, eigenvalue, x);
    for (const auto& other : neighbours) {
      double overlap = 0.0;
      for (std::size_t i = 0; i < n; ++i) overlap += other[i] * x[i] * dx;
      for (std::size_t i = 0; i < n; ++i) x[i] -= overlap * other[i];
    }
    normalize(x, dx);
  }
  const double peak = *std::max_element(x.begin(), x.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  for (double a : x) {
    if (std::abs(a) > 1e-3 * std::abs(peak)) {
      if (a < 0.0)
        for (double& b : x) b = -b;
      break;
    }
  }
  return x;
}

struct Discretization {
  Tridiagonal matrix;
  std::vector<double> grid;
  double dx = 0.0;
};

Discretization discretize(const ScalarFunction& v, double hbar, double half_width, int points) {
  Discretization out;
  out.dx = 2.0 * half_width / (points + 1);
  const double kin = hbar * hbar / (out.dx * out.dx);
  out.matrix.off = -kin;
  out.grid.resize(points);
  out.matrix.diag.resize(points);
  for (int i = 0; i < points; ++i) {
    const double x = -half_width + (i + 1) * out.dx;
    const double value = v(x);
    if (!std::isfinite(value)) throw NumericalError("potential is not finite at x = " + std::to_string(x));
    out.grid[i] = x;
    out.matrix.diag[i] = 2.0 * kin + value;
  }
  return out;
}

// Bisection on Sturm counts until each bracket is narrower than rel_width relative to its ends.
std::vector<double> eigenvalues_below(const Tridiagonal& t, double level_max, double rel_width) {
  const int count = sturm_count(t, level_max);
  double lo = t.diag[0];
  for (double d : t.diag) lo = std::min(lo, d);
  lo -= 2.0 * std::abs(t.off) + 1.0;
  std::vector<double> lower(count, lo), upper(count, level_max), out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    double a = lower[k];
    double b = upper[k];
    while (b - a > rel_width * std::max({std::abs(a), std::abs(b), 1e-300})) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const int c = sturm_count(t, mid);
      // Every probe also tightens the brackets of the later eigenvalues.
      for (int j = k + 1; j < count; ++j) {
        if (j < c)
          upper[j] = std::min(upper[j], mid);
        else
          lower[j] = std::max(lower[j], mid);
      }
      if (c > k)
        b = mid;
      else
        a = mid;
    }
    lower[k] = a;
    upper[k] = b;
    out.push_back(0.5 * (a + b));
  }
  return out;
}

double rayleigh_quotient(const Tridiagonal& t, const std::vector<double>& x) {
  const std::size_t n = x.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double tx = t.diag[i] * x[i];
    if (i > 0) tx += t.off * x[i - 1];
    if (i + 1 < n) tx += t.off * x[i + 1];
    num += x[i] * tx;
    den += x[i] * x[i];
  }
  return num / den;
}

}  // namespace

SpectralCatalog fd_catalog_1d(const ScalarFunction& v, double hbar, const FdOptions& options) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be finite and > 0");
  if (!(options.half_width > 0.0) || !std::isfinite(options.half_width))
    throw ConfigError("domain half-width must be finite and > 0");
  if (options.points < 200) throw ConfigError("finite-difference catalogs need at least 200 points");
  if (!std::isfinite(options.level_max)) throw ConfigError("catalog truncation must be finite");
  const double inner = options.half_width / 1.2;
  if (v(inner) < options.level_max || v(-inner) < options.level_max)
    throw DomainError("domain too small: the allowed region for the truncation level needs a 20% margin");

  const auto coarse = discretize(v, hbar, options.half_width, options.points);
  // Coarse brackets only isolate; the Rayleigh quotient of the inverse-iteration vector finishes the job.
  auto values = eigenvalues_below(coarse.matrix, options.level_max, 1e-8);

  SpectralCatalog cat;
  cat.hbar = hbar;
  cat.level_max = options.level_max;
  cat.provenance = CatalogProvenance::FiniteDifference1d;
  cat.grid = coarse.grid;
  cat.spacing = coarse.dx;

  const std::size_t n = coarse.grid.size();
  const double edge = 0.95 * options.half_width;
  std::vector<std::vector<double>> states;
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::vector<std::vector<double>> neighbours;
    const double gap_floor = 1e-9 * std::max(1.0, std::abs(values[k]));
    for (std::size_t j = k; j-- > 0 && values[k] - values[j] < gap_floor;) neighbours.push_back(states[j]);
    auto psi = inverse_iteration(coarse.matrix, values[k], coarse.dx, neighbours);
    const double bracket = 1e-8 * std::max(std::abs(values[k]), 1e-300);
    const double rq = rayleigh_quotient(coarse.matrix, psi);
    if (std::abs(rq - values[k]) <= bracket) values[k] = rq;
    double boundary = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(coarse.grid[i]) > edge) boundary += psi[i] * psi[i] * coarse.dx;
    if (boundary > 1e-8)
      throw DomainError("domain too small: state " + std::to_string(k) + " carries mass " + std::to_string(boundary) +
                        " near the boundary");
    states.push_back(std::move(psi));
  }

  std::vector<double> fine;
  if (options.estimate_refinement) {
    const auto refined = discretize(v, hbar, options.half_width, 2 * options.points + 1);
    fine = eigenvalues_below(refined.matrix, options.level_max, 1e-12);
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    SpectralLevel lvl;
    lvl.energy = values[k];
    lvl.extrapolated = values[k];
    if (k < fine.size()) {
      lvl.refinement_error = std::abs(fine[k] - values[k]) / 3.0;
      lvl.extrapolated = (4.0 * fine[k] - values[k]) / 3.0;
    }
    cat.levels.push_back(lvl);
  }
  if (options.keep_states) cat.states = std::move(states);
  return cat;
}

SpectralCount spectral_counts(const SpectralCatalog& catalog, double level) {
  if (!std::isfinite(level)) throw ConfigError("counting level must be finite");
  if (level > catalog.level_max)
    throw DomainError("truncation error: level " + std::to_string(level) + " exceeds the catalog truncation " +
                      std::to_string(catalog.level_max));
  SpectralCount out;
  for (const auto& lvl : catalog.levels) {
    if (lvl.energy > level) break;
    out.n_q += lvl.degeneracy;
    out.e_q += lvl.energy * static_cast<double>(lvl.degeneracy);
  }
  return out;
}

namespace {

void validate_sweep(const std::vector<double>& ns) {
  if (ns.size() < 2) throw ConfigError("Weyl scan needs at least two particle numbers");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(ns[i] >= 1.0) || !std::isfinite(ns[i])) throw ConfigError("Weyl scan particle numbers must be >= 1");
    if (i > 0 && !(ns[i] > ns[i - 1])) throw ConfigError("Weyl scan particle numbers must increase");
  }
  if (ns.back() < 100.0 * ns.front() * (1.0 - 1e-12)) throw ConfigError("Weyl scan must span at least two decades");
}

void fit_exponents(WeylScan& scan) {
  std::vector<double> xn, yn, xe, ye;
  for (const auto& row : scan.rows) {
    if (row.n_err > 0.0) {
      xn.push_back(row.n);
      yn.push_back(row.n_err);
    }
    if (row.e_err > 0.0) {
      xe.push_back(row.n);
      ye.push_back(row.e_err);
    }
  }
  scan.exponents_defined = xn.size() >= 2 && xe.size() >= 2;
  if (!scan.exponents_defined) return;
  scan.number_exponent = fit_log_slope(xn, yn);
  scan.energy_exponent = fit_log_slope(xe, ye);
}

}  // namespace

WeylScan weyl_scan_harmonic_3d(const std::vector<double>& ns, double level, double offset, const Tolerance& tol) {
  validate_sweep(ns);
  PotentialSpec spec;
  spec.offset = offset;
  const auto budget = phase_space_counts(make_potential(spec), level, tol);
  WeylScan scan;
  for (double n : ns) {
    WeylRow row;
    row.n = n;
    row.hbar = std::cbrt(1.0 / n);
    const auto q = spectral_counts(harmonic_catalog(row.hbar, level, offset), level);
    row.n_q = q.n_q;
    row.e_q = q.e_q;
    row.n_cl_scaled = n * budget.n_cl;
    row.e_cl_scaled = n * budget.e_cl;
    row.n_err = std::abs(static_cast<double>(row.n_q) - row.n_cl_scaled);
    row.e_err = std::abs(row.e_q - row.e_cl_scaled);
    scan.rows.push_back(row);
  }
  fit_exponents(scan);
  return scan;
}

std::pair<double, double> phase_space_counts_1d(const ScalarFunction& v, double level, double half_width,
                                                const Tolerance& tol) {
  tol.validate();
  const ScalarFunction gap = [&](double x) { return level - v(x); };
  const auto kinks = sign_changes(gap, -half_width, half_width, 2000);
  const double n = integrate(
                       [&](double x) {
                         const double g = level - v(x);
                         return g > 0.0 ? std::sqrt(g) : 0.0;
                       },
                       -half_width, half_width, tol, kinks)
                       .value /
                   kPi;
  const double e = integrate(
                       [&](double x) {
                         const double vx = v(x);
                         const double g = level - vx;
                         return g > 0.0 ? std::sqrt(g) * (g / 3.0 + vx) : 0.0;
                       },
                       -half_width, half_width, tol, kinks)
                       .value /
                   kPi;
  return {n, e};
}

WeylScan weyl_scan_1d(const ScalarFunction& v, const std::vector<double>& ns, double level, double half_width,
                      const Tolerance& tol) {
  validate_sweep(ns);
  const auto [n_cl, e_cl] = phase_space_counts_1d(v, level, half_width, tol);
  double vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) vmin = std::min(vmin, v(-half_width + half_width * i / 1000.0));
  const double momentum = std::sqrt(std::max(level - vmin, 0.0)) + 1.0;
  WeylScan scan;
  for (double n : ns) {
    WeylRow row;
    row.n = n;
    row.hbar = 1.0 / n;
    // About ten nodes per hbar / p at the top of the spectrum; Richardson values absorb the rest.
    const double dx = row.hbar / (10.0 * momentum);
    FdOptions opt;
    opt.half_width = half_width;
    opt.points = std::max(200, static_cast<int>(std::ceil(2.0 * half_width / dx)));
    opt.level_max = level;
    const auto cat = fd_catalog_1d(v, row.hbar, opt);
    for (const auto& lvl : cat.levels) {
      if (lvl.extrapolated > level) continue;
      row.n_q += 1;
      row.e_q += lvl.extrapolated;
    }
    row.n_cl_scaled = n * n_cl;
    row.e_cl_scaled = n * e_cl;
    row.n_err = std::abs(static_cast<double>(row.n_q) - row.n_cl_scaled);
    row.e_err = std::abs(row.e_q - row.e_cl_scaled);
    scan.rows.push_back(row);
  }
  fit_exponents(scan);
  return scan;
}

namespace {

// Squares of the normalized oscillator functions phi_0..phi_top at x, phi_0 = (pi hbar)^(-1/4) e^(-x^2/2hbar).
void oscillator_squares(double x, double hbar, int top, std::vector<double>& out) {
  out.assign(top + 1, 0.0);
  const double xi = x / std::sqrt(hbar);
  double log_scale = -0.5 * xi * xi - 0.25 * std::log(kPi * hbar);
  double prev = 0.0, cur = 1.0;
  out[0] = std::exp(2.0 * log_scale);
  for (int n = 0; n < top; ++n) {
    const double next = std::sqrt(2.0 / (n + 1)) * xi * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e100) {
      prev *= 1e-100;
      cur *= 1e-100;
      log_scale += 100.0 * std::log(10.0);
    }
    out[n + 1] = cur == 0.0 ? 0.0 : std::exp(2.0 * (std::log(std::abs(cur)) + log_scale));
  }
}

}  // namespace

FreeGroundState::FreeGroundState(double hbar, long long states) : hbar_(hbar), states_(states) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be finite and > 0");
  if (states < 1) throw ConfigError("free ground state needs M >= 1");
  long long filled = 0;
  int shell = 0;
  for (;; ++shell) {
    if (shell > kMaxShell)
      throw ConfigError("depth error: M = " + std::to_string(states) + " needs shell index above " +
                        std::to_string(kMaxShell));
    const long long deg = static_cast<long long>(shell + 1) * (shell + 2) / 2;
    if (filled + deg >= states) {
      partial_fraction_ = static_cast<double>(states - filled) / static_cast<double>(deg);
      break;
    }
    filled += deg;
  }
  top_shell_ = shell;

  std::vector<double> at_origin;
  oscillator_squares(0.0, hbar_, top_shell_, at_origin);
  std::vector<double> pair(top_shell_ + 1, 0.0);
  for (int m = 0; m <= top_shell_; ++m)
    for (int a = 0; a <= m; ++a) pair[m] += at_origin[a] * at_origin[m - a];
  // Weight of phi_n1(r)^2 along an axis, summed over occupied shells.
  axis_weights_.assign(top_shell_ + 1, 0.0);
  for (int n1 = 0; n1 <= top_shell_; ++n1)
    for (int k = n1; k <= top_shell_; ++k)
      axis_weights_[n1] += (k == top_shell_ ? partial_fraction_ : 1.0) * pair[k - n1];
}

double FreeGroundState::operator()(double r) const {
  std::vector<double> sq;
  oscillator_squares(r, hbar_, top_shell_, sq);
  double rho = 0.0;
  for (int n = 0; n <= top_shell_; ++n) rho += sq[n] * axis_weights_[n];
  return rho;
}

RadialProfile FreeGroundState::profile(const std::vector<double>& nodes) const {
  std::vector<double> values;
  values.reserve(nodes.size());
  for (double r : nodes) values.push_back((*this)(r));
  return RadialProfile(nodes, values);
}

double FreeGroundState::cutoff_radius() const {
  return std::sqrt(hbar_ * (2.0 * top_shell_ + 3.0)) + 10.0 * std::sqrt(hbar_);
}

double FreeGroundState::mass(const Tolerance& tol) const {
  const double turning = std::sqrt(hbar_ * (2.0 * top_shell_ + 3.0));
  const std::vector<double> cuts{turning};
  return integrate_radial([this](double r) { return (*this)(r); }, cutoff_radius(), tol, cuts);
}

HusimiReport coherent_identity_check_1d(const SpectralCatalog& catalog, const ScalarFunction& v, int fill,
                                        const HusimiOptions& options) {
  if (catalog.provenance != CatalogProvenance::FiniteDifference1d || catalog.states.empty())
    throw ConfigError("Husimi check needs a finite-difference catalog built with its states");
  if (fill < 1 || static_cast<std::size_t>(fill) > catalog.states.size())
    throw ConfigError("fill must lie between 1 and the catalog size");
  if (!(options.fermi_momentum > 0.0)) throw ConfigError("Fermi momentum must be > 0");
  const double hbar = catalog.hbar;
  const double hbar_x = options.hbar_x > 0.0 ? options.hbar_x : std::pow(hbar, 4.0 / 3.0);
  if (!std::isfinite(hbar_x)) throw ConfigError("hbar_x must be finite");
  const double hbar_p = hbar * hbar / hbar_x;
  const double width = std::sqrt(hbar_x);
  const double dx = catalog.spacing;
  if (width / dx < 8.0)
    throw ConfigError("resolution error: " + std::to_string(width / dx) +
                      " grid nodes per coherent width, at least 8 needed");

  const auto& grid = catalog.grid;
  const std::size_t n = grid.size();
  const auto& states = catalog.states;

  HusimiReport rep;
  rep.hbar = hbar;
  rep.hbar_x = hbar_x;
  rep.hbar_p = hbar_p;
  rep.fill = fill;

  // Extent holding all but 1e-13 of the filled mass.
  std::vector<double> density(n, 0.0);
  for (int k = 0; k < fill; ++k)
    for (std::size_t i = 0; i < n; ++i) density[i] += states[k][i] * states[k][i] * dx;
  double extent = 0.0;
  {
    double tail = 0.0;
    std::size_t lo = 0, hi = n - 1;
    while (lo < hi) {
      const double next = density[lo] + density[hi];
      if (tail + next > 1e-13 * fill) break;
      tail += next;
      ++lo;
      --hi;
    }
    extent = std::max(std::abs(grid[lo]), std::abs(grid[hi]));
  }

  double top = catalog.levels[fill - 1].energy;
  double vmin = std::numeric_limits<double>::infinity();
  for (double x : grid) vmin = std::min(vmin, v(x));
  const double window = 7.0 * width;
  const double x_max = extent + window;
  const double p_max = std::sqrt(std::max(top - vmin, 0.0)) + 8.0 * (std::sqrt(hbar) + std::sqrt(hbar_p));
  const double step_x = width / 4.0;
  const double step_p = std::min(std::sqrt(hbar_p) / 4.0, 0.8 * kPi * hbar / x_max);
  const int half_x = static_cast<int>(std::ceil(x_max / step_x));
  const int half_p = static_cast<int>(std::ceil(p_max / step_p));
  rep.x_nodes = 2 * half_x + 1;
  rep.p_nodes = 2 * half_p + 1;
  const double p0 = -half_p * step_p;

  // e^{-i p0 y / hbar} and e^{-i step_p y / hbar} per grid node.
  std::vector<double> start_re(n), start_im(n), rot_re(n), rot_im(n);
  for (std::size_t j = 0; j < n; ++j) {
    start_re[j] = std::cos(p0 * grid[j] / hbar);
    start_im[j] = -std::sin(p0 * grid[j] / hbar);
    rot_re[j] = std::cos(step_p * grid[j] / hbar);
    rot_im[j] = -std::sin(step_p * grid[j] / hbar);
  }

  // Momentum density t(p) on the same p grid.
  std::vector<double> t(rep.p_nodes, 0.0);
  {
    std::vector<double> zr = start_re, zi = start_im;
    const double norm = dx * dx / (2.0 * kPi * hbar);
    for (std::size_t ip = 0; ip < rep.p_nodes; ++ip) {
      for (int k = 0; k < fill; ++k) {
        double cr = 0.0, ci = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          cr += states[k][j] * zr[j];
          ci += states[k][j] * zi[j];
        }
        t[ip] += (cr * cr + ci * ci) * norm;
      }
      for (std::size_t j = 0; j < n; ++j) {
        const double r = zr[j] * rot_re[j] - zi[j] * rot_im[j];
        zi[j] = zr[j] * rot_im[j] + zi[j] * rot_re[j];
        zr[j] = r;
      }
    }
  }

  const double pf2 = options.fermi_momentum * options.fermi_momentum;
  double mass_ps = 0.0, kin_ps = 0.0, pot_ps = 0.0, low_ps = 0.0;
  double kin_t = 0.0, low_t = 0.0;
  for (std::size_t ip = 0; ip < rep.p_nodes; ++ip) {
    const double p = p0 + ip * step_p;
    kin_t += p * p * t[ip] * step_p;
    low_t += std::min(p * p, pf2) * t[ip] * step_p;
  }

  rep.m_min = std::numeric_limits<double>::infinity();
  rep.m_max = -std::numeric_limits<double>::infinity();
  const double amp = std::pow(kPi * hbar_x, -0.25);
  std::vector<double> weights, zr, zi;
  const double cell = step_x * step_p / (2.0 * kPi * hbar);
  for (int ix = -half_x; ix <= half_x; ++ix) {
    const double xc = ix * step_x;
    const auto first = std::lower_bound(grid.begin(), grid.end(), xc - window) - grid.begin();
    const auto last = std::upper_bound(grid.begin(), grid.end(), xc + window) - grid.begin();
    const std::size_t len = last > first ? static_cast<std::size_t>(last - first) : 0;
    std::vector<double> row(rep.p_nodes, 0.0);
    if (len > 0) {
      weights.assign(static_cast<std::size_t>(fill) * len, 0.0);
      for (int k = 0; k < fill; ++k)
        for (std::size_t j = 0; j < len; ++j) {
          const double u = (grid[first + j] - xc) / width;
          weights[k * len + j] = dx * amp * std::exp(-0.5 * u * u) * states[k][first + j];
        }
      zr.assign(start_re.begin() + first, start_re.begin() + last);
      zi.assign(start_im.begin() + first, start_im.begin() + last);
      for (std::size_t ip = 0; ip < rep.p_nodes; ++ip) {
        double m = 0.0;
        for (int k = 0; k < fill; ++k) {
          const double* w = &weights[k * len];
          double cr = 0.0, ci = 0.0;
          for (std::size_t j = 0; j < len; ++j) {
            cr += w[j] * zr[j];
            ci += w[j] * zi[j];
          }
          m += cr * cr + ci * ci;
        }
        row[ip] = m;
        for (std::size_t j = 0; j < len; ++j) {
          const double rr = rot_re[first + j], ri = rot_im[first + j];
          const double r = zr[j] * rr - zi[j] * ri;
          zi[j] = zr[j] * ri + zi[j] * rr;
          zr[j] = r;
        }
      }
    }
    const double vx = v(xc);
    for (std::size_t ip = 0; ip < rep.p_nodes; ++ip) {
      const double p = p0 + ip * step_p;
      const double m = row[ip];
      rep.m_min = std::min(rep.m_min, m);
      rep.m_max = std::max(rep.m_max, m);
      mass_ps += m * cell;
      kin_ps += p * p * m * cell;
      pot_ps += vx * m * cell;
      low_ps += std::min(p * p, pf2) * m * cell;
    }
  }

  double pot_trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) pot_trace += v(grid[i]) * density[i];

  const double window_kinetic = hbar_p * fill * 0.5;
  rep.resolution_residual = std::abs(mass_ps - fill) / fill;
  rep.kinetic_husimi = kin_ps;
  rep.kinetic_trace = kin_t;
  rep.kinetic_identity_residual = std::abs(kin_ps - (kin_t + window_kinetic)) / (kin_t + window_kinetic);
  rep.potential_husimi = pot_ps;
  rep.potential_trace = pot_trace;
  rep.potential_identity_residual = std::abs(pot_ps - pot_trace) / fill;
  rep.lowfreq_identity_residual = std::abs(low_ps - low_t) / (kin_t + fill);
  return rep;
}

}  // namespace fermigas
