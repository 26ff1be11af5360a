#include "fermigas/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fermigas {

namespace {

constexpr int kBaseSteps = 2000;   // per range
constexpr int kMaxDoublings = 10;
constexpr double kRescaleAt = 1e150;
constexpr int kExteriorNodes = 200;
constexpr std::size_t kInteriorNodes = 2000;

struct Sample {
  double r;
  double u;
  double du;
  double log_scale;
};

struct Segment {
  double lo;
  double hi;
  std::vector<Sample> samples;
};

struct Shot {
  std::vector<Segment> segments;
  double a = 0.0;
  double u_end = 0.0;
  double du_end = 0.0;
  double log_end = 0.0;
};

// Grid edges inside [start, range]: jumps of v and, for tables, every sample radius.
std::vector<double> segment_edges(const Interaction& v, double start) {
  const double range = v.range();
  std::vector<double> edges{start, range};
  for (double d : v.discontinuities())
    if (d > start && d < range) edges.push_back(d);
  if (v.spec().kind == InteractionKind::Tabulated)
    for (double t : v.spec().table_radii) {
      const double r = t * v.dilation();
      if (r > start && r < range) edges.push_back(r);
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

Shot shoot(const Interaction& v, const std::vector<double>& edges, int multiplier) {
  const double range = edges.back();
  Shot shot;
  double u = 0.0;
  double du = 1.0;
  double log_scale = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k];
    const double hi = edges[k + 1];
    // Evaluate v strictly inside the segment so one-sided limits are used at jumps.
    const double pad = 1e-12 * (hi - lo);
    auto pot = [&](double r) { return v(std::clamp(r, lo + pad, hi - pad)); };
    int n = static_cast<int>(std::ceil(kBaseSteps * (hi - lo) / range)) * multiplier;
    n = std::max(n + (n % 2), 8);
    const double h = (hi - lo) / n;
    Segment seg{lo, hi, {}};
    seg.samples.reserve(n + 1);
    seg.samples.push_back({lo, u, du, log_scale});
    for (int i = 0; i < n; ++i) {
      const double r = lo + i * h;
      const double v0 = pot(r);
      const double vm = pot(r + 0.5 * h);
      const double v1 = pot(r + h);
      if (!std::isfinite(v0) || !std::isfinite(vm) || !std::isfinite(v1)) {
        std::ostringstream msg;
        msg << "interaction is unbounded near r = " << r << "; the shooting step is too stiff, use a smaller step or a hard core";
        throw NumericalError(msg.str());
      }
      const double k1u = du;
      const double k1d = 0.5 * v0 * u;
      const double k2u = du + 0.5 * h * k1d;
      const double k2d = 0.5 * vm * (u + 0.5 * h * k1u);
      const double k3u = du + 0.5 * h * k2d;
      const double k3d = 0.5 * vm * (u + 0.5 * h * k2u);
      const double k4u = du + h * k3d;
      const double k4d = 0.5 * v1 * (u + h * k3u);
      u += h * (k1u + 2.0 * k2u + 2.0 * k3u + k4u) / 6.0;
      du += h * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0;
      const double big = std::max(std::abs(u), std::abs(du));
      if (big > kRescaleAt) {
        u /= big;
        du /= big;
        log_scale += std::log(big);
      }
      seg.samples.push_back({i + 1 == n ? hi : lo + (i + 1) * h, u, du, log_scale});
    }
    shot.segments.push_back(std::move(seg));
  }
  if (!(du > 0.0)) throw NumericalError("non-physical zero-energy solution: u'(R) <= 0 at the range");
  shot.u_end = u;
  shot.du_end = du;
  shot.log_end = log_scale;
  shot.a = range - u / du;
  return shot;
}

ScatteringSolution free_solution(double r_max) {
  std::vector<double> r;
  for (int i = 0; i < 64; ++i) r.push_back(r_max * i / 63.0);
  return ScatteringSolution{0.0, 0.0, 0.0, 0.0, 0.0, 0, RadialProfile(r, r)};
}

void check_scaling(double factor, double dilation) {
  if (!(factor >= 0.0) || !std::isfinite(factor)) throw ConfigError("interaction scale factor must be finite and >= 0");
  if (!(dilation > 0.0) || !std::isfinite(dilation)) throw ConfigError("interaction dilation must be finite and > 0");
}

}  // namespace

std::string kind_name(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::Zero: return "zero";
    case InteractionKind::SquareBarrier: return "square_barrier";
    case InteractionKind::HardCore: return "hard_core";
    case InteractionKind::Bump: return "bump";
    case InteractionKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

Interaction::Interaction(InteractionSpec spec) : spec_(std::move(spec)) {
  if (spec_.kind == InteractionKind::Zero) return;
  if (!(spec_.amplitude >= 0.0) || !std::isfinite(spec_.amplitude))
    throw ConfigError("interaction amplitude must be finite and >= 0");
  if (spec_.kind == InteractionKind::Tabulated) {
    const auto& r = spec_.table_radii;
    const auto& v = spec_.table_values;
    if (r.empty() || r.front() != 0.0) throw ConfigError("tabulated interaction must start at r = 0");
    for (double x : v)
      if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("tabulated interaction values must be finite and >= 0");
    table_.emplace(r, v);
    // The interpolant is positive up to the node after the last positive sample.
    std::size_t last = 0;
    bool any = false;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] > 0.0) {
        last = i;
        any = true;
      }
    base_range_ = any ? r[std::min(last + 1, r.size() - 1)] : 0.0;
    return;
  }
  if (!(spec_.radius > 0.0) || !std::isfinite(spec_.radius)) throw ConfigError("interaction radius must be finite and > 0");
  base_range_ = spec_.radius;
}

double Interaction::operator()(double r) const {
  const double x = r / dilation_;
  switch (spec_.kind) {
    case InteractionKind::Zero: return 0.0;
    case InteractionKind::SquareBarrier: return x <= spec_.radius ? factor_ * spec_.amplitude : 0.0;
    case InteractionKind::HardCore: return x < spec_.radius ? std::numeric_limits<double>::infinity() : 0.0;
    case InteractionKind::Bump: {
      if (x > spec_.radius) return 0.0;
      const double t = 1.0 - (x / spec_.radius) * (x / spec_.radius);
      return factor_ * spec_.amplitude * t * t;
    }
    case InteractionKind::Tabulated:
      return x <= base_range_ ? factor_ * spec_.amplitude * std::max((*table_)(x), 0.0) : 0.0;
  }
  return 0.0;
}

double Interaction::range() const { return is_zero() ? 0.0 : base_range_ * dilation_; }

bool Interaction::is_zero() const {
  if (spec_.kind == InteractionKind::Zero || base_range_ == 0.0) return true;
  if (spec_.kind == InteractionKind::HardCore) return false;
  return factor_ == 0.0 || spec_.amplitude == 0.0;
}

std::vector<double> Interaction::discontinuities() const {
  if (is_zero()) return {};
  if (spec_.kind == InteractionKind::SquareBarrier || spec_.kind == InteractionKind::HardCore)
    return {spec_.radius * dilation_};
  if (spec_.kind == InteractionKind::Tabulated && (*table_)(base_range_) > 0.0) return {range()};
  return {};
}

Interaction Interaction::scaled(double factor, double dilation) const {
  check_scaling(factor, dilation);
  Interaction out = *this;
  out.factor_ *= factor;
  out.dilation_ *= dilation;
  return out;
}

ScatteringSolution zero_energy_solve(const Interaction& v, double r_max, const Tolerance& tol) {
  tol.validate();
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ConfigError("scattering r_max must be finite and > 0");
  if (v.is_zero()) return free_solution(r_max);
  const double range = v.range();
  if (r_max < 2.0 * range) throw ConfigError("scattering r_max must be at least twice the interaction range");

  if (v.is_hard_core()) {
    // f vanishes inside the core and u = r - R outside: the wall is the whole solution.
    std::vector<double> r;
    std::vector<double> u;
    for (int i = 0; i < 16; ++i) {
      r.push_back(range * i / 16.0);
      u.push_back(0.0);
    }
    double max_dev = 0.0;
    for (int i = 0; i <= kExteriorNodes; ++i) {
      const double x = range + (r_max - range) * i / kExteriorNodes;
      r.push_back(x);
      u.push_back(x - range);
      max_dev = std::max(max_dev, std::abs(u.back() - (x - range)));
    }
    return ScatteringSolution{range, range, max_dev, 4.0 * kPi * range, 0.0, 0, RadialProfile(r, u)};
  }

  const auto edges = segment_edges(v, 0.0);
  Shot previous = shoot(v, edges, 1);
  Shot shot = previous;
  double change = 0.0;
  int multiplier = 1;
  for (int d = 1;; ++d) {
    multiplier *= 2;
    shot = shoot(v, edges, multiplier);
    change = std::abs(shot.a - previous.a);
    if (change <= tol.target(shot.a)) break;
    if (d >= kMaxDoublings)
      throw RefinementError("scattering length did not settle under step halving", shot.a, previous.a);
    previous = std::move(shot);
  }

  const double a = shot.a;
  auto normalized = [&](const Sample& s) { return std::exp(s.log_scale - shot.log_end) / shot.du_end; };

  // Interior energy by composite Simpson on each segment.
  double interior = 0.0;
  for (const auto& seg : shot.segments) {
    const double pad = 1e-12 * (seg.hi - seg.lo);
    const auto& s = seg.samples;
    const std::size_t n = s.size() - 1;
    const double h = (seg.hi - seg.lo) / static_cast<double>(n);
    auto density = [&](const Sample& p) {
      const double c = normalized(p);
      const double u = p.u * c;
      const double du = p.du * c;
      const double grad = p.r > 0.0 ? du - u / p.r : 0.0;
      return grad * grad + 0.5 * v(std::clamp(p.r, seg.lo + pad, seg.hi - pad)) * u * u;
    };
    double sum = density(s.front()) + density(s.back());
    for (std::size_t i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * density(s[i]);
    interior += sum * h / 3.0;
  }
  const double energy = 4.0 * kPi * (interior + a * a / range);

  std::vector<double> r;
  std::vector<double> u;
  std::size_t total = 0;
  for (const auto& seg : shot.segments) total += seg.samples.size();
  const std::size_t stride = std::max<std::size_t>(1, total / kInteriorNodes);
  for (const auto& seg : shot.segments) {
    for (std::size_t i = 0; i < seg.samples.size(); ++i) {
      const auto& p = seg.samples[i];
      if (i % stride != 0 && i + 1 != seg.samples.size()) continue;
      if (!r.empty() && p.r <= r.back()) continue;
      r.push_back(p.r);
      u.push_back(p.u * normalized(p));
    }
  }

  // Exterior: v vanishes, so the same stepper is exact up to rounding; integrate it anyway.
  double ue = shot.u_end / shot.du_end;
  double due = 1.0;
  double fit = 0.0;
  const double h = (r_max - range) / kExteriorNodes;
  for (int i = 1; i <= kExteriorNodes; ++i) {
    ue += h * due;
    const double x = range + i * h;
    r.push_back(x);
    u.push_back(ue);
    fit = std::max(fit, std::abs(ue - (x - a)));
  }
  return ScatteringSolution{a, range, fit, energy, change, static_cast<int>(multiplier), RadialProfile(r, u)};
}

std::vector<AmplitudePoint> hardcore_limit(const Interaction& v, const std::vector<double>& amplitudes,
                                           const Tolerance& tol) {
  if (amplitudes.empty()) throw ConfigError("amplitude list is empty");
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (!(amplitudes[i] > 0.0) || !std::isfinite(amplitudes[i])) throw ConfigError("amplitudes must be finite and > 0");
    if (i > 0 && !(amplitudes[i] > amplitudes[i - 1])) throw ConfigError("amplitudes must be strictly increasing");
  }
  std::vector<AmplitudePoint> out;
  const double r_max = std::max(4.0 * v.range(), 1e-300);
  for (double amp : amplitudes) out.push_back({amp, zero_energy_solve(v.scaled(amp, 1.0), r_max, tol).scattering_length});
  return out;
}

ScaledIdentity scaled_identity_check(const Interaction& w, double n, double beta, const Tolerance& tol) {
  if (!(n >= 1.0) || !std::isfinite(n)) throw ConfigError("N must be >= 1");
  if (!(beta > 1.0 / 3.0 && beta < 1.0)) throw ConfigError("beta must lie in (1/3, 1)");
  ScaledIdentity out;
  if (w.is_zero()) return out;
  // hbar^-2 N^(2 beta - 2/3) = N^(2 beta).
  const Interaction scaled = w.scaled(std::pow(n, 2.0 * beta), std::pow(n, -beta));
  const double a_w = zero_energy_solve(w, 4.0 * w.range(), tol).scattering_length;
  out.lhs = zero_energy_solve(scaled, 4.0 * scaled.range(), tol).scattering_length;
  out.rhs = std::pow(n, -beta) * a_w;
  out.rel_err = out.rhs > 0.0 ? std::abs(out.lhs - out.rhs) / out.rhs : std::abs(out.lhs);
  return out;
}

std::vector<LargeAmplitudePoint> large_amplitude_trend(const Interaction& w, double alpha, double beta,
                                            const std::vector<double>& ns, const Tolerance& tol) {
  if (!(alpha > 2.0 * beta - 2.0 / 3.0)) throw ConfigError("large-amplitude trend requires alpha > 2 beta - 2/3");
  std::vector<LargeAmplitudePoint> out;
  for (double n : ns) {
    if (!(n >= 1.0) || !std::isfinite(n)) throw ConfigError("N must be >= 1");
    const Interaction scaled = w.scaled(std::pow(n, 2.0 / 3.0 + alpha), std::pow(n, -beta));
    const double a = scaled.is_zero() ? 0.0 : zero_energy_solve(scaled, 4.0 * scaled.range(), tol).scattering_length;
    out.push_back({n, std::pow(n, beta) * a});
  }
  return out;
}

DysonKit::DysonKit(double inner_radius, double outer_radius, double inverse_momentum, double fermi_momentum)
    : r0_(inner_radius), r_(outer_radius), s_(inverse_momentum), pf_(fermi_momentum) {
  if (!(r0_ >= 0.0) || !std::isfinite(r_) || !(r_ > r0_))
    throw ConfigError("Dyson geometry requires R > R0 >= 0");
  if (!(s_ > 0.0) || !std::isfinite(s_)) throw ConfigError("Dyson cutoff requires s > 0");
  if (!(pf_ > 0.0) || !std::isfinite(pf_)) throw ConfigError("Dyson cutoff requires p_F > 0");
  const std::vector<double> breaks{r0_};
  u_integral_ = integrate_radial([this](double r) { return spread(r); }, r_, {1e-14, 1e-13, 200}, breaks);
}

double DysonKit::spread(double r) const {
  if (r < r0_ || r > r_) return 0.0;
  return 3.0 / (4.0 * kPi * (r_ * r_ * r_ - r0_ * r0_ * r0_));
}

double DysonKit::cutoff(double p) const {
  const double t = s_ * p;
  if (t < 1.0) return 0.0;
  if (t <= 2.0) return t - 1.0;
  return 1.0;
}

double DysonKit::gamma(double p) const {
  if (!(p > 0.0)) return 0.0;
  return std::max(1.0 - pf_ * pf_ / (p * p), 0.0);
}

DysonKit dyson_parts(double inner_radius, double outer_radius, double inverse_momentum, double fermi_momentum) {
  return DysonKit(inner_radius, outer_radius, inverse_momentum, fermi_momentum);
}

DysonCheck dyson_inequality_check(const DysonKit& kit, int count, double p_max) {
  if (count < 2) throw ConfigError("Dyson check needs at least two momenta");
  if (!(p_max > 0.0) || !std::isfinite(p_max)) throw ConfigError("Dyson check needs p_max > 0");
  const double weight = 1.0 - kit.inverse_momentum() * kit.inverse_momentum() * kit.fermi_momentum() * kit.fermi_momentum();
  DysonCheck out;
  out.momenta = count;
  out.min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const double p = p_max * i / (count - 1);
    const double chi = kit.cutoff(p);
    const double margin = kit.gamma(p) - weight * chi * chi;
    out.min_margin = std::min(out.min_margin, margin);
    if (margin < 0.0) ++out.violations;
  }
  return out;
}

}  // namespace fermigas
