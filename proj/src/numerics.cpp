#include "fermigas/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace fermigas {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae; odd indices are the embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

double checked(const ScalarFunction& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg << "integrand is not finite at x = " << x;
    throw NumericalError(msg.str());
  }
  return y;
}

Segment kronrod15(const ScalarFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  double res_abs = std::abs(res_k);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked(f, center - dx);
    f2[j] = checked(f, center + dx);
    const double sum = f1[j] + f2[j];
    res_k += kWgk[j] * sum;
    res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double scale = std::abs(half);
  res_abs *= scale;
  res_asc *= scale;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * res_abs, err);
  return {a, b, res_k * half, err};
}

std::vector<double> interval_edges(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> edges{a};
  std::vector<double> inner;
  for (double p : breakpoints)
    if (p > a && p < b) inner.push_back(p);
  std::sort(inner.begin(), inner.end());
  for (double p : inner)
    if (p - edges.back() > 8.0 * kEps * std::max(std::abs(p), 1.0)) edges.push_back(p);
  if (b - edges.back() <= 8.0 * kEps * std::max(std::abs(b), 1.0) && edges.size() > 1) edges.pop_back();
  edges.push_back(b);
  return edges;
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs >= 0.0) || !(rel >= 0.0) || !(abs + rel > 0.0))
    throw ConfigError("tolerance requires abs >= 0, rel >= 0 and abs + rel > 0");
  if (max_refinements < 1) throw ConfigError("tolerance requires max_refinements >= 1");
}

double Tolerance::target(double estimate) const { return std::max(abs, rel * std::abs(estimate)); }

double Tail::operator()(double r) const {
  if (kind == TailKind::Zero) return 0.0;
  return coefficient * std::pow(r, exponent);
}

RadialProfile::RadialProfile(std::vector<double> nodes, std::vector<double> values, Tail tail)
    : nodes_(std::move(nodes)), values_(std::move(values)), tail_(tail) {
  if (nodes_.size() != values_.size()) throw ConfigError("radial profile: nodes and values differ in length");
  if (nodes_.size() < kMinNodes) throw ConfigError("radial profile needs at least 16 nodes");
  if (!(nodes_.front() >= 0.0)) throw ConfigError("radial profile nodes must be nonnegative");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    if (!(nodes_[i + 1] > nodes_[i])) throw ConfigError("radial profile nodes must be strictly increasing");
  for (double v : values_)
    if (!std::isfinite(v)) throw ConfigError("radial profile values must be finite");
  if (tail_.kind == TailKind::Power && !(std::isfinite(tail_.coefficient) && std::isfinite(tail_.exponent)))
    throw ConfigError("radial profile tail must be finite");

  const std::size_t n = nodes_.size();
  std::vector<double> h(n - 1);
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = nodes_[i + 1] - nodes_[i];
    d[i] = (values_[i + 1] - values_[i]) / h[i];
  }
  slopes_.assign(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] * d[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slopes_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return s;
  };
  slopes_[0] = edge(h[0], h[1], d[0], d[1]);
  slopes_[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

double RadialProfile::operator()(double r) const {
  if (r <= nodes_.front()) return values_.front();
  if (r > nodes_.back()) return tail_(r);
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - nodes_.begin()) - 1, nodes_.size() - 2);
  const double h = nodes_[i + 1] - nodes_[i];
  const double t = (r - nodes_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * values_[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
         (-2 * t3 + 3 * t2) * values_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
}

QuadratureResult integrate(const ScalarFunction& f, double a, double b, const Tolerance& tol,
                           std::span<const double> breakpoints) {
  tol.validate();
  if (!(std::isfinite(a) && std::isfinite(b))) throw ConfigError("integration limits must be finite");
  if (a == b) return {};
  if (b < a) {
    auto r = integrate(f, b, a, tol, breakpoints);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  const auto edges = interval_edges(a, b, breakpoints);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const Segment s = kronrod15(f, edges[i], edges[i + 1]);
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }

  std::vector<Segment> frozen;
  double previous = total;
  int splits = 0;
  while (total_err > tol.target(total)) {
    if (heap.empty()) break;
    if (splits >= tol.max_refinements) {
      std::ostringstream msg;
      msg << "quadrature did not converge after " << splits << " refinements on [" << a << ", " << b
          << "]: last estimate " << total << ", previous " << previous << ", error " << total_err;
      throw RefinementError(msg.str(), total, previous);
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a <= 16.0 * kEps * std::max({std::abs(worst.a), std::abs(worst.b), 1e-300})) {
      frozen.push_back(worst);
      continue;
    }
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    previous = total;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  if (heap.empty() && total_err > tol.target(total))
    throw RefinementError("quadrature reached machine resolution without meeting the tolerance", total, previous);

  // Re-sum to avoid drift from the incremental updates.
  QuadratureResult result;
  result.subdivisions = splits;
  std::vector<Segment> all;
  all.reserve(heap.size() + frozen.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  all.insert(all.end(), frozen.begin(), frozen.end());
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : all) {
    result.value += s.value;
    result.error += s.error;
  }
  return result;
}

double integrate_radial(const ScalarFunction& f, double r_max, const Tolerance& tol,
                        std::span<const double> breakpoints) {
  if (!(r_max > 0.0)) throw ConfigError("integrate_radial requires r_max > 0");
  const ScalarFunction shell = [&f](double r) { return f(r) * 4.0 * kPi * r * r; };
  return integrate(shell, 0.0, r_max, tol, breakpoints).value;
}

std::vector<double> sign_changes(const ScalarFunction& g, double a, double b, int samples) {
  if (samples < 1) throw ConfigError("sign scan needs at least one sample interval");
  std::vector<double> roots;
  const double step = (b - a) / samples;
  double x_prev = a;
  double g_prev = g(a);
  if (g_prev == 0.0) roots.push_back(a);
  for (int i = 1; i <= samples; ++i) {
    const double x = (i == samples) ? b : a + i * step;
    const double gx = g(x);
    if (gx == 0.0) {
      roots.push_back(x);
    } else if (g_prev != 0.0 && ((g_prev < 0.0) != (gx < 0.0))) {
      double lo = x_prev;
      double hi = x;
      double g_lo = g_prev;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm < 0.0) == (g_lo < 0.0)) {
          lo = mid;
          g_lo = gm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x_prev = x;
    g_prev = gx;
  }
  return roots;
}

double integrate_box(const Field& f, const Vec3& lo, const Vec3& hi, const Tolerance& tol,
                     const Field& kink) {
  tol.validate();
  Tolerance inner = tol;
  inner.abs = tol.abs * 1e-2;
  inner.rel = tol.rel * 1e-1;
  const ScalarFunction over_x = [&](double x) {
    const ScalarFunction over_y = [&](double y) {
      const ScalarFunction over_z = [&](double z) { return f({x, y, z}); };
      std::vector<double> breaks;
      if (kink) breaks = sign_changes([&](double z) { return kink({x, y, z}); }, lo[2], hi[2], 24);
      return integrate(over_z, lo[2], hi[2], inner, breaks).value;
    };
    return integrate(over_y, lo[1], hi[1], inner).value;
  };
  return integrate(over_x, lo[0], hi[0], tol).value;
}

RootResult find_root_monotone(const ScalarFunction& g, double lo, double hi, const Tolerance& tol) {
  tol.validate();
  if (!(lo <= hi)) throw BracketError("root bracket requires lo <= hi");
  std::vector<std::pair<double, double>> seen;
  auto eval = [&](double x) {
    const double y = g(x);
    if (!std::isfinite(y)) {
      std::ostringstream msg;
      msg << "root function is not finite at x = " << x;
      throw NumericalError(msg.str());
    }
    seen.emplace_back(x, y);
    return y;
  };

  double a = lo;
  double b = hi;
  double fa = eval(a);
  double fb = eval(b);
  RootResult out;
  auto finish = [&](double x, double gx) {
    out.x = x;
    out.residual = gx;
    out.bracket_lo = a;
    out.bracket_hi = b;
    out.evaluations = static_cast<int>(seen.size());
    std::sort(seen.begin(), seen.end());
    bool up = false;
    bool down = false;
    for (std::size_t i = 0; i + 1 < seen.size(); ++i) {
      const double diff = seen[i + 1].second - seen[i].second;
      if (diff > tol.abs) up = true;
      if (diff < -tol.abs) down = true;
    }
    out.monotonicity_warning = up && down;
    return out;
  };
  if (fa == 0.0) return finish(a, fa);
  if (fb == 0.0) return finish(b, fb);
  if ((fa < 0.0) == (fb < 0.0)) {
    std::ostringstream msg;
    msg << "invalid bracket [" << lo << ", " << hi << "]: g has the same sign at both ends (" << fa << ", "
        << fb << ")";
    throw BracketError(msg.str());
  }

  // Illinois weights act on copies; fa/fb keep the true values for the certificate.
  double wa = fa;
  double wb = fb;
  int side = 0;
  int slow_steps = 0;
  double x = a;
  double fx = fa;
  for (int it = 0; it < tol.max_refinements; ++it) {
    const double width = b - a;
    if (slow_steps >= 2) {
      x = 0.5 * (a + b);
      slow_steps = 0;
    } else {
      x = (a * wb - b * wa) / (wb - wa);
      if (!(x > a && x < b)) x = 0.5 * (a + b);
    }
    fx = eval(x);
    if (fx == 0.0 || std::abs(fx) <= tol.abs) {
      return finish(x, fx);
    }
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
      wa = fx;
      if (side == -1) wb *= 0.5;
      side = -1;
    } else {
      b = x;
      fb = fx;
      wb = fx;
      if (side == +1) wa *= 0.5;
      side = +1;
    }
    slow_steps = (b - a > 0.5 * width) ? slow_steps + 1 : 0;
    const double scale = std::max(std::abs(a), std::abs(b));
    if (b - a <= std::max(tol.rel * scale, 4.0 * kEps * scale) || b - a <= std::numeric_limits<double>::min()) {
      return std::abs(fa) <= std::abs(fb) ? finish(a, fa) : finish(b, fb);
    }
  }
  std::ostringstream msg;
  msg << "root finding exhausted " << tol.max_refinements << " iterations; bracket [" << a << ", " << b << "]";
  throw ConvergenceError(msg.str(), {fa, fb});
}

double lp_distance(const RadialProfile& f, const RadialProfile& g, double p, const Tolerance& tol) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("lp_distance requires finite p >= 1");
  const bool compatible = (f.tail() == g.tail()) ||
                          (f.tail().kind == TailKind::Zero && g.tail().kind == TailKind::Zero);
  if (!compatible) throw DomainError("lp_distance: profiles have incompatible extrapolation rules (domain mismatch)");
  const double r_max = std::max(f.last_node(), g.last_node());
  std::vector<double> breaks(f.nodes().begin(), f.nodes().end());
  breaks.insert(breaks.end(), g.nodes().begin(), g.nodes().end());
  const ScalarFunction integrand = [&](double r) { return std::pow(std::abs(f(r) - g(r)), p); };
  const double value = integrate_radial(integrand, r_max, tol, breaks);
  return std::pow(std::max(value, 0.0), 1.0 / p);
}

double lp_distance(const Field& f, const Field& g, double p, const Vec3& lo, const Vec3& hi,
                   const Tolerance& tol) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("lp_distance requires finite p >= 1");
  const Field integrand = [&](const Vec3& x) { return std::pow(std::abs(f(x) - g(x)), p); };
  return std::pow(std::max(integrate_box(integrand, lo, hi, tol), 0.0), 1.0 / p);
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("Gauss-Legendre rule needs n >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double fit_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs two or more paired samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("slope fit needs positive samples");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw DomainError("slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace fermigas
