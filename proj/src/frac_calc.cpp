#include "fracwave/frac_calc.hpp"

#include <cmath>

#include "fracwave/dd.hpp"
#include "fracwave/quadrature.hpp"

namespace fracwave::fract {

void TimeSamples::validate() const {
  if (nodes.size() < 2 || nodes.size() != values.size())
    throw GridError("TimeSamples: need matching nodes/values with at least 2 entries");
  if (nodes[0] != 0.0) throw GridError("TimeSamples: nodes must start at 0");
  for (int i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1])) throw GridError("TimeSamples: nodes must increase strictly");
  if (derivative_values.size() != 0 && derivative_values.size() != nodes.size())
    throw GridError("TimeSamples: derivative_values length mismatch");
}

double TimeSamples::interp(double t) const {
  if (t < nodes[0] || t > nodes[nodes.size() - 1]) throw GridError("interp: t outside the grid");
  int lo = 0, hi = int(nodes.size()) - 1;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    (nodes[mid] <= t ? lo : hi) = mid;
  }
  double w = (t - nodes[lo]) / (nodes[lo + 1] - nodes[lo]);
  return (1.0 - w) * values[lo] + w * values[lo + 1];
}

namespace {

double rgamma_d(double x) { return to_double(rgamma_ddx(dd(x))); }

TimeSamples reflect(const TimeSamples& g) {
  TimeSamples r;
  int n = int(g.nodes.size());
  double T = g.nodes[n - 1];
  r.nodes.resize(n);
  r.values.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = T - g.nodes[n - 1 - i];
    r.values[i] = g.values[n - 1 - i];
  }
  return r;
}

double rl_integral_left(const TimeSamples& g, double mu, double t) {
  double sigma = -mu;
  if (t == 0.0) return 0.0;
  double acc = 0.0;
  for (int j = 0; j + 1 < g.nodes.size() && g.nodes[j] < t; ++j) {
    double a = g.nodes[j], b = std::min(g.nodes[j + 1], t);
    double ga = g.values[j];
    double w = (b - g.nodes[j]) / (g.nodes[j + 1] - g.nodes[j]);
    double gb = (1.0 - w) * g.values[j] + w * g.values[j + 1];
    acc += quad::linear_power_cell(ga, gb, a, b, t, sigma);
  }
  return acc * rgamma_d(sigma);
}

}  // namespace

double rl_integral(const TimeSamples& g, double mu, double t, Side side) {
  g.validate();
  if (!(mu < 0.0)) throw DomainError("rl_integral: order must be negative");
  double T = g.nodes[g.nodes.size() - 1];
  if (t < 0.0 || t > T * (1.0 + 1e-12)) throw GridError("rl_integral: t outside the sampled range");
  if (side == Side::left) return rl_integral_left(g, mu, std::min(t, T));
  // right-sided, base point T: sign(t-T) = -1 and the kernel is |t-tau|^{-mu-1}
  TimeSamples r = reflect(g);
  return -rl_integral_left(r, mu, T - t);
}

double rl_derivative(const TimeSamples& g, double beta, double t, Side side) {
  g.validate();
  if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("rl_derivative: order must lie in (0, 2]");
  int p = beta <= 1.0 ? 1 : 2;
  double T = g.nodes[g.nodes.size() - 1];

  // locate a bracketing interior node for the stencil spacing
  int j = 0;
  while (j + 1 < g.nodes.size() && g.nodes[j + 1] <= t) ++j;
  if (j < 1 || j + 1 >= g.nodes.size()) throw GridError("rl_derivative: t too close to the grid ends");
  double h = std::min(g.nodes[j + 1] - g.nodes[j], g.nodes[j] - g.nodes[j - 1]);
  if (t - p * h < 0.0 || t + p * h > T) throw GridError("rl_derivative: stencil leaves the grid");

  auto I = [&](double tau) {
    if (beta == double(p)) return side == Side::left ? g.interp(tau) : g.interp(tau);
    return rl_integral(g, beta - p, tau, side);
  };
  double sgn = side == Side::left ? 1.0 : -1.0;  // sign^p(t - s) with s at the far end
  if (p == 1) return sgn * (I(t + h) - I(t - h)) / (2.0 * h);

  // p = 2: 5-point stencil on locally uniform grids, 3-point otherwise
  bool uniform = true;
  for (int i = 1; i + 1 < g.nodes.size() && uniform; ++i)
    uniform = std::fabs((g.nodes[i + 1] - g.nodes[i]) - (g.nodes[1] - g.nodes[0])) <
              1e-10 * g.nodes[g.nodes.size() - 1];
  if (uniform && t - 2 * h >= 0.0 && t + 2 * h <= T) {
    return (-I(t + 2 * h) + 16.0 * I(t + h) - 30.0 * I(t) + 16.0 * I(t - h) - I(t - 2 * h)) /
           (12.0 * h * h);
  }
  return (I(t + h) - 2.0 * I(t) + I(t - h)) / (h * h);
}

double caputo_apply(const TimeSamples& u, double alpha, double t) {
  u.validate();
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("caputo_apply: order must lie in (1, 2)");
  if (!(t > 0.0)) throw DomainError("caputo_apply: t must be positive");
  int n = int(u.nodes.size());
  int before = 0;
  while (before < n && u.nodes[before] < t * (1.0 - 1e-14)) ++before;
  if (before < 3) throw GridError("caputo_apply: need at least 3 nodes before t");
  if (t > u.nodes[n - 1] * (1.0 + 1e-12)) throw GridError("caputo_apply: t outside the grid");

  // nodal curvature of the quadratic through neighbouring samples
  Eigen::VectorXd z(n);
  auto second = [&](int i0, int i1, int i2) {
    double a = u.nodes[i0], b = u.nodes[i1], c = u.nodes[i2];
    double fa = u.values[i0], fb = u.values[i1], fc = u.values[i2];
    return 2.0 * (fa / ((b - a) * (c - a)) - fb / ((b - a) * (c - b)) + fc / ((c - a) * (c - b)));
  };
  for (int i = 1; i + 1 < n; ++i) z[i] = second(i - 1, i, i + 1);
  z[0] = z[1];          // the initial cell inherits its neighbour's curvature
  z[n - 1] = z[n - 2];  // backward extension at the final node

  double sigma = 2.0 - alpha;
  double acc = 0.0;
  for (int j = 0; j + 1 < n && u.nodes[j] < t; ++j) {
    double a = u.nodes[j], b = std::min(u.nodes[j + 1], t);
    double w = (b - u.nodes[j]) / (u.nodes[j + 1] - u.nodes[j]);
    double zb = (1.0 - w) * z[j] + w * z[j + 1];
    acc += quad::linear_power_cell(z[j], zb, a, b, t, sigma);
  }
  return acc * to_double(rgamma_ddx(dd(sigma)));
}

}  // namespace fracwave::fract
