#include "fracwave/quadrature.hpp"

#include <map>
#include <mutex>

namespace fracwave::quad {

namespace {

GaussLegendre compute_gl(int n) {
  GaussLegendre g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev-like initial guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    g.nodes[n - 1 - i] = x;
    g.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return g;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
  return it->second;
}

Eigen::VectorXd graded_mesh(double a, double b, int n, double q) {
  Eigen::VectorXd m(n + 1);
  for (int j = 0; j <= n; ++j) m[j] = a + (b - a) * std::pow(double(j) / n, q);
  m[n] = b;
  return m;
}

Eigen::VectorXd double_graded_mesh(double a, double b, int n_half, double q_left, double q_right) {
  double mid = 0.5 * (a + b);
  Eigen::VectorXd left = graded_mesh(a, mid, n_half, q_left);
  Eigen::VectorXd right = graded_mesh(b, mid, n_half, q_right);  // descending from b
  Eigen::VectorXd m(2 * n_half + 1);
  m.head(n_half + 1) = left;
  for (int j = 1; j <= n_half; ++j) m[n_half + j] = right[n_half - j];
  return m;
}

double linear_power_cell(double ga, double gb, double a, double b, double t, double sigma) {
  double delta = b - a;
  if (!(delta > 0.0)) return 0.0;
  double u1 = t - b;  // distance from the cell's near edge to the singularity

  // Narrow cell far from the singularity: the weight is analytic across it
  // and fixed Gauss hits machine precision, avoiding the cancellation that
  // plagues the moment route when delta << u1.
  if (u1 > 0.0 && delta < 0.1 * u1) {
    const GaussLegendre& g6 = gauss_legendre(6);
    double mid = 0.5 * (a + b), half = 0.5 * delta, s = 0.0;
    for (int i = 0; i < 6; ++i) {
      double tau = mid + half * g6.nodes[i];
      double g = ga + (gb - ga) * ((tau - a) / delta);
      s += g6.weights[i] * g * std::pow(t - tau, sigma - 1.0);
    }
    return s * half;
  }

  // wide or singularity-adjacent cell: exact moments with stabilized powers
  double u2 = t - a;
  double m0, m1;
  if (u1 <= 0.0) {
    m0 = std::pow(u2, sigma) / sigma;
    m1 = std::pow(u2, sigma + 1.0) / (sigma + 1.0);
  } else {
    double r = delta / u1;
    m0 = std::pow(u1, sigma) * std::expm1(sigma * std::log1p(r)) / sigma;
    m1 = std::pow(u1, sigma + 1.0) * std::expm1((sigma + 1.0) * std::log1p(r)) / (sigma + 1.0);
  }
  double B = (gb - ga) / delta;
  double C = ga + B * (t - a);  // g linearly extrapolated to tau = t
  return C * m0 - B * m1;
}

double quadratic_power_cell(double g0, double gm, double g1, double h, double sigma) {
  // q(s) = c0 + c1 s + c2 s^2 through (0,g0), (h/2,gm), (h,g1)
  double c0 = g0;
  double c2 = 2.0 * (g1 - 2.0 * gm + g0) / (h * h);
  double c1 = (g1 - g0) / h - c2 * h;
  double hs = std::pow(h, sigma);
  return c0 * hs / sigma + c1 * hs * h / (sigma + 1.0) + c2 * hs * h * h / (sigma + 2.0);
}

double power_quadratic_cell(double ga, double gm, double gb, double a, double b, double sigma) {
  double h = b - a, mid = 0.5 * (a + b);
  // quadratic in (s - a): q = c0 + c1 (s-a) + c2 (s-a)^2
  double c2 = 2.0 * (gb - 2.0 * gm + ga) / (h * h);
  double c1 = (gb - ga) / h - c2 * h;
  double c0 = ga;
  (void)mid;
  // rewrite in s: q = d0 + d1 s + d2 s^2
  double d2 = c2;
  double d1 = c1 - 2.0 * c2 * a;
  double d0 = c0 - c1 * a + c2 * a * a;
  auto p = [](double u, double s) { return u > 0.0 ? std::pow(u, s) : 0.0; };
  double m0 = (p(b, sigma) - p(a, sigma)) / sigma;
  double m1 = (p(b, sigma + 1) - p(a, sigma + 1)) / (sigma + 1.0);
  double m2 = (p(b, sigma + 2) - p(a, sigma + 2)) / (sigma + 2.0);
  return d0 * m0 + d1 * m1 + d2 * m2;
}

}  // namespace fracwave::quad
