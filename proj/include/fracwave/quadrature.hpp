#pragma once
#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "fracwave/errors.hpp"

namespace fracwave::quad {

struct GaussLegendre {
  Eigen::VectorXd nodes;    // on (-1, 1), ascending
  Eigen::VectorXd weights;  // sum to 2
};

// cached rule of the given order; the cache is append-only and locked
const GaussLegendre& gauss_legendre(int n);

template <class F>
double gl_cell(const F& f, double a, double b, const GaussLegendre& g) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + half * g.nodes[i]);
  return s * half;
}

// nodes clustered toward `a`:  a + (b-a) * (j/n)^q
Eigen::VectorXd graded_mesh(double a, double b, int n, double q);

// nodes clustered toward both ends (split at the midpoint)
Eigen::VectorXd double_graded_mesh(double a, double b, int n_half, double q_left, double q_right);

template <class F>
double composite(const F& f, const Eigen::VectorXd& mesh, int order = 8) {
  const GaussLegendre& g = gauss_legendre(order);
  double s = 0.0;
  for (int j = 0; j + 1 < mesh.size(); ++j) s += gl_cell(f, mesh[j], mesh[j + 1], g);
  return s;
}

// Split-and-compare adaptive Gauss-Legendre.  Deterministic; throws
// QuadratureFailure when the local error cannot be driven below tolerance.
template <class F>
double adaptive(const F& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                int max_depth = 48, int order = 12) {
  const GaussLegendre& g = gauss_legendre(order);
  struct Rec {
    const F& f;
    const GaussLegendre& g;
    double abs_tol, rel_tol;
    int max_depth;
    double scale = 0.0;
    double run(double lo, double hi, double whole, int depth) {
      double mid = 0.5 * (lo + hi);
      double left = gl_cell(f, lo, mid, g), right = gl_cell(f, mid, hi, g);
      double err = std::fabs(left + right - whole);
      double tol = std::max(abs_tol, rel_tol * scale);
      if (err < tol || depth >= max_depth) {
        if (err >= tol && err > 64 * tol)
          throw QuadratureFailure("adaptive quadrature stalled at depth limit");
        return left + right;
      }
      return run(lo, mid, left, depth + 1) + run(mid, hi, right, depth + 1);
    }
  } rec{f, g, abs_tol, rel_tol, max_depth};
  double whole = gl_cell(f, a, b, g);
  rec.scale = std::fabs(whole);
  return rec.run(a, b, whole, 0);
}

// Exact moments of the weight u^{sigma-1} over [u1, u2], 0 <= u1 < u2:
//   M0 = int u^{sigma-1} du,  M1 = int u^sigma du.
struct PowerMoments {
  double m0, m1;
};
inline PowerMoments power_moments(double sigma, double u1, double u2) {
  auto p = [](double u, double s) { return u > 0.0 ? std::pow(u, s) : 0.0; };
  return {(p(u2, sigma) - p(u1, sigma)) / sigma, (p(u2, sigma + 1.0) - p(u1, sigma + 1.0)) / (sigma + 1.0)};
}

// int_a^b g(tau) (t - tau)^{sigma-1} dtau with g linear on [a,b] through
// (a, ga), (b, gb); requires a <= b <= t.
double linear_power_cell(double ga, double gb, double a, double b, double t, double sigma);

// int_0^h s^{sigma-1} q(s) ds where q is the quadratic through
// (0,g0), (h/2,gm), (h,g1).  Used for the first cell of integrands with an
// endpoint power singularity.
double quadratic_power_cell(double g0, double gm, double g1, double h, double sigma);

// int_a^b s^{sigma-1} q(s) ds with q the quadratic through the endpoints and
// midpoint of [a, b]; exact power moments, so it stays accurate on the large
// cell ratios a strongly graded mesh produces near its singular end.
double power_quadratic_cell(double ga, double gm, double gb, double a, double b, double sigma);

}  // namespace fracwave::quad
