#pragma once
#include <Eigen/Dense>

#include "fracwave/errors.hpp"

namespace fracwave::fract {

// Sampled time trace on [0, T] with nodes[0] == 0, strictly increasing.
struct TimeSamples {
  Eigen::VectorXd nodes;
  Eigen::VectorXd values;
  Eigen::VectorXd derivative_values;  // optional; size 0 when absent

  void validate() const;
  double interp(double t) const;  // piecewise linear
};

enum class Side { left, right };

// Fractional integral of order -mu (mu < 0), base point 0:
//   (1/Gamma(-mu)) int_0^t g(tau) (t - tau)^{-mu-1} dtau
// with g replaced by its piecewise-linear interpolant and the power weight
// integrated exactly on each cell.  Side::right reflects the trace about the
// final node and applies the sign convention of the unified operator.
double rl_integral(const TimeSamples& g, double mu, double t, Side side = Side::left);

// Fractional derivative of order beta in (0, 2], base point 0:
// the outer integer derivative of the (beta - p)-integral is formed by
// centered differences on the local grid spacing (p = ceil(beta)).
double rl_derivative(const TimeSamples& g, double beta, double t, Side side = Side::left);

// Regularized fractional derivative of order alpha in (1, 2):
// product integration of (t-tau)^{1-alpha} against the piecewise-linear
// reconstruction of u'' (the curvature of the quadratic through neighbouring
// samples); the endpoint-derivative correction term cancels exactly in this
// form.
double caputo_apply(const TimeSamples& u, double alpha, double t);

}  // namespace fracwave::fract
