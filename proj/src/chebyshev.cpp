#include "fracwave/chebyshev.hpp"

#include <algorithm>
#include <cmath>

namespace fracwave {

namespace {

Eigen::VectorXd fit_segment(const std::function<double(double)>& f, double a, double b, int n) {
  // Chebyshev-Gauss nodes; coefficients by the discrete orthogonality relation
  Eigen::VectorXd fv(n), coef(n);
  std::vector<double> theta(n);
  for (int j = 0; j < n; ++j) {
    theta[j] = M_PI * (j + 0.5) / n;
    double x = std::cos(theta[j]);
    fv[j] = f(0.5 * (a + b) + 0.5 * (b - a) * x);
  }
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += fv[j] * std::cos(k * theta[j]);
    coef[k] = 2.0 * s / n;
  }
  coef[0] *= 0.5;
  return coef;
}

double clenshaw(const Eigen::VectorXd& c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = int(c.size()) - 1; k >= 1; --k) {
    double t = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = t;
  }
  return x * b1 - b2 + c[0];
}

}  // namespace

PiecewiseChebyshev::PiecewiseChebyshev(const std::function<double(double)>& f, double lo, double hi,
                                       int degree, double rel_tol, double abs_floor,
                                       int max_segments)
    : lo_(lo), hi_(hi) {
  if (!(0.0 < lo && lo < hi)) throw DomainError("PiecewiseChebyshev: need 0 < lo < hi");
  int n = degree + 1;

  // geometric base partition, two octaves per segment
  std::vector<std::pair<double, double>> work;
  double b = hi;
  while (b > lo * 1.0000001) {
    double a = std::max(lo, b / 4.0);
    work.push_back({a, b});
    b = a;
  }

  std::vector<Seg> done;
  while (!work.empty()) {
    auto [a, bb] = work.back();
    work.pop_back();
    Eigen::VectorXd coef = fit_segment(f, a, bb, n);
    double scale = coef.cwiseAbs().maxCoeff();
    double tol = std::max(rel_tol * scale, abs_floor);
    // tail of the expansion + midpoint probes
    double tail = 0.0;
    for (int k = n - 3; k < n; ++k) tail += std::fabs(coef[k]);
    double probe_err = 0.0;
    for (double frac : {0.19, 0.53, 0.86}) {
      double z = a + (bb - a) * frac;
      double x = 2.0 * (z - a) / (bb - a) - 1.0;
      probe_err = std::max(probe_err, std::fabs(clenshaw(coef, x) - f(z)));
    }
    double err = std::max(tail, probe_err);
    if (err > tol && int(done.size() + work.size()) < max_segments && bb - a > 1e-14 * bb) {
      double mid = std::sqrt(a * bb);  // geometric bisection
      work.push_back({a, mid});
      work.push_back({mid, bb});
    } else {
      fit_err_ = std::max(fit_err_, err);
      done.push_back({a, bb, std::move(coef)});
    }
  }
  std::sort(done.begin(), done.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
  segs_ = std::move(done);
}

double PiecewiseChebyshev::eval(double z) const {
  if (!covers(z)) throw DomainError("PiecewiseChebyshev: argument outside the fitted range");
  auto it = std::upper_bound(segs_.begin(), segs_.end(), z,
                             [](double v, const Seg& s) { return v < s.a; });
  const Seg& s = (it == segs_.begin()) ? *it : *(it - 1);
  double x = 2.0 * (z - s.a) / (s.b - s.a) - 1.0;
  return clenshaw(s.coef, std::clamp(x, -1.0, 1.0));
}

}  // namespace fracwave
