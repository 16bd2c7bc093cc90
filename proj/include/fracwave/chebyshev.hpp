#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fracwave/errors.hpp"

namespace fracwave {

// Piecewise-Chebyshev fit on geometric subintervals of [lo, hi], subdividing
// until each segment meets max(rel_tol * local scale, abs_floor).  Intervals
// are split geometrically so power-law and logarithmic behaviour near zero
// stays smooth within each segment.  Immutable after construction.
class PiecewiseChebyshev {
 public:
  PiecewiseChebyshev(const std::function<double(double)>& f, double lo, double hi, int degree,
                     double rel_tol, double abs_floor, int max_segments = 4096);

  double eval(double z) const;
  bool covers(double z) const { return z >= lo_ && z <= hi_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double fitted_error() const { return fit_err_; }  // worst observed probe error
  int segments() const { return int(segs_.size()); }

 private:
  struct Seg {
    double a, b;
    Eigen::VectorXd coef;
  };
  std::vector<Seg> segs_;  // ascending in a
  double lo_, hi_;
  double fit_err_ = 0.0;
};

}  // namespace fracwave
