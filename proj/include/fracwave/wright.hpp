#pragma once
#include <vector>

#include "fracwave/dd.hpp"
#include "fracwave/errors.hpp"

namespace fracwave::special {

// Phi(-beta, delta, z) = sum_m z^m / (m! Gamma(delta - beta m))
struct WrightParams {
  double beta;
  double delta;
};

struct EvalResult {
  double value = 0.0;
  double abs_error_bound = 0.0;
  int terms_used = 0;
};

struct WrightConfig {
  double stop_tol = 1e-12;    // truncation stop: term below stop_tol * |partial sum|
  int max_terms = 2600;
  double max_term_ln = 46.0;  // conditioning budget: ln of the largest tolerated term
  double z_radius_cap = 30.0; // hard |z| cap independent of conditioning
};

// ln of the series' peak term magnitude ~ (1-beta) (beta^beta |z|)^{1/(1-beta)},
// ignoring the delta-dependent reciprocal-Gamma factor.  The sum itself is
// ~ exp(-peak) for z < 0, so the peak measures cancellation.
double series_peak_ln(double beta, double z_abs);

// largest |z| whose delta-free peak stays below ln_budget
double series_radius(double beta, double ln_budget);

// exact ln of the largest term magnitude, delta included (log-space walk)
double series_max_ln(double beta, double delta, double z_abs);

// largest |z| whose true term peak stays below ln_budget (bisection)
double series_radius_for(double beta, double delta, double ln_budget);

// Series evaluator with a precomputed reciprocal-Gamma progression for the
// arithmetic sequence delta - beta m.  Immutable after construction; safe for
// concurrent eval().
class WrightSeries {
 public:
  // z_hint > 0 sizes the progression for arguments up to |z| = z_hint;
  // negative means "cover the full stability radius".
  WrightSeries(double beta, double delta, const WrightConfig& cfg = {}, double z_hint = -1.0);

  EvalResult eval(double z) const;
  double beta() const { return beta_; }
  double delta() const { return delta_; }
  const WrightConfig& config() const { return cfg_; }

 private:
  double beta_, delta_;
  WrightConfig cfg_;
  double z_reject_;  // |z| beyond which the computed sum would be noise
  std::vector<ddx> rg_;
};

EvalResult wright_phi(const WrightParams& p, double z, const WrightConfig& cfg = {});

// d/dz Phi(-beta, delta, z) = Phi(-beta, delta - beta, z)
EvalResult wright_phi_dz(const WrightParams& p, double z, const WrightConfig& cfg = {});

}  // namespace fracwave::special
