#include "fracwave/wright.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracwave::special {

namespace {

constexpr double kEpsDD = 1.2e-32;

void validate(double beta, double delta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("wright: beta must lie in (0,1)");
  if (!std::isfinite(delta)) throw DomainError("wright: delta must be finite");
}

// ln |1/Gamma(a)| in plain double precision
double ln_rgamma_abs(double a) {
  if (a > 0.5) return -std::lgamma(a);
  double s = std::fabs(std::sin(M_PI * a));
  if (s == 0.0) return -std::numeric_limits<double>::infinity();
  return std::lgamma(1.0 - a) + std::log(s / M_PI);
}

struct SeriesGauge {
  int terms;      // index after which terms sit >= 118 bits below the peak
  double max_ln;  // ln of the largest term magnitude
};

// Walk the term magnitudes in log space; mirrors the dd stop rule.
SeriesGauge gauge(double beta, double delta, double z_abs, int max_terms) {
  SeriesGauge g{max_terms, 0.0};
  if (z_abs <= 0.0) {
    g.terms = 8;
    g.max_ln = ln_rgamma_abs(delta);
    return g;
  }
  double lz = std::log(z_abs);
  double lnfact = 0.0, maxln = -1e300;
  int below = 0;
  for (int m = 0; m < max_terms; ++m) {
    if (m > 0) lnfact += std::log(double(m));
    double lr = ln_rgamma_abs(delta - beta * m);
    if (lr == -std::numeric_limits<double>::infinity()) continue;
    double lt = m * lz - lnfact + lr;
    maxln = std::max(maxln, lt);
    if (lt < maxln - 85.0) {
      if (++below >= 3) {
        g.terms = std::min(max_terms, m + 30);
        g.max_ln = maxln;
        return g;
      }
    } else {
      below = 0;
    }
  }
  g.max_ln = maxln;
  return g;
}

}  // namespace

double series_peak_ln(double beta, double z_abs) {
  if (z_abs <= 0.0) return 0.0;
  double ln_arg = std::log(z_abs) + beta * std::log(beta);
  return std::max(0.0, (1.0 - beta) * std::exp(ln_arg / (1.0 - beta)));
}

double series_radius(double beta, double ln_budget) {
  return std::pow(beta, -beta) * std::pow(ln_budget / (1.0 - beta), 1.0 - beta);
}

double series_max_ln(double beta, double delta, double z_abs) {
  return gauge(beta, delta, z_abs, 6000).max_ln;
}

double series_radius_for(double beta, double delta, double ln_budget) {
  double lo = 1e-3, hi = series_radius(beta, ln_budget) * 1.5 + 1.0;
  if (series_max_ln(beta, delta, lo) > ln_budget) return lo;
  for (int it = 0; it < 60; ++it) {
    double mid = std::sqrt(lo * hi);
    (series_max_ln(beta, delta, mid) > ln_budget ? hi : lo) = mid;
    if (hi / lo < 1.0 + 1e-9) break;
  }
  return lo;
}

WrightSeries::WrightSeries(double beta, double delta, const WrightConfig& cfg, double z_hint)
    : beta_(beta), delta_(delta), cfg_(cfg) {
  validate(beta, delta);
  z_reject_ = std::min(series_radius_for(beta, delta, cfg.max_term_ln), cfg.z_radius_cap);
  double zh = z_hint > 0.0 ? std::min(z_hint, z_reject_) : z_reject_;
  int n = gauge(beta, delta, zh, cfg.max_terms).terms;
  rg_.reserve(n);
  dd d(delta);
  for (int m = 0; m < n; ++m) {
    dd arg = d - two_prod(beta, double(m));
    rg_.push_back(rgamma_ddx(arg));
  }
}

EvalResult WrightSeries::eval(double z) const {
  if (!std::isfinite(z)) throw DomainError("wright: z must be finite");
  double za = std::fabs(z);
  if (za > z_reject_ * (1.0 + 1e-12))
    throw NonConvergence("wright: |z| beyond the series stability radius");

  if (z == 0.0) {
    double v = to_double(rg_[0]);
    return {v, std::fabs(v) * 4.0 * kEpsDD + 1e-320, 1};
  }

  ddx pw = normalize(dd(1.0), 0);  // z^m / m!
  dd sum(0.0);
  long long max_e = -1074;
  double last_nz = 0.0, ratio = 2.0;
  int small_run = 0;
  int m = 0;
  bool stopped = false;
  for (; m < int(rg_.size()); ++m) {
    ddx term = mul(pw, rg_[m]);
    double t_abs = 0.0;
    if (!term.zero()) {
      sum += to_dd(term);
      max_e = std::max(max_e, term.e);
      t_abs = std::fabs(to_double(term));
      if (last_nz > 0.0) ratio = t_abs / last_nz;
      last_nz = t_abs;
    }
    // driven to the compensated-arithmetic noise floor; stop_tol never binds later
    long long ne = std::clamp(max_e - 118, -1074LL, 1023LL);
    double noise = std::ldexp(1.0, int(ne));
    if (m > 2 && t_abs <= noise)
      ++small_run;
    else
      small_run = 0;
    if (small_run >= 3 && ratio < 0.9) {
      ++m;
      stopped = true;
      break;
    }
    pw = mul(pw, dd(z));
    pw = normalize(pw.m / dd(double(m + 1)), pw.e);
  }
  if (!stopped)
    throw NonConvergence("wright: truncation target not met within the term budget");

  double maxterm = std::ldexp(1.0, int(std::clamp(max_e + 1, -1074LL, 1023LL)));
  double remainder = (ratio < 0.9 && last_nz > 0.0) ? last_nz * ratio / (1.0 - ratio) : last_nz;
  double bound = remainder + maxterm * kEpsDD * 4.0 * double(m + 6) + 1e-320;
  return {sum.to_double(), bound, m};
}

EvalResult wright_phi(const WrightParams& p, double z, const WrightConfig& cfg) {
  validate(p.beta, p.delta);
  WrightSeries s(p.beta, p.delta, cfg, std::fabs(z));
  return s.eval(z);
}

EvalResult wright_phi_dz(const WrightParams& p, double z, const WrightConfig& cfg) {
  return wright_phi({p.beta, p.delta - p.beta}, z, cfg);
}

}  // namespace fracwave::special
