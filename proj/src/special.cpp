#include "fracwave/special.hpp"

#include <algorithm>
#include <cmath>

#include "fracwave/quadrature.hpp"

namespace fracwave::special {

namespace {

struct IntegralPass {
  double value = 0.0;
  double wright_bound = 0.0;  // accumulated |w_i| * series error bounds
};

// int_0^S Phi(-beta, delta, -z cosh s) sinh(s)^{mu-1} ds on a graded mesh.
IntegralPass cosh_pass(const detail::PhiFn& phi, double mu, double z, double Smax, int cells,
                       const FFamilyConfig& cfg) {
  IntegralPass out;
  double q = std::clamp(2.0 / mu, 1.0, 12.0);
  Eigen::VectorXd mesh = quad::graded_mesh(0.0, Smax, cells, q);
  const quad::GaussLegendre& gl = quad::gauss_legendre(cfg.gl_order);

  double bnd = 0.0;
  auto smooth_part = [&](double s) {  // (sinh s / s)^{mu-1} * Phi, bounded at 0
    double ratio = s > 1e-8 ? std::sinh(s) / s : 1.0 + s * s / 6.0;
    EvalResult w = phi(z * std::cosh(s));
    bnd = w.abs_error_bound;
    return std::pow(ratio, mu - 1.0) * w.value;
  };

  // Cells with a large endpoint ratio integrate the s^{mu-1} weight exactly
  // against a quadratic (a graded mesh's early cells, where plain Gauss
  // degrades on that weight); mild cells use Gauss on the raw integrand.
  for (int j = 0; j + 1 < mesh.size(); ++j) {
    double a = mesh[j], b = mesh[j + 1];
    if (a == 0.0 || b / a > 1.5) {
      double ga = smooth_part(a);
      double ba = bnd;
      double gm = smooth_part(0.5 * (a + b));
      double gb = smooth_part(b);
      out.value += quad::power_quadratic_cell(ga, gm, gb, a, b, mu);
      double meas = (std::pow(b, mu) - std::pow(a, mu)) / mu;
      out.wright_bound += std::max({ba, bnd}) * meas;
    } else {
      double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      double acc = 0.0;
      for (int i = 0; i < gl.nodes.size(); ++i) {
        double s = mid + half * gl.nodes[i];
        EvalResult w = phi(z * std::cosh(s));
        double f = w.value * std::pow(std::sinh(s), mu - 1.0);
        acc += gl.weights[i] * f;
        out.wright_bound += std::fabs(gl.weights[i]) * half * w.abs_error_bound *
                            std::pow(std::sinh(s), mu - 1.0);
      }
      out.value += acc * half;
    }
  }
  return out;
}

}  // namespace

namespace detail {

std::vector<EvenMuTerm> even_mu_terms(int mu, double delta, double beta) {
  switch (mu) {
    case 2:
      return {{2.0, 1, delta + beta}};
    case 4:
      return {{4.0, 3, delta + 3.0 * beta}, {4.0, 2, delta + 2.0 * beta}};
    case 6:
      return {{24.0, 5, delta + 5.0 * beta},
              {24.0, 4, delta + 4.0 * beta},
              {8.0, 3, delta + 3.0 * beta}};
    default:
      throw DomainError("even_mu_terms: mu must be 2, 4 or 6");
  }
}

EvalResult f_family_integral(const PhiFn& phi, double beta, double mu, double z, double z_cut,
                             const FFamilyConfig& cfg) {
  double Smax = std::acosh(std::max(z_cut / z, 1.0 + 1e-8));
  double pref = 2.0 * to_double(rgamma_ddx(dd(mu) / dd(2.0)));

  int cells = cfg.base_cells;
  IntegralPass coarse = cosh_pass(phi, mu, z, Smax, cells, cfg);
  IntegralPass fine = cosh_pass(phi, mu, z, Smax, 2 * cells, cfg);
  double err = std::fabs(fine.value - coarse.value);
  // refinement cannot do better than the series' own noise floor
  auto goal = [&] {
    return std::max({cfg.tol, cfg.tol * std::fabs(fine.value), 0.5 * fine.wright_bound});
  };
  for (int d = 1; d < cfg.max_doublings && err > goal(); ++d) {
    cells *= 2;
    coarse = fine;
    fine = cosh_pass(phi, mu, z, Smax, 2 * cells, cfg);
    err = std::fabs(fine.value - coarse.value);
  }
  if (err > 64.0 * std::max(cfg.tol, cfg.tol * std::fabs(fine.value)) &&
      err > 8.0 * fine.wright_bound)
    throw NonConvergence("f_family: quadrature refinement stalled");

  // tail past Smax, bounded by the last integrand value over its log-slope
  double tail = 0.0;
  {
    double s1 = Smax * 0.95, s2 = Smax * (1.0 - 1e-9);
    auto g = [&](double s) {
      return std::fabs(phi(z * std::cosh(s)).value) *
             std::pow(std::sinh(std::max(s, 1e-30)), mu - 1.0);
    };
    double g1 = g(s1), g2 = g(s2);
    if (g2 > 0.0 && g1 > g2) {
      double slope = std::log(g1 / g2) / (s2 - s1);
      tail = g2 / std::max(slope, 1e-2);
    } else {
      tail = g2 * std::max(1.0, Smax);
    }
  }

  double bound = pref * (err + tail + fine.wright_bound) + 1e-318;
  return {pref * fine.value, std::fabs(bound), 0};
}

}  // namespace detail

EvalResult f_family(const FFamilyParams& p, double z, const FFamilyConfig& cfg) {
  if (!(p.mu >= 0.0)) throw DomainError("f_family: mu must be >= 0");
  if (p.mu == 0.0) {
    if (z < 0.0) throw DomainError("f_family: z must be >= 0 when mu = 0");
    return wright_phi({p.beta, p.delta}, -z, cfg.wright);
  }
  if (z <= 0.0) throw DomainError("f_family: z must be > 0 when mu > 0");

  double z_cut = series_radius_for(p.beta, p.delta, cfg.wright.max_term_ln) * 0.999;
  z_cut = std::min(z_cut, cfg.wright.z_radius_cap);
  if (z > z_cut) throw NonConvergence("f_family: z beyond the series stability radius");

  WrightSeries S(p.beta, p.delta, cfg.wright, z_cut);
  detail::PhiFn phi = [&S](double w) { return S.eval(-w); };
  return detail::f_family_integral(phi, p.beta, p.mu, z, z_cut, cfg);
}

EvalResult f_family_dz(const FFamilyParams& p, double z, const FFamilyConfig& cfg) {
  if (z == 0.0) return {0.0, 0.0, 0};  // zero prefactor convention
  EvalResult inner = f_family({p.mu + 2.0, p.delta - 2.0 * p.beta, p.beta}, z, cfg);
  return {-0.5 * z * inner.value, 0.5 * std::fabs(z) * inner.abs_error_bound, inner.terms_used};
}

}  // namespace fracwave::special
