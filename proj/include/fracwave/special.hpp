#pragma once
#include <functional>
#include <vector>

#include "fracwave/wright.hpp"

namespace fracwave::special {

// f(z; mu, delta) family with alpha = 2 beta:
//   mu = 0 : Phi(-beta, delta, -z)
//   mu > 0 : (2/Gamma(mu/2)) int_1^inf Phi(-beta, delta, -z t) (t^2-1)^{mu/2-1} dt
struct FFamilyParams {
  double mu;
  double delta;
  double beta;
};

struct FFamilyConfig {
  WrightConfig wright;
  double tol = 1e-10;  // refinement target for the integral (abs and rel)
  int base_cells = 20;
  int gl_order = 8;
  int max_doublings = 5;
};

EvalResult f_family(const FFamilyParams& p, double z, const FFamilyConfig& cfg = {});

// d/dz f(z; mu, delta) = -(z/2) f(z; mu+2, delta - 2 beta).
// At z == 0 the zero prefactor short-circuits the evaluation.
EvalResult f_family_dz(const FFamilyParams& p, double z, const FFamilyConfig& cfg = {});

namespace detail {

// Closed Wright-combination form of f(z; mu, delta) for even mu:
//   f(z; mu, delta) = sum_j coef_j z^{-zpow_j} Phi(-beta, delta_j, -z).
// Obtained by iterating the derivative identity down to the mu = 0 case.
struct EvenMuTerm {
  double coef;
  int zpow;
  double delta;
};
std::vector<EvenMuTerm> even_mu_terms(int mu, double delta, double beta);

// Integral route with a caller-supplied evaluator of w -> Phi(-beta, delta, -w)
// (a cached interpolant in the hot paths); arguments stay within w <= z_cut.
using PhiFn = std::function<EvalResult(double)>;
EvalResult f_family_integral(const PhiFn& phi, double beta, double mu, double z, double z_cut,
                             const FFamilyConfig& cfg);

}  // namespace detail

}  // namespace fracwave::special
