#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracwave/wright.hpp"
#include "mpfr_oracle.hpp"

using namespace fracwave;
using namespace fracwave::special;
using fracwave::testing::MP;
using fracwave::testing::wright_mp;

namespace {
double gauss_profile(double z) { return std::exp(-z * z / 4.0) / std::sqrt(M_PI); }
}

TEST_CASE("wright series trivial values") {
  // only the m = 0 term survives at z = 0
  EvalResult r = wright_phi({0.75, 0.25}, 0.0);
  CHECK(r.value == doctest::Approx(fracwave::testing::mp_rgamma(0.25)).epsilon(1e-15));

  // classical identity: Phi(-1/2, 1/2, -z) = exp(-z^2/4)/sqrt(pi)
  EvalResult g = wright_phi({0.5, 0.5}, -2.0);
  CHECK(g.value == doctest::Approx(std::exp(-1.0) / std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("wright series against 200-term extended-precision summation") {
  EvalResult r = wright_phi({0.75, -0.5}, -1.3);
  double want = wright_mp(0.75, -0.5, -1.3, 200).get();
  CHECK(r.value == doctest::Approx(want).epsilon(1e-13));
  CHECK(std::fabs(r.value - want) <= 10.0 * r.abs_error_bound);
}

TEST_CASE("gaussian special case to 1e-10 across [0, 10]") {
  for (double z = 0.0; z <= 10.0; z += 0.125) {
    EvalResult r = wright_phi({0.5, 0.5}, -z);
    CHECK(std::fabs(r.value - gauss_profile(z)) < 1e-10);
  }
}

TEST_CASE("derivative by parameter shift") {
  EvalResult a = wright_phi_dz({0.5, 1.0}, 0.0);
  CHECK(a.value == doctest::Approx(fracwave::testing::mp_rgamma(0.5)).epsilon(1e-15));

  // centred finite difference of the series itself
  double h = 1e-5, z = -0.7;
  EvalResult d = wright_phi_dz({0.75, 0.25}, z);
  double fd = (wright_phi({0.75, 0.25}, z + h).value - wright_phi({0.75, 0.25}, z - h).value) / (2 * h);
  CHECK(d.value == doctest::Approx(fd).epsilon(1e-8));

  // derivative of the Gaussian closed form at z = -1
  EvalResult gd = wright_phi_dz({0.5, 0.5}, -1.0);
  // d/dz Phi(-1/2,1/2,z) at z=-1 equals d/dw [e^{-w^2/4}/sqrt(pi)] / dw with w = -z = 1,
  // i.e. -(d/dw) value = +(1/2) e^{-1/4}/sqrt(pi) ... sign: Phi(z) = gauss(-z),
  // Phi'(z) = -gauss'(-z) = (1/2)(-z) gauss(-z) |_{z=-1} = (1/2) gauss(1).
  CHECK(gd.value == doctest::Approx(0.5 * gauss_profile(1.0)).epsilon(1e-12));
}

TEST_CASE("error bound honesty: 1000 draws against the mpfr oracle") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> ub(0.52, 0.92), ud(-1.0, 2.0), uu(0.05, 1.0);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    double beta = ub(rng), delta = ud(rng);
    double zmax = std::min(series_radius(beta, 44.0), 12.0);
    double z = -uu(rng) * zmax;
    EvalResult r = wright_phi({beta, delta}, z);
    int terms = std::max(400, 3 * r.terms_used);
    double want = wright_mp(beta, delta, z, terms).get();
    CHECK(std::fabs(r.value - want) <= 10.0 * r.abs_error_bound);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("stability radius is enforced") {
  CHECK_THROWS_AS(wright_phi({0.5, 0.5}, -40.0), NonConvergence);
  CHECK_THROWS_AS(wright_phi({0.875, 1.0}, -8.0), NonConvergence);
  CHECK_THROWS_AS(wright_phi({1.2, 0.5}, -1.0), DomainError);
}

TEST_CASE("radius helpers are mutually consistent") {
  for (double beta : {0.55, 0.625, 0.75, 0.875}) {
    double z = series_radius(beta, 40.0);
    CHECK(series_peak_ln(beta, z) == doctest::Approx(40.0).epsilon(1e-10));
  }
}
