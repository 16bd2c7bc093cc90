#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "fracwave/frac_calc.hpp"
#include "fracwave/quadrature.hpp"
#include "fracwave/wright.hpp"

using namespace fracwave;
using namespace fracwave::fract;

namespace {

TimeSamples sample(const std::function<double(double)>& f, double T, int n, double grading = 1.0) {
  TimeSamples s;
  s.nodes = quad::graded_mesh(0.0, T, n, grading);
  s.values.resize(s.nodes.size());
  for (int i = 0; i < s.nodes.size(); ++i) s.values[i] = f(s.nodes[i]);
  return s;
}

double rgamma_d(double x) { return to_double(rgamma_ddx(dd(x))); }

}  // namespace

TEST_CASE("fractional integral basics") {
  auto one = sample([](double) { return 1.0; }, 3.0, 400);
  CHECK(rl_integral(one, -1.0, 2.0) == doctest::Approx(2.0).epsilon(1e-13));

  // power rule: I^nu tau^p = Gamma(p+1)/Gamma(p+1+nu) t^{p+nu}
  auto p2 = sample([](double t) { return t * t; }, 1.5, 3000);
  double want = 2.0 * rgamma_d(3.5) * std::pow(1.0, 2.5);
  CHECK(rl_integral(p2, -0.5, 1.0) == doctest::Approx(want).epsilon(5e-7));

  auto zero = sample([](double) { return 0.0; }, 1.0, 50);
  CHECK(rl_integral(zero, -0.7, 0.8) == 0.0);

  CHECK_THROWS_AS(rl_integral(one, -1.0, 5.0), GridError);
  CHECK_THROWS_AS(rl_integral(one, 0.5, 1.0), DomainError);
}

TEST_CASE("fractional derivative reduces to the classical one at integer order") {
  auto lin = sample([](double t) { return t; }, 2.0, 200);
  CHECK(rl_derivative(lin, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fractional derivative of a constant") {
  auto c = sample([](double) { return 3.0; }, 2.0, 2000);
  double t = 1.3;
  double want = 3.0 * std::pow(t, -0.5) * rgamma_d(0.5);
  CHECK(rl_derivative(c, 0.5, t) == doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("power-rule convergence order is at least 1.8") {
  // D^{1/2} tau = Gamma(2)/Gamma(1.5) t^{1/2}
  double t = 1.0;
  double want = rgamma_d(1.5) * std::sqrt(t);
  auto err = [&](int n) {
    auto g = sample([](double u) { return u; }, 2.0, n);
    return std::fabs(rl_derivative(g, 0.5, t) - want);
  };
  double e1 = err(500), e2 = err(1000);
  double order = std::log2(e1 / e2);
  CHECK(order >= 1.8);
}

TEST_CASE("shift identity for the kernel-generating profile") {
  // g(tau) = tau^{delta-1} Phi(-alpha/2, delta, -tau^{-alpha/2} z);
  // D^{alpha-1} g = tau^{delta-(alpha-1)-1} Phi(-alpha/2, delta-(alpha-1), -tau^{-alpha/2} z)
  double alpha = 1.5, z = 0.8, delta = 1.25, t = 0.6;
  double beta_w = alpha / 2.0, zeta = alpha - 1.0;
  special::WrightSeries S(beta_w, delta);
  special::WrightSeries Sshift(beta_w, delta - zeta);
  auto g = [&](double tau) {
    if (tau <= 0.0) return 0.0;
    double arg = std::pow(tau, -beta_w) * z;
    if (special::series_peak_ln(beta_w, arg) > 40.0) return 0.0;  // superexponentially small
    return std::pow(tau, delta - 1.0) * S.eval(-arg).value;
  };
  auto gs = sample(g, 0.75, 3000);
  double got = rl_derivative(gs, zeta, t);
  double want = std::pow(t, delta - zeta - 1.0) * Sshift.eval(-std::pow(t, -beta_w) * z).value;
  CHECK(got == doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("semigroup property of fractional integrals on smooth data") {
  auto g = sample([](double t) { return std::sin(t) + 0.3 * t; }, 1.0, 900);
  double mu1 = -0.4, mu2 = -0.8;
  // I^{mu2} (I^{mu1} g) vs I^{mu1+mu2} g at t = 0.9
  TimeSamples inner = g;
  for (int i = 0; i < g.nodes.size(); ++i)
    inner.values[i] = g.nodes[i] == 0.0 ? 0.0 : rl_integral(g, mu1, g.nodes[i]);
  double lhs = rl_integral(inner, mu2, 0.9);
  double rhs = rl_integral(g, mu1 + mu2, 0.9);
  CHECK(lhs == doctest::Approx(rhs).epsilon(2e-4));
}

TEST_CASE("regularized derivative annihilates affine data") {
  auto u = sample([](double t) { return 2.5 - 0.7 * t; }, 1.0, 64, 2.0);
  CHECK(std::fabs(caputo_apply(u, 1.5, 0.9)) < 1e-12);
}

TEST_CASE("regularized derivative power rules") {
  double alpha = 1.5;
  auto u2 = sample([](double t) { return t * t; }, 1.2, 512, 2.0);
  double want = 2.0 * rgamma_d(3.0 - alpha) * std::pow(1.0, 2.0 - alpha);
  CHECK(caputo_apply(u2, alpha, 1.0) == doctest::Approx(want).epsilon(1e-10));

  // the fractional primitive of 1: u = t^alpha / Gamma(alpha+1) -> 1
  double q = 2.0 / (alpha - 1.0);
  auto ua = sample([&](double t) { return std::pow(t, alpha) * rgamma_d(alpha + 1.0); }, 1.0, 512, q);
  CHECK(caputo_apply(ua, alpha, 0.7) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("regularized derivative is linear to machine precision") {
  auto u = sample([](double t) { return std::exp(t); }, 1.0, 128, 2.0);
  auto v = sample([](double t) { return std::cos(3.0 * t); }, 1.0, 128, 2.0);
  TimeSamples w = u;
  double a = 1.7, b = -0.6;
  for (int i = 0; i < u.nodes.size(); ++i) w.values[i] = a * u.values[i] + b * v.values[i];
  double lhs = caputo_apply(w, 1.3, 0.8);
  double rhs = a * caputo_apply(u, 1.3, 0.8) + b * caputo_apply(v, 1.3, 0.8);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("right-sided integral mirrors the left-sided one") {
  auto g = sample([](double t) { return t * (2.0 - t); }, 2.0, 800);
  // the trace is symmetric about t = 1, so |D_{T t}^{mu} g(T - s)| matches
  // |D_{0 t}^{mu} g(s)|
  double l = rl_integral(g, -0.6, 0.7, Side::left);
  double r = rl_integral(g, -0.6, 2.0 - 0.7, Side::right);
  CHECK(l == doctest::Approx(-r).epsilon(1e-10));
}
