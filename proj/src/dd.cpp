#include "fracwave/dd.hpp"

#include <array>
#include <cmath>

namespace fracwave {

namespace {

// atan(1/x) for integer x, Taylor in 1/x^2, all in dd
dd atan_inv(int x) {
  dd inv = dd(1.0) / dd(double(x));
  dd inv2 = inv * inv;
  // find the first term below dd resolution
  dd term = inv;
  dd sum(0.0);
  int sign = 1;
  for (int j = 0; j < 200; ++j) {
    dd t = term / double(2 * j + 1);
    sum = (sign > 0) ? sum + t : sum - t;
    sign = -sign;
    term = term * inv2;
    if (std::fabs(term.hi) < 1e-36 * std::fabs(sum.hi)) break;
  }
  return sum;
}

dd compute_pi() {
  // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
  return atan_inv(5) * 16.0 - atan_inv(239) * 4.0;
}

dd compute_ln2() {
  // ln 2 = sum_{k>=1} 1/(k 2^k); summed smallest-first
  dd sum(0.0);
  for (int k = 120; k >= 1; --k) {
    double den = double(k) * std::ldexp(1.0, k);  // exact: k has few bits
    sum += dd(1.0) / dd(den);
  }
  return sum;
}

}  // namespace

const dd& dd_pi() {
  static const dd v = compute_pi();
  return v;
}

const dd& dd_ln2() {
  static const dd v = compute_ln2();
  return v;
}

const dd& dd_half_ln2pi() {
  static const dd v = log_dd(dd_pi() * 2.0) * 0.5;
  return v;
}

dd exp_dd(const dd& x) {
  if (x.hi > 700.0) return dd(std::numeric_limits<double>::infinity());
  if (x.hi < -746.0) return dd(0.0);
  double k = std::nearbyint(x.hi / dd_ln2().hi);
  dd r = x - dd_ln2() * k;
  // Taylor on |r| <= ln2/2
  dd term(1.0), sum(1.0);
  for (int n = 1; n <= 30; ++n) {
    term = term * r / double(n);
    sum += term;
    if (std::fabs(term.hi) < 1e-35) break;
  }
  return ldexp_dd(sum, int(k));
}

dd log_dd(const dd& x) {
  dd y(std::log(x.hi));
  // Newton on exp(y) = x; two corrections from a double seed
  y = y + x * exp_dd(-y) - dd(1.0);
  y = y + x * exp_dd(-y) - dd(1.0);
  return y;
}

dd sinpi_dd(const dd& x) {
  double n = std::nearbyint(x.hi);
  dd v = x - dd(n);  // exact
  double sign = (std::fmod(std::fabs(n), 2.0) == 1.0) ? -1.0 : 1.0;
  if (v.hi == 0.0 && v.lo == 0.0) return dd(0.0);
  dd pv;
  bool use_cos = false;
  if (std::fabs(v.hi) > 0.25) {
    // sin(pi v) = sign(v) * cos(pi (1/2 - |v|))
    dd av = fabs_dd(v);
    pv = dd_pi() * (dd(0.5) - av);
    use_cos = true;
    if (v.hi < 0.0) sign = -sign;
  } else {
    pv = dd_pi() * v;
  }
  dd p2 = pv * pv;
  dd term(1.0), sum(0.0);
  if (use_cos) {
    sum = dd(1.0);
    for (int kk = 1; kk <= 20; ++kk) {
      term = term * p2 / double((2 * kk - 1) * (2 * kk));
      sum = (kk % 2) ? sum - term : sum + term;
      if (std::fabs(term.hi) < 1e-35) break;
    }
  } else {
    sum = pv;
    term = pv;
    for (int kk = 1; kk <= 20; ++kk) {
      term = term * p2 / double((2 * kk) * (2 * kk + 1));
      sum = (kk % 2) ? sum - term : sum + term;
      if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
    }
  }
  return sum * sign;
}

namespace {

// Stirling coefficients B_{2j} / (2j (2j-1)) as exact rationals
struct Rat {
  double num, den;
};
constexpr std::array<Rat, 15> kStirling = {{
    {1.0, 6.0},
    {-1.0, 30.0},
    {1.0, 42.0},
    {-1.0, 30.0},
    {5.0, 66.0},
    {-691.0, 2730.0},
    {7.0, 6.0},
    {-3617.0, 510.0},
    {43867.0, 798.0},
    {-174611.0, 330.0},
    {854513.0, 138.0},
    {-236364091.0, 2730.0},
    {8553103.0, 6.0},
    {-23749461029.0, 870.0},
    {8615841276005.0, 14322.0},
}};

// Stirling series for log Gamma, valid for w >= 35
dd stirling_lgamma(const dd& w) {
  dd lg = (w - dd(0.5)) * log_dd(w) - w + dd_half_ln2pi();
  dd u = dd(1.0) / w;
  dd u2 = u * u;
  dd up = u;
  for (std::size_t j = 0; j < kStirling.size(); ++j) {
    double c = 2.0 * double(j + 1);
    dd coef = dd(kStirling[j].num) / dd(kStirling[j].den * c * (c - 1.0));
    lg += coef * up;
    up = up * u2;
  }
  return lg;
}

}  // namespace

dd lgamma_dd(const dd& x) {
  dd w = x;
  dd logprod(0.0);
  while (w.hi < 35.0) {
    logprod += log_dd(w);
    w += dd(1.0);
  }
  return stirling_lgamma(w) - logprod;
}

ddx normalize(dd m, long long e) {
  if (m.hi == 0.0) return {dd(0.0), 0};
  int k;
  std::frexp(m.hi, &k);  // m.hi in [2^{k-1}, 2^k)
  ddx r;
  r.m = ldexp_dd(m, 1 - k);
  r.e = e + k - 1;
  return r;
}

ddx mul(const ddx& a, const ddx& b) {
  if (a.zero() || b.zero()) return {dd(0.0), 0};
  return normalize(a.m * b.m, a.e + b.e);
}

ddx mul(const ddx& a, const dd& b) {
  if (a.zero() || b.hi == 0.0) return {dd(0.0), 0};
  return normalize(a.m * b, a.e);
}

ddx exp_ddx(const dd& y) {
  dd t = y / dd_ln2();
  double k = std::nearbyint(t.hi);
  dd frac = y - dd_ln2() * k;
  return normalize(exp_dd(frac), (long long)k);
}

double to_double(const ddx& a) {
  if (a.zero()) return 0.0;
  if (a.e > 1023) return a.m.hi > 0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
  if (a.e < -1070) return 0.0;
  return std::ldexp(a.m.to_double(), int(a.e));
}

dd to_dd(const ddx& a) {
  if (a.zero()) return dd(0.0);
  if (a.e > 1023 || a.e < -1020) return dd(to_double(a));
  return ldexp_dd(a.m, int(a.e));
}

ddx rgamma_ddx(const dd& x) {
  // exact zero at the poles of Gamma
  double r = std::nearbyint(x.hi);
  if (r <= 0.0 && x.hi == r && x.lo == 0.0) return {dd(0.0), 0};

  if (x.hi >= 0.5) {
    // 1/Gamma(x) = prod_{i<k}(x+i) / Gamma(x+k), shift to the Stirling range
    dd w = x;
    ddx prod = normalize(dd(1.0), 0);
    while (w.hi < 35.0) {
      prod = mul(prod, w);
      w += dd(1.0);
    }
    return mul(exp_ddx(-stirling_lgamma(w)), prod);
  }
  // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x)/pi
  dd s = sinpi_dd(x);
  if (s.hi == 0.0 && s.lo == 0.0) return {dd(0.0), 0};
  dd y = dd(1.0) - x;
  dd w = y;
  ddx invprod = normalize(dd(1.0), 0);
  while (w.hi < 35.0) {
    invprod = mul(invprod, w);
    w += dd(1.0);
  }
  // Gamma(1-x) = Gamma(w)/prod
  ddx g = exp_ddx(stirling_lgamma(w));
  ddx res = mul(g, s / dd_pi());
  // divide by the shift product
  if (invprod.zero()) return {dd(0.0), 0};
  return normalize(res.m / invprod.m, res.e - invprod.e);
}

}  // namespace fracwave
