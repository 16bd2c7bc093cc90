#pragma once
#include <cmath>
#include <cstdlib>
#include <limits>

namespace fracwave {

// Two-double compensated arithmetic (~31 significant digits).  Used by the
// Wright-series evaluator, where alternating sums cancel far below double
// precision.  Requires strict IEEE semantics: build with -ffp-contract=off.
struct dd {
  double hi = 0.0;
  double lo = 0.0;
  constexpr dd() = default;
  constexpr dd(double h) : hi(h) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}
  double to_double() const { return hi + lo; }
};

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// valid only when |a| >= |b|
inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd operator+(const dd& a, const dd& b) {
  dd s = two_sum(a.hi, b.hi);
  dd t = two_sum(a.lo, b.lo);
  dd r = quick_two_sum(s.hi, s.lo + t.hi);
  return quick_two_sum(r.hi, r.lo + t.lo);
}

inline dd operator-(const dd& a) { return {-a.hi, -a.lo}; }
inline dd operator-(const dd& a, const dd& b) { return a + (-b); }

inline dd operator*(const dd& a, const dd& b) {
  dd p = two_prod(a.hi, b.hi);
  return quick_two_sum(p.hi, p.lo + (a.hi * b.lo + a.lo * b.hi));
}

inline dd operator*(const dd& a, double b) {
  dd p = two_prod(a.hi, b);
  return quick_two_sum(p.hi, p.lo + a.lo * b);
}
inline dd operator*(double a, const dd& b) { return b * a; }

inline dd operator/(const dd& a, const dd& b) {
  double q1 = a.hi / b.hi;
  dd r = a - b * q1;
  double q2 = r.hi / b.hi;
  r = r - b * q2;
  double q3 = r.hi / b.hi;
  dd q = quick_two_sum(q1, q2);
  return q + dd(q3);
}
inline dd operator/(const dd& a, double b) { return a / dd(b); }
inline dd operator/(double a, const dd& b) { return dd(a) / b; }

inline dd& operator+=(dd& a, const dd& b) { return a = a + b; }
inline dd& operator-=(dd& a, const dd& b) { return a = a - b; }
inline dd& operator*=(dd& a, const dd& b) { return a = a * b; }
inline dd& operator/=(dd& a, const dd& b) { return a = a / b; }

inline bool operator<(const dd& a, const dd& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const dd& a, const dd& b) { return b < a; }
inline bool operator==(const dd& a, const dd& b) { return a.hi == b.hi && a.lo == b.lo; }

inline dd fabs_dd(const dd& a) { return (a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0)) ? -a : a; }

// exact scaling by a power of two
inline dd ldexp_dd(const dd& a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

// constants, derived at first use (no hand-typed low words)
const dd& dd_pi();
const dd& dd_ln2();
const dd& dd_half_ln2pi();  // log(2*pi)/2

// elementary functions, ~1-2 ulp in dd precision
dd exp_dd(const dd& x);   // |x| < 700
dd log_dd(const dd& x);   // x > 0
dd sinpi_dd(const dd& x); // sin(pi*x), exact zeros at integers

// log Gamma for arguments >= 0.5 (argument shift + Stirling series)
dd lgamma_dd(const dd& x);

// Exponent-tracked two-double value m * 2^e; keeps reciprocal-Gamma factors
// representable far outside double range.
struct ddx {
  dd m;        // mantissa, normalized into [1,2) (or exact zero)
  long long e = 0;
  bool zero() const { return m.hi == 0.0; }
};

ddx normalize(dd m, long long e);
ddx mul(const ddx& a, const ddx& b);
ddx mul(const ddx& a, const dd& b);
ddx exp_ddx(const dd& y);               // e^y for y of any magnitude
double to_double(const ddx& a);         // 0 / +-inf on under/overflow
dd to_dd(const ddx& a);

// 1/Gamma(x); finite everywhere, exactly 0 at non-positive integers
ddx rgamma_ddx(const dd& x);

}  // namespace fracwave
