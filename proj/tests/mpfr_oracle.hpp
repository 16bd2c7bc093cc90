#pragma once
// Extended-precision reference values for tests, backed by MPFR (320 bits).
// Test-only: the production library never links this.
#include <mpfr.h>

#include <string>

#include "fracwave/dd.hpp"

namespace fracwave::testing {

inline constexpr mpfr_prec_t kPrec = 320;

class MP {
 public:
  MP() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
  explicit MP(double x) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, x, MPFR_RNDN); }
  explicit MP(const dd& x) {
    mpfr_init2(v_, kPrec);
    mpfr_set_d(v_, x.hi, MPFR_RNDN);
    mpfr_add_d(v_, v_, x.lo, MPFR_RNDN);
  }
  MP(const MP& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MP& operator=(const MP& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~MP() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  double get() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend MP operator+(const MP& a, const MP& b) { MP r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MP operator-(const MP& a, const MP& b) { MP r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MP operator*(const MP& a, const MP& b) { MP r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MP operator/(const MP& a, const MP& b) { MP r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

 private:
  mpfr_t v_;
};

inline MP mp_exp(const MP& x) { MP r; mpfr_exp(r.raw(), x.raw(), MPFR_RNDN); return r; }
inline MP mp_log(const MP& x) { MP r; mpfr_log(r.raw(), x.raw(), MPFR_RNDN); return r; }
inline MP mp_sinpi(const MP& x) {
  MP pi; mpfr_const_pi(pi.raw(), MPFR_RNDN);
  MP r = x * pi;
  mpfr_sin(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}
inline MP mp_gamma(const MP& x) { MP r; mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN); return r; }
inline double mp_rgamma(double x) {
  MP g = mp_gamma(MP(x));
  return (MP(1.0) / g).get();
}

// 1/Gamma as MP, safe at poles (returns exact zero)
inline MP mp_rgamma_mp(const MP& x) {
  if (mpfr_integer_p(x.raw()) && mpfr_sgn(x.raw()) <= 0) return MP(0.0);
  return MP(1.0) / mp_gamma(x);
}

// Brute-force Wright series  sum z^m / (m! Gamma(delta - beta m)), in MPFR.
inline MP wright_mp(double beta, double delta, double z, int terms = 400) {
  MP sum(0.0);
  MP pw(1.0);  // z^m / m!
  MP zz(z);
  for (int m = 0; m < terms; ++m) {
    MP arg = MP(delta) - MP(beta) * MP(double(m));
    sum = sum + pw * mp_rgamma_mp(arg);
    pw = pw * zz / MP(double(m + 1));
  }
  return sum;
}

}  // namespace fracwave::testing
