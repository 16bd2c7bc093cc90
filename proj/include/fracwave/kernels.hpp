#pragma once
#include <Eigen/Dense>
#include <array>
#include <functional>
#include <memory>
#include <mutex>

#include "fracwave/chebyshev.hpp"
#include "fracwave/errors.hpp"
#include "fracwave/special.hpp"

namespace fracwave::kern {

// spatial points / small coefficient matrices, stack-allocated up to dim 3
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

// Second-order coefficient field a_ij(eta), eta the parameter point.
struct EllipticParamField {
  int dim = 1;
  std::function<Mat(const Vec&)> a;
  double delta0 = 1.0;  // ellipticity constant, used by spot checks

  struct Frozen {
    Mat a;        // coefficients at the parameter point
    Mat A;        // inverse
    double det_fac;  // (det A)^{1/2} = (det a)^{-1/2}: normalizes the kernels
    double quad(const Vec& y) const { return y.dot(A * y); }
  };
  Frozen freeze(const Vec& eta) const;

  // ellipticity of a(eta) xi . xi >= delta0 |xi|^2 on random draws
  bool spot_check_ellipticity(int draws = 64, unsigned seed = 1) const;
};

EllipticParamField identity_field(int n);
EllipticParamField scaled_identity_field(int n, double value);
EllipticParamField constant_field(const Mat& a0);

enum class KernelKind { Z1, Z2, Y };

struct KernelId {
  KernelKind which = KernelKind::Z1;
  std::array<int, 3> deriv = {0, 0, 0};  // spatial multi-index, |m| <= 2
  bool time_deriv = false;
  int order() const { return deriv[0] + deriv[1] + deriv[2]; }
};

struct ProfileConfig {
  special::WrightConfig wright;
  special::FFamilyConfig ffam;
  double decay_ln = 38.0;   // arguments past this decay budget evaluate to 0
  double rel_tol = 1e-9;    // table accuracy
  int degree = 12;
  double lo_frac = 1e-9;    // table lower end as a fraction of the cutoff
};

// first-argument scale exponent of each kernel: value = c_n t^{d0-1} F(z; n-1, d0)
double kernel_delta0(KernelKind k, double alpha, int n);

// Radial profile family F(z; mu, delta) for one (alpha, n): tabulated once,
// immutable afterwards.  Chain level k provides F(z; n-1+2k, d0 - alpha k),
// feeding the exact spatial-derivative chain of the kernels.
class KernelProfiles {
 public:
  KernelProfiles(double alpha, int n, ProfileConfig cfg = {});

  double level(KernelKind which, int k, double z) const;  // k in {0,1,2}
  double level_dt(KernelKind which, double z) const;      // F(z; n-1, d0 - 1)

  double alpha() const { return alpha_; }
  int n() const { return n_; }
  double beta() const { return 0.5 * alpha_; }
  double z_cut() const { return z_cut_; }
  double cn() const { return cn_; }

  // shared, keyed by (alpha, n); entries live for the process lifetime
  static std::shared_ptr<const KernelProfiles> get(double alpha, int n);

 private:
  struct Slot {
    mutable std::once_flag once;
    mutable std::unique_ptr<PiecewiseChebyshev> table;
    mutable std::function<double(double)> exact;
    double mu = 0.0, delta = 0.0;
    double z_cut = 0.0;  // noise-safe truncation radius for this profile
  };
  const Slot& slot(KernelKind which, int k) const;  // k = -1 encodes the dt profile
  void ensure(const Slot& s) const;
  double eval_slot(const Slot& s, double z) const;

  double alpha_;
  int n_;
  ProfileConfig cfg_;
  double z_cut_;
  double cn_;
  mutable std::array<Slot, 12> slots_;  // 3 kinds x (3 chain levels + dt)
};

// Rotation-invariant kernel of the constant-coefficient problem (the forcing
// kernel); r is the spatial radius.
double gamma_kernel(double alpha, int n, double t, double r);

struct Triple {
  double z1, z2, y;
};
Triple const_triple(double alpha, int n, double t, double r);

// stretched-exponential decay factor exp(-sigma (t^{-alpha/2} |x-xi|)^{2/(2-alpha)})
double rho(double sigma, double alpha, double t, const Vec& x, const Vec& xi);

// Frozen-coefficient kernels Z1/Z2/Y(t, y; eta) with spatial derivatives up to
// order 2 produced by the analytic derivative chain, never by differencing.
class FrozenKernel {
 public:
  FrozenKernel(EllipticParamField field, double alpha);

  double value(KernelKind k, double t, const Vec& y, const Vec& eta) const;
  Vec grad(KernelKind k, double t, const Vec& y, const Vec& eta) const;
  Mat hess(KernelKind k, double t, const Vec& y, const Vec& eta) const;
  double dt(KernelKind k, double t, const Vec& y, const Vec& eta) const;
  double eval(const KernelId& id, double t, const Vec& y, const Vec& eta) const;

  // value/gradient/hessian from an already-frozen coefficient point
  double value_f(const EllipticParamField::Frozen& fr, KernelKind k, double t, const Vec& y) const;
  Vec grad_f(const EllipticParamField::Frozen& fr, KernelKind k, double t, const Vec& y) const;
  Mat hess_f(const EllipticParamField::Frozen& fr, KernelKind k, double t, const Vec& y) const;
  double dt_f(const EllipticParamField::Frozen& fr, KernelKind k, double t, const Vec& y) const;

  const EllipticParamField& field() const { return field_; }
  const KernelProfiles& profiles() const { return *prof_; }
  double alpha() const { return alpha_; }

 private:
  EllipticParamField field_;
  double alpha_;
  std::shared_ptr<const KernelProfiles> prof_;
};

struct IdentityReport {
  double computed = 0.0;
  double target = 0.0;
  double abs_err = 0.0;   // |computed - target|
  double refine_gap = 0.0;  // change under mesh doubling
};

// integrates the frozen kernel over the whole space against the known mass
// (1 for Z1, t for Z2, t^{alpha-1}/Gamma(alpha) for the forcing kernel)
IdentityReport identity_check(const EllipticParamField& field, KernelKind kind, double alpha,
                              double t, const Vec& eta, double tol, int base_cells = 320);

}  // namespace fracwave::kern
