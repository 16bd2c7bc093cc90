#include "fracwave/kernels.hpp"

#include <cmath>
#include <map>
#include <random>

#include "fracwave/dd.hpp"
#include "fracwave/quadrature.hpp"

namespace fracwave::kern {

using special::EvalResult;
using special::FFamilyParams;
using special::WrightSeries;

EllipticParamField::Frozen EllipticParamField::freeze(const Vec& eta) const {
  Frozen fr;
  fr.a = a(eta);
  if (fr.a.rows() != dim || fr.a.cols() != dim) throw DomainError("coefficient matrix has wrong size");
  if (!fr.a.isApprox(fr.a.transpose(), 1e-12)) throw DomainError("coefficient matrix not symmetric");
  double det = fr.a.determinant();
  if (!(det > 0.0)) throw SingularMatrix("coefficient matrix not positive definite");
  fr.A = fr.a.inverse();
  double cond = fr.a.cwiseAbs().maxCoeff() * fr.A.cwiseAbs().maxCoeff();
  if (!(cond < 1e12)) throw SingularMatrix("coefficient matrix conditioning beyond 1e12");
  fr.det_fac = 1.0 / std::sqrt(det);
  return fr;
}

bool EllipticParamField::spot_check_ellipticity(int draws, unsigned seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int i = 0; i < draws; ++i) {
    Vec eta(dim), xi(dim);
    for (int j = 0; j < dim; ++j) {
      eta[j] = 3.0 * nd(rng);
      xi[j] = nd(rng);
    }
    double q = xi.dot(a(eta) * xi);
    if (q < delta0 * xi.squaredNorm() * (1.0 - 1e-9)) return false;
  }
  return true;
}

EllipticParamField identity_field(int n) {
  EllipticParamField f;
  f.dim = n;
  f.delta0 = 1.0;
  f.a = [n](const Vec&) { return Mat(Mat::Identity(n, n)); };
  return f;
}

EllipticParamField scaled_identity_field(int n, double value) {
  EllipticParamField f;
  f.dim = n;
  f.delta0 = value;
  f.a = [n, value](const Vec&) { return Mat(value * Mat::Identity(n, n)); };
  return f;
}

EllipticParamField constant_field(const Mat& a0) {
  EllipticParamField f;
  f.dim = int(a0.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es(a0);
  f.delta0 = es.eigenvalues().minCoeff();
  f.a = [a0](const Vec&) { return a0; };
  return f;
}

double kernel_delta0(KernelKind k, double alpha, int n) {
  double base = 0.5 * alpha * n;
  switch (k) {
    case KernelKind::Z1: return 1.0 - base;
    case KernelKind::Z2: return 2.0 - base;
    case KernelKind::Y: return alpha - base;
  }
  return 0.0;
}

KernelProfiles::KernelProfiles(double alpha, int n, ProfileConfig cfg)
    : alpha_(alpha), n_(n), cfg_(cfg) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("kernel profiles: alpha must lie in (1,2)");
  if (n < 1 || n > 3) throw DomainError("kernel profiles: n must be 1, 2 or 3");
  double beta = 0.5 * alpha;
  cn_ = std::ldexp(1.0, -n) * std::pow(M_PI, 0.5 * (1.0 - n));
  // per-profile truncation radius where the series' true term peak (delta
  // included) hits the decay budget; past it the profile evaluates to 0
  auto slot_cut = [&](const Slot& s) {
    if (std::lround(s.mu) % 2 == 0 && s.mu > 0.0) {
      double zc = 1e300;
      for (const auto& t : special::detail::even_mu_terms(int(std::lround(s.mu)), s.delta, beta))
        zc = std::min(zc, special::series_radius_for(beta, t.delta, cfg_.decay_ln));
      return zc;
    }
    return special::series_radius_for(beta, s.delta, cfg_.decay_ln);
  };
  for (int ki = 0; ki < 3; ++ki) {
    KernelKind kind = static_cast<KernelKind>(ki);
    double d0 = kernel_delta0(kind, alpha, n);
    for (int k = 0; k < 3; ++k) {
      Slot& s = slots_[ki * 4 + k];
      s.mu = double(n - 1 + 2 * k);
      s.delta = d0 - alpha * k;
      s.z_cut = slot_cut(s);
    }
    Slot& sdt = slots_[ki * 4 + 3];
    sdt.mu = double(n - 1);
    sdt.delta = d0 - 1.0;
    sdt.z_cut = slot_cut(sdt);
  }
  z_cut_ = std::min({slots_[0].z_cut, slots_[4].z_cut, slots_[8].z_cut});
}

const KernelProfiles::Slot& KernelProfiles::slot(KernelKind which, int k) const {
  int ki = static_cast<int>(which);
  return slots_[ki * 4 + (k < 0 ? 3 : k)];
}

void KernelProfiles::ensure(const Slot& s) const {
  std::call_once(s.once, [&] {
    double beta = 0.5 * alpha_;
    if (std::lround(s.mu) % 2 == 0) {
      // even first parameter: finite combination of series evaluations
      if (s.mu == 0.0) {
        auto series = std::make_shared<WrightSeries>(beta, s.delta, cfg_.wright, s.z_cut * 1.01);
        s.exact = [series](double z) { return series->eval(-z).value; };
      } else {
        auto terms = special::detail::even_mu_terms(int(std::lround(s.mu)), s.delta, beta);
        auto bank = std::make_shared<std::vector<std::pair<special::detail::EvenMuTerm,
                                                           std::shared_ptr<WrightSeries>>>>();
        for (const auto& t : terms)
          bank->push_back({t, std::make_shared<WrightSeries>(beta, t.delta, cfg_.wright, s.z_cut * 1.01)});
        s.exact = [bank](double z) {
          double acc = 0.0;
          for (const auto& [t, ws] : *bank) acc += t.coef * std::pow(z, -t.zpow) * ws->eval(-z).value;
          return acc;
        };
      }
    } else {
      // odd first parameter: integral route, run against a cached interpolant
      // of the series factor so the table build stays cheap
      double mu = s.mu, delta = s.delta;
      auto cfg = cfg_.ffam;
      double z_cut = s.z_cut;
      auto series = std::make_shared<WrightSeries>(beta, delta, cfg_.wright, z_cut * 1.02);
      double wlo = z_cut * cfg_.lo_frac * 0.25;
      auto wtab = std::make_shared<PiecewiseChebyshev>(
          [&](double w) { return series->eval(-w).value; }, wlo, z_cut * 1.01, 12, 1e-11, 1e-280);
      double wtab_err = std::max(wtab->fitted_error(), 1e-15);
      s.exact = [series, wtab, wtab_err, mu, beta, cfg, z_cut](double z) {
        special::detail::PhiFn phi = [&](double w) -> EvalResult {
          if (w >= wtab->lo() && w <= wtab->hi()) return {wtab->eval(w), wtab_err, 0};
          return series->eval(-w);
        };
        return special::detail::f_family_integral(phi, beta, mu, z, z_cut, cfg).value;
      };
    }
    s.table = std::make_unique<PiecewiseChebyshev>(s.exact, s.z_cut * cfg_.lo_frac, s.z_cut,
                                                   cfg_.degree, cfg_.rel_tol, 1e-300);
  });
}

double KernelProfiles::eval_slot(const Slot& s, double z) const {
  if (z > s.z_cut) return 0.0;  // past this profile's decay budget
  ensure(s);
  if (z >= s.table->lo()) return s.table->eval(z);
  if (z == 0.0 && s.mu == 0.0) return s.exact(0.0);
  if (z <= 0.0) throw DomainError("kernel profile: nonpositive radius for a singular profile");
  return s.exact(z);
}

double KernelProfiles::level(KernelKind which, int k, double z) const {
  return eval_slot(slot(which, k), z);
}

double KernelProfiles::level_dt(KernelKind which, double z) const {
  return eval_slot(slot(which, -1), z);
}

std::shared_ptr<const KernelProfiles> KernelProfiles::get(double alpha, int n) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::shared_ptr<const KernelProfiles>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(alpha, n);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_shared<const KernelProfiles>(alpha, n)).first;
  return it->second;
}

double gamma_kernel(double alpha, int n, double t, double r) {
  if (!(t > 0.0)) throw DomainError("gamma_kernel: t must be positive");
  if (r < 0.0) throw DomainError("gamma_kernel: radius must be nonnegative");
  if (n >= 2 && r == 0.0) throw DomainError("gamma_kernel: singular at r = 0 for n >= 2");
  auto prof = KernelProfiles::get(alpha, n);
  double d0 = kernel_delta0(KernelKind::Y, alpha, n);
  double z = std::pow(t, -0.5 * alpha) * r;
  return prof->cn() * std::pow(t, d0 - 1.0) * prof->level(KernelKind::Y, 0, z);
}

Triple const_triple(double alpha, int n, double t, double r) {
  if (!(t > 0.0)) throw DomainError("const_triple: t must be positive");
  if (n >= 2 && r == 0.0) throw DomainError("const_triple: singular at r = 0 for n >= 2");
  auto prof = KernelProfiles::get(alpha, n);
  double z = std::pow(t, -0.5 * alpha) * r;
  Triple out;
  double d1 = kernel_delta0(KernelKind::Z1, alpha, n);
  double d2 = kernel_delta0(KernelKind::Z2, alpha, n);
  double dy = kernel_delta0(KernelKind::Y, alpha, n);
  out.z1 = prof->cn() * std::pow(t, d1 - 1.0) * prof->level(KernelKind::Z1, 0, z);
  out.z2 = prof->cn() * std::pow(t, d2 - 1.0) * prof->level(KernelKind::Z2, 0, z);
  out.y = prof->cn() * std::pow(t, dy - 1.0) * prof->level(KernelKind::Y, 0, z);
  return out;
}

double rho(double sigma, double alpha, double t, const Vec& x, const Vec& xi) {
  if (!(t > 0.0)) throw DomainError("rho: t must be positive");
  double r = (x - xi).norm();
  double arg = std::pow(std::pow(t, -0.5 * alpha) * r, 2.0 / (2.0 - alpha));
  return std::exp(-sigma * arg);
}

FrozenKernel::FrozenKernel(EllipticParamField field, double alpha)
    : field_(std::move(field)), alpha_(alpha) {
  prof_ = KernelProfiles::get(alpha, field_.dim);
}

double FrozenKernel::value_f(const EllipticParamField::Frozen& fr, KernelKind k, double t,
                             const Vec& y) const {
  double r2 = fr.quad(y);
  int n = field_.dim;
  if (n >= 2 && r2 == 0.0) throw DomainError("frozen kernel: singular at y = 0 for n >= 2");
  double d0 = kernel_delta0(k, alpha_, n);
  double z = std::pow(t, -0.5 * alpha_) * std::sqrt(r2);
  return fr.det_fac * prof_->cn() * std::pow(t, d0 - 1.0) * prof_->level(k, 0, z);
}

Vec FrozenKernel::grad_f(const EllipticParamField::Frozen& fr, KernelKind k, double t,
                         const Vec& y) const {
  double r2 = fr.quad(y);
  if (r2 == 0.0) throw DomainError("frozen kernel: derivative undefined at y = 0");
  int n = field_.dim;
  double d0 = kernel_delta0(k, alpha_, n);
  double z = std::pow(t, -0.5 * alpha_) * std::sqrt(r2);
  double phi1 = -0.25 * prof_->cn() * std::pow(t, d0 - alpha_ - 1.0) * prof_->level(k, 1, z);
  return Vec(fr.det_fac * phi1 * 2.0 * (fr.A * y));
}

Mat FrozenKernel::hess_f(const EllipticParamField::Frozen& fr, KernelKind k, double t,
                         const Vec& y) const {
  double r2 = fr.quad(y);
  if (r2 == 0.0) throw DomainError("frozen kernel: derivative undefined at y = 0");
  int n = field_.dim;
  double d0 = kernel_delta0(k, alpha_, n);
  double z = std::pow(t, -0.5 * alpha_) * std::sqrt(r2);
  double phi1 = -0.25 * prof_->cn() * std::pow(t, d0 - alpha_ - 1.0) * prof_->level(k, 1, z);
  double phi2 = 0.0625 * prof_->cn() * std::pow(t, d0 - 2.0 * alpha_ - 1.0) * prof_->level(k, 2, z);
  Vec Ay = fr.A * y;
  return Mat(fr.det_fac * (4.0 * phi2 * (Ay * Ay.transpose()) + 2.0 * phi1 * fr.A));
}

double FrozenKernel::dt_f(const EllipticParamField::Frozen& fr, KernelKind k, double t,
                          const Vec& y) const {
  double r2 = fr.quad(y);
  int n = field_.dim;
  if (n >= 2 && r2 == 0.0) throw DomainError("frozen kernel: singular at y = 0 for n >= 2");
  double d0 = kernel_delta0(k, alpha_, n);
  double z = std::pow(t, -0.5 * alpha_) * std::sqrt(r2);
  return fr.det_fac * prof_->cn() * std::pow(t, d0 - 2.0) * prof_->level_dt(k, z);
}

double FrozenKernel::value(KernelKind k, double t, const Vec& y, const Vec& eta) const {
  return value_f(field_.freeze(eta), k, t, y);
}
Vec FrozenKernel::grad(KernelKind k, double t, const Vec& y, const Vec& eta) const {
  return grad_f(field_.freeze(eta), k, t, y);
}
Mat FrozenKernel::hess(KernelKind k, double t, const Vec& y, const Vec& eta) const {
  return hess_f(field_.freeze(eta), k, t, y);
}
double FrozenKernel::dt(KernelKind k, double t, const Vec& y, const Vec& eta) const {
  return dt_f(field_.freeze(eta), k, t, y);
}

double FrozenKernel::eval(const KernelId& id, double t, const Vec& y, const Vec& eta) const {
  if (id.time_deriv) {
    if (id.order() != 0) throw DomainError("kernel eval: mixed time/space derivatives unsupported");
    return dt(id.which, t, y, eta);
  }
  switch (id.order()) {
    case 0: return value(id.which, t, y, eta);
    case 1: {
      Vec g = grad(id.which, t, y, eta);
      for (int i = 0; i < field_.dim; ++i)
        if (id.deriv[i] == 1) return g[i];
      throw DomainError("kernel eval: malformed multi-index");
    }
    case 2: {
      Mat h = hess(id.which, t, y, eta);
      for (int i = 0; i < field_.dim; ++i) {
        if (id.deriv[i] == 2) return h(i, i);
        for (int j = i + 1; j < field_.dim; ++j)
          if (id.deriv[i] == 1 && id.deriv[j] == 1) return h(i, j);
      }
      throw DomainError("kernel eval: malformed multi-index");
    }
    default:
      throw DomainError("kernel eval: derivative order beyond 2");
  }
}

IdentityReport identity_check(const EllipticParamField& field, KernelKind kind, double alpha,
                              double t, const Vec& eta, double tol, int base_cells) {
  if (!(t > 0.0)) throw DomainError("identity_check: t must be positive");
  int n = field.dim;
  FrozenKernel K(field, alpha);
  auto fr = field.freeze(eta);
  Eigen::SelfAdjointEigenSolver<Mat> es(fr.a);
  Mat asqrt = es.operatorSqrt();
  double jac = std::sqrt(fr.a.determinant());

  double R = std::pow(t, 0.5 * alpha) * K.profiles().z_cut() * 0.999;
  Vec e = Vec::Ones(n).normalized();
  auto f = [&](double r) {
    Vec y = asqrt * (r * e);
    return K.value_f(fr, kind, t, y) * std::pow(r, n - 1);
  };
  double omega = n == 1 ? 2.0 : (n == 2 ? 2.0 * M_PI : 4.0 * M_PI);

  auto run = [&](int cells) {
    Eigen::VectorXd mesh = quad::graded_mesh(0.0, R, cells, 3.0);
    return omega * jac * quad::composite(f, mesh, 10);
  };
  double coarse = run(base_cells), fine = run(2 * base_cells);
  IdentityReport rep;
  rep.target = kind == KernelKind::Z1  ? 1.0
               : kind == KernelKind::Z2 ? t
                                        : std::pow(t, alpha - 1.0) * to_double(rgamma_ddx(dd(alpha)));
  if (std::fabs(fine - coarse) > std::max(tol * std::fabs(rep.target), tol)) {
    coarse = fine;
    fine = run(4 * base_cells);
    if (std::fabs(fine - coarse) > std::max(tol * std::fabs(rep.target), tol))
      throw QuadratureFailure("identity_check: radial refinement stalled");
  }
  rep.computed = fine;
  rep.refine_gap = std::fabs(fine - coarse);
  rep.abs_err = std::fabs(rep.computed - rep.target);
  return rep;
}

}  // namespace fracwave::kern
