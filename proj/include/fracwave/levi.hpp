#pragma once
#include <functional>

#include "fracwave/kernels.hpp"

namespace fracwave::levi {

using kern::KernelKind;
using kern::Mat;
using kern::Vec;

// Variable-coefficient operator  a_ij(x) d2/dx_i dx_j + b_j(x) d/dx_j + c(x),
// paired with the fractional order alpha it acts alongside (the admissible
// Hoelder exponent depends on alpha).
struct EllipticOperator {
  kern::EllipticParamField field;
  std::function<Vec(const Vec&)> b;     // null means identically zero
  std::function<double(const Vec&)> c;  // null means identically zero
  double alpha = 1.5;
  double gamma = 1.0;  // Hoelder exponent of the coefficients
  double holder_const = 1.0;
  bool a_constant = false;
  bool b_zero = true;
  bool c_zero = true;

  int dim() const { return field.dim; }
  Vec bval(const Vec& x) const { return b ? b(x) : Vec(Vec::Zero(field.dim)); }
  double cval(const Vec& x) const { return c ? c(x) : 0.0; }
  void validate() const;
};

// admissible pair: 2 - 2/alpha < nu1 < gamma, nu0 = nu1 - 2 + 2/alpha
struct NuPair {
  double nu1, nu0;
};
NuPair nu_pair(double alpha, double gamma);

enum class SourceKind { M1, M2, K };

// Correction sources built on the frozen kernels:
//   M_l = sum_ij [a_ij(x) - a_ij(xi)] d2_ij Zl0(t, x-xi; xi)
//       + sum_j b_j(x) d_j Zl0 + c(x) Zl0,    K likewise with the Y kernel.
double source_kernel(const EllipticOperator& op, const kern::FrozenKernel& fk, SourceKind kind,
                     double t, const Vec& x, const Vec& xi);

double m_kernel(const EllipticOperator& op, int l, double t, const Vec& x, const Vec& xi);
double k_kernel(const EllipticOperator& op, double t, const Vec& x, const Vec& xi);

// Tabulation and quadrature parameters of the Volterra iteration.  The
// solution is tabulated on the self-similar lattice y = xi + lambda^{alpha/2} w.
struct VolterraGrid {
  int nt = 16;           // graded time slices
  double grading = 4.0;  // lambda_j = T (j/nt)^grading
  double W = 5.0;        // half-width in the shape coordinate w
  int nw = 48;           // shape samples per slice
  int ns = 16;           // time cells per convolution half
  int gl_s = 5;          // points per time cell
  int nv_cells = 5;      // spatial cells per convolution window
  int gl_v = 6;          // points per spatial cell
  double q_near = 3.0;   // grading toward the kernel-singular end
  double q_far = 7.0;    // grading toward the source-singular end
};

// Tabulated Volterra solution (or iterate) on the self-similar lattice.
// Stored values carry the rescaling lambda^{t_rescale} * w^{w_rescale} that
// removes the known singular trends, so bilinear interpolation stays accurate.
struct QTable {
  Vec xi;
  double alpha = 1.5;
  double T = 0.25;
  double grading = 4.0;   // lattice parameter: u = lambda^{1/grading} is uniform
  double t_rescale = 0.0;
  double w_rescale = 0.0;  // radial tables only
  bool radial = false;     // n >= 2: w is |y - xi| / lambda^{alpha/2} >= 0
  Eigen::VectorXd lambdas;
  Eigen::VectorXd w;
  Eigen::MatrixXd vals;  // nt x nw, rescaled
  int iterations = 0;
  double residual = 0.0;  // sup of the last rescaled increment over the sum

  double eval(double lambda, const Vec& y) const;  // 0 outside the lattice reach
  double sup_rescaled() const { return vals.cwiseAbs().maxCoeff(); }
};

// Neumann solution of  Q = source + K * Q  tabulated on the lattice.
// n = 1 supports general coefficients; n = 3 requires an isotropic-scalar
// coefficient field that is rotation-invariant about xi.
QTable solve_volterra(const EllipticOperator& op, SourceKind source, const Vec& xi, double T,
                      const VolterraGrid& grid, double tol, int max_iter = 24);

// building blocks of the iteration, exposed for diagnostics and cross-checks
QTable tabulate_source(const EllipticOperator& op, SourceKind source, const Vec& xi, double T,
                       const VolterraGrid& grid);
double apply_kernel_once(const EllipticOperator& op, const QTable& p, double t, const Vec& x,
                         const VolterraGrid& grid);

// the correction term  int_0^t ds int Y0(t-s, x-y'; y') Q(s, y'; xi) dy'
double correction_term(const EllipticOperator& op, const QTable& q, double t, const Vec& x,
                       const VolterraGrid& grid, bool time_deriv = false);

// corrected kernel  Z(t, x; xi) = Z0(t, x - xi; xi) + correction
double assemble_corrected(const EllipticOperator& op, KernelKind which, const QTable& q, double t,
                          const Vec& x, const Vec& xi, const VolterraGrid& grid);

}  // namespace fracwave::levi
