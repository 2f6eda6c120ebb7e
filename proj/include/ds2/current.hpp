#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ds2/kernels.hpp"
#include "ds2/testfn.hpp"

namespace ds2 {

// Uniform evaluation grid: tau in [-T, T] (endpoints included), theta periodic.
struct EvalGrid {
  double R = 1.0;
  std::vector<double> tau;
  std::vector<double> theta;

  static EvalGrid make(double R, double T, int ntau, int ntheta);
  static EvalGrid make(const GridSpec &spec, int ntau = 257, int ntheta = 128);
  double dtau() const { return tau[1] - tau[0]; }
  double dtheta() const { return 2.0 * pi / double(theta.size()); }
};

// Value and derivatives of a smeared field at one point.
struct FieldJet {
  cplx u = 0.0, u_t = 0.0, u_h = 0.0, u_tt = 0.0, u_hh = 0.0;
  cplx box(double tau, double R) const;
};

// u(x) = a0 + aq conj(q(x)) + bq q(x) + sum_n alpha_n conj(e_n(x)) + beta_n e_n(x)
// with q = ln cos(tau/R) + i tau/R and e_n = exp(-i n theta + i |n| tau/R).
struct ModalField {
  double R = 1.0;
  cplx a0 = 0.0, aq = 0.0, bq = 0.0;
  std::vector<cplx> alpha, beta; // same index layout as Profile::A

  FieldJet jet(double tau, double theta) const;
};

class SmearedField {
public:
  SmearedField(TestFunction g, ModalField field, cplx c0, EvalGrid grid);

  const TestFunction &g() const { return m_g; }
  const ModalField &field() const { return m_field; }
  const EvalGrid &grid() const { return m_grid; }
  cplx c0() const { return m_c0; }
  // u on the grid, rows tau, columns theta.
  const Eigen::MatrixXcd &values() const { return m_u; }
  double R() const { return m_grid.R; }

  FieldJet jet(double tau, double theta) const { return m_field.jet(tau, theta); }

private:
  TestFunction m_g;
  ModalField m_field;
  cplx m_c0;
  EvalGrid m_grid;
  Eigen::MatrixXcd m_u;
};

// u(x) = int W0(x, x') g(x') dsigma(x').
SmearedField smear(const TestFunction &g, const EvalGrid &grid, const KernelConvention &conv = {});
// Same construction with the commutator function W0(x,x') - W0(x',x); g must be real.
SmearedField smear_commutator(const TestFunction &g, const EvalGrid &grid);

enum class KappaConvention { paper, derived };
double kappa_value(KappaConvention k, double R);

struct OneFormGrid {
  EvalGrid grid;
  Eigen::MatrixXcd w_tau;   // coefficient of dtau
  Eigen::MatrixXcd w_theta; // coefficient of dtheta
};

// omega = (du)* + kappa tan(tau/R) c0 dtheta, (du)* = -R u_t dtheta - u_h/R dtau.
class CorrectedCurrent {
public:
  CorrectedCurrent(const SmearedField &sf, double kappa);
  CorrectedCurrent(const SmearedField &sf, KappaConvention k);

  double kappa() const { return m_kappa; }
  const SmearedField &field() const { return *m_sf; }
  // (omega_tau, omega_theta) at a point.
  std::pair<cplx, cplx> at(double tau, double theta) const;
  OneFormGrid on_grid() const;

private:
  const SmearedField *m_sf;
  double m_kappa;
};

// Rows are the tau grid, columns theta. Eighth order central differences in tau
// (interior rows only, the first and last four rows are left zero) and FFT in theta.
Eigen::MatrixXcd diff_tau(const Eigen::MatrixXcd &a, double h, int order = 1);
Eigen::MatrixXcd diff_theta(const Eigen::MatrixXcd &a, int order = 1);
constexpr int stencil_halfwidth = 4;

struct GridResidual {
  double max_abs = 0.0;
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? max_abs / scale : max_abs; }
};

// d omega coefficient of dtau^dtheta by the grid stencils, interior rows.
GridResidual closedness_residual(const OneFormGrid &w);
// d((du)*) against -R sec^2(tau/R) box u, both from grid stencils on u.
GridResidual hodge_box_residual(const SmearedField &sf);
// Stencil box u against -c0/(4 pi R^2) at interior grid points picked by stride.
GridResidual smeared_box_residual(const SmearedField &sf, int probes = 20);
// Stencil derivative of the correction term against (kappa/R) sec^2 c0.
GridResidual correction_derivative_residual(const SmearedField &sf, double kappa);

// J(tau) = -(1/8pi) loop integral of omega over theta at fixed tau.
std::vector<cplx> slice_charge(const CorrectedCurrent &w, const std::vector<double> &taus);
double relative_spread(const std::vector<cplx> &J);

struct DualField {
  std::vector<double> tau;   // potential rows
  std::vector<double> theta; // unwrapped to [theta_base, theta_base + 2pi)
  Eigen::MatrixXcd potential;
  std::vector<cplx> winding; // loop integral at each potential row
  double path_mismatch = 0.0; // tau-first against theta-first path
  double dropped_term_coefficient = 0.0; // max |ln cos(tau/R) - ln cos(tau_b/R)|/(4pi)
};

// Path integration of omega from (tau_base, theta_base) with composite Gauss rules
// between neighbouring grid nodes; stride subsamples the evaluation grid.
DualField dual_field(const CorrectedCurrent &w, int base_tau_index, int base_theta_index, int stride = 4);

} // namespace ds2
