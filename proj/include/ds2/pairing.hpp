#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ds2/kernels.hpp"
#include "ds2/testfn.hpp"

namespace ds2 {

// <f, g> from the linear data of f and g, conjugate-linear in the first slot:
//   (1/4pi) { K conj(I_f) I_g + conj(Q_f) I_g + conj(I_f) Q_g + sum_{n != 0} conj(A_n f) A_n g / |n| }
cplx pair_profiles(const Profile &f, const Profile &g, const KernelConvention &conv);

cplx pair_indef(const TestFunction &f, const TestFunction &g, const KernelConvention &conv);

// Size of the last retained mode pair relative to the total, as a truncation gauge.
double mode_tail(const Profile &p);

Eigen::MatrixXcd gram_indef(const std::vector<TestFunction> &basis, const KernelConvention &conv);

// Epsilon-regularized double quadrature of the kernel on the sampling grid,
// extrapolated to eps = 0. Slow and grid limited; kept as a cross-check.
BoundaryValue pair_indef_regularized(const TestFunction &f, const TestFunction &g, const KernelConvention &conv,
                                     const std::vector<double> &eps_levels);

// Gram matrix of the massive kernel W_alpha. The massless part uses the modal
// form; the continuous remainder W_alpha - C_alpha - W0 is integrated on the grid.
Eigen::MatrixXcd gram_massive(const std::vector<TestFunction> &basis, const MassParam &m);

// W_alpha - C_alpha - W0 (series constant) at a real pair.
cplx massive_remainder(const MassParam &m, double tau, double taup, double dtheta, double R);

struct HOptions {
  double w_tau = 0.7;
  double w_theta = 1.2;
};

struct HConstruction {
  TestFunction h;
  TestFunction h1;
  double beta = 0.0;
  double beta_closed_form = 0.0;
  cplx cross_term = 0.0;
  cplx h1_norm = 0.0;
};

// h = h1 + beta Box h1 with int h1 = 1 and <h, h> = 0.
HConstruction construct_h(const DsPoint &seed_center, const GridSpec &spec, const KernelConvention &conv,
                          const HOptions &opt = {});

} // namespace ds2
