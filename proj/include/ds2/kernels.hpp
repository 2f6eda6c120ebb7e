#pragma once

#include <complex>
#include <vector>

#include "ds2/geometry.hpp"
#include "ds2/specfun.hpp"

namespace ds2 {

// Mass parameter alpha with mu^2 R^2 = alpha (1 - alpha); alpha = 1/2 - i nu.
class MassParam {
public:
  explicit MassParam(cplx alpha);
  static MassParam from_nu(double nu) { return MassParam(cplx(0.5, -nu)); }
  cplx alpha() const { return m_alpha; }
  cplx mu2R2() const { return m_alpha * (1.0 - m_alpha); }

private:
  cplx m_alpha;
};

enum class ConstantScheme { series_limit, paper_closed_form };

struct KernelConvention {
  ConstantScheme scheme = ConstantScheme::series_limit;
  // Additive constant K in W0 = -(1/4pi) ln((1+lambda)/2) + K/(4pi).
  double modal_constant() const;
};

// Side of the massless cut (-inf, -1] from which lambda is approached.
enum class LambdaSide { none, above, below };

cplx massive_w(const MassParam &m, cplx lambda, LambdaSide side = LambdaSide::none);
cplx subtraction_constant(const MassParam &m);
cplx massless_w(cplx lambda, const KernelConvention &conv, LambdaSide side = LambdaSide::none);
cplx general_w(int d, double nu, cplx lambda, const DsParams &params);
cplx flat_remark_f(cplx lambda);

// Boundary value of the massless kernel at a real pair, sign rule applied
// directly: the first argument sits at tau - i0, the second at tau' + i0.
cplx massless_w_pair(const DsPoint &x, const DsPoint &xp, const KernelConvention &conv);
cplx massive_w_pair(const MassParam &m, const DsPoint &x, const DsPoint &xp);

// lambda at the epsilon-shifted pair (tau - i eps, tau' + i eps).
cplx lambda_eps(const DsPoint &x, const DsPoint &xp, double eps);

struct BoundaryValue {
  cplx value;
  double error;
};

std::vector<double> default_eps_levels();

// Richardson (Neville) extrapolation of massless_w(lambda_eps) to eps = 0.
BoundaryValue boundary_value_w(const DsPoint &x, const DsPoint &xp, const std::vector<double> &eps_levels,
                               const KernelConvention &conv, double tol = 1e-6);

cplx commutator_w(const DsPoint &x, const DsPoint &xp, const KernelConvention &conv);

// Neville extrapolation of samples f(h_i) to h = 0; error is the last correction.
BoundaryValue neville_zero(const std::vector<double> &h, const std::vector<cplx> &f);

} // namespace ds2
