#include "ds2/kernels.hpp"

#include <cmath>

#include "ds2/errors.hpp"

namespace ds2 {

namespace {

CutSide hyp_side(LambdaSide s) {
  // x = (1 - lambda)/2 flips the imaginary part.
  switch (s) {
  case LambdaSide::above:
    return CutSide::below;
  case LambdaSide::below:
    return CutSide::above;
  default:
    return CutSide::none;
  }
}

// Sign of the imaginary part picked up by lambda under (tau - i eps, tau' + i eps)
// on a timelike pair: that of sin(tau - tau').
LambdaSide pair_side(const DsPoint &x, const DsPoint &xp) {
  const double dt = (x.tau() - xp.tau()) / x.R();
  return std::sin(dt) > 0.0 ? LambdaSide::above : LambdaSide::below;
}

} // namespace

MassParam::MassParam(cplx alpha) : m_alpha(alpha) {
  if (!(alpha.real() > 0.0) || alpha.real() > 0.5 + 1e-15)
    throw DomainError("mass parameter needs 0 < Re alpha <= 1/2");
}

double KernelConvention::modal_constant() const {
  return scheme == ConstantScheme::series_limit ? 2.0 * std::log(2.0) : 0.0;
}

cplx massive_w(const MassParam &m, cplx lambda, LambdaSide side) {
  const cplx a = m.alpha();
  const cplx x = 0.5 * (1.0 - lambda);
  return gamma_c(1.0 - a) * gamma_c(a) / (4.0 * pi) * hyp2f1_log1(a, x, hyp_side(side));
}

cplx subtraction_constant(const MassParam &m) {
  const cplx a = m.alpha();
  return gamma_c(1.0 - a) * gamma_c(a) / (4.0 * pi);
}

cplx massless_w(cplx lambda, const KernelConvention &conv, LambdaSide side) {
  cplx w = 1.0 + lambda;
  cplx L;
  if (w.imag() == 0.0 && w.real() <= 0.0) {
    if (w.real() == 0.0 || side == LambdaSide::none)
      throw CutError("massless kernel evaluated on the cut lambda <= -1");
    L = cplx(std::log(-w.real()), side == LambdaSide::above ? pi : -pi);
  } else {
    L = std::log(w);
  }
  const double shift = conv.scheme == ConstantScheme::series_limit ? -std::log(2.0) : std::log(2.0);
  return -(L + shift) / (4.0 * pi);
}

cplx general_w(int d, double nu, cplx lambda, const DsParams &params) {
  const cplx g1 = gamma_c(cplx(0.5 * (d - 1), nu));
  const cplx g2 = gamma_c(cplx(0.5 * (d - 1), -nu));
  const double pd = std::pow(pi, d);
  const cplx c = g1 * g2 * std::exp(-pi * nu) / (std::pow(2.0, d + 1) * pd);
  const cplx pref = 2.0 * c * std::exp(pi * nu) * std::pow(pi, 0.5 * d) /
                    (std::pow(params.R(), d - 1) * gamma_c(0.5 * d));
  return pref * legendre_p_int(d, nu, lambda);
}

cplx flat_remark_f(cplx lambda) {
  if (lambda.imag() == 0.0 && std::abs(lambda.real()) >= 1.0)
    throw CutError("flat remark solution evaluated on one of its cuts");
  return std::log((1.0 - lambda) / (1.0 + lambda));
}

cplx massless_w_pair(const DsPoint &x, const DsPoint &xp, const KernelConvention &conv) {
  const double lam = invariant_lambda(x, xp, DsParams(x.R()));
  if (lam < -1.0)
    return massless_w(lam, conv, pair_side(x, xp));
  return massless_w(lam, conv);
}

cplx massive_w_pair(const MassParam &m, const DsPoint &x, const DsPoint &xp) {
  const double lam = invariant_lambda(x, xp, DsParams(x.R()));
  if (lam < -1.0)
    return massive_w(m, lam, pair_side(x, xp));
  return massive_w(m, lam);
}

cplx lambda_eps(const DsPoint &x, const DsPoint &xp, double eps) {
  const DsParams p(x.R());
  const auto z = ComplexDsPoint::from_conformal(cplx(x.tau(), -eps), x.theta(), p);
  const auto zp = ComplexDsPoint::from_conformal(cplx(xp.tau(), eps), xp.theta(), p);
  return invariant_lambda(z, zp, p);
}

std::vector<double> default_eps_levels() { return {1e-2, 5e-3, 2.5e-3, 1.25e-3}; }

BoundaryValue neville_zero(const std::vector<double> &h, const std::vector<cplx> &f) {
  const std::size_t n = f.size();
  if (n == 0 || h.size() != n)
    throw DomainError("extrapolation needs matching non-empty samples");
  std::vector<cplx> p(f);
  cplx prev = p[n - 1];
  double err = n > 1 ? std::abs(f[n - 1] - f[n - 2]) : 0.0;
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i)
      p[i] = (h[i] * p[i + 1] - h[i + m] * p[i]) / (h[i] - h[i + m]);
    err = std::abs(p[0] - prev);
    prev = p[0];
  }
  return {p[0], err};
}

BoundaryValue boundary_value_w(const DsPoint &x, const DsPoint &xp, const std::vector<double> &eps_levels,
                               const KernelConvention &conv, double tol) {
  if (eps_levels.size() < 2)
    throw DomainError("at least two epsilon levels are needed");
  for (std::size_t i = 0; i < eps_levels.size(); ++i)
    if (!(eps_levels[i] > 0.0) || (i > 0 && !(eps_levels[i] < eps_levels[i - 1])))
      throw DomainError("epsilon levels must be positive and decreasing");
  std::vector<cplx> vals;
  for (double e : eps_levels)
    vals.push_back(massless_w(lambda_eps(x, xp, e), conv));
  // Successive extrapolants from growing prefixes.
  BoundaryValue best = neville_zero(eps_levels, vals);
  std::vector<double> h2(eps_levels.begin(), eps_levels.end() - 1);
  std::vector<cplx> v2(vals.begin(), vals.end() - 1);
  const BoundaryValue coarse = neville_zero(h2, v2);
  const double diff = std::abs(best.value - coarse.value);
  if (diff > 10.0 * tol * std::max(1.0, std::abs(best.value)))
    throw ConvergenceError("epsilon extrapolation did not settle", diff);
  return {best.value, diff};
}

cplx commutator_w(const DsPoint &x, const DsPoint &xp, const KernelConvention &conv) {
  const auto lv = default_eps_levels();
  return boundary_value_w(x, xp, lv, conv).value - boundary_value_w(xp, x, lv, conv).value;
}

} // namespace ds2
