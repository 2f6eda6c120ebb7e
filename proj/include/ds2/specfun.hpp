#pragma once

#include <complex>

namespace ds2 {

using cplx = std::complex<double>;

// Side of the real cut [1, inf) from which a boundary value is taken.
enum class CutSide { none, above, below };

cplx gamma_c(cplx z);
cplx lgamma_c(cplx z);
cplx digamma_c(cplx z);

// F(1-alpha, alpha; 1; x), continued to the plane cut along [1, inf).
cplx hyp2f1_log1(cplx alpha, cplx x, CutSide side = CutSide::none);

enum class HypRoute { series, log_connection, pfaff, continuation };

HypRoute hyp2f1_route(cplx x);

// Individual evaluation routes, exposed so overlaps can be cross-checked.
namespace hyp {
// Plain Gauss series for F(a, b; c; x), |x| < 1.
cplx series(cplx a, cplx b, cplx c, cplx x);
// c - a - b = 0 connection around x = 1 for the (1-alpha, alpha; 1) family.
cplx log_connection(cplx alpha, cplx x, CutSide side = CutSide::none);
// Pfaff transform: (1-x)^(alpha-1) F(1-alpha, 1-alpha; 1; x/(x-1)).
cplx pfaff(cplx alpha, cplx x);
// Taylor stepping of the hypergeometric equation from 0.5 +- 0.5i.
cplx continuation(cplx alpha, cplx x, CutSide side = CutSide::none);
} // namespace hyp

// Gamma(d/2)/(sqrt(pi) Gamma((d-1)/2)) int_0^pi (lambda + sqrt(lambda^2-1) cos t)^(-(d-1)/2 + i nu) sin^(d-2) t dt
cplx legendre_p_int(int d, double nu, cplx lambda, double rel_tol = 1e-10);

} // namespace ds2
