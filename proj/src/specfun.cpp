#include "ds2/specfun.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "ds2/errors.hpp"
#include "ds2/quadrature.hpp"

namespace ds2 {

namespace {

constexpr double pi = 3.14159265358979323846;

// Lanczos coefficients, g = 7, n = 9.
constexpr std::array<double, 9> lanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx lanczos_sum(cplx zm1) {
  cplx x = lanczos[0];
  for (int i = 1; i < 9; ++i)
    x += lanczos[i] / (zm1 + double(i));
  return x;
}

cplx log_cut(cplx w, CutSide side) {
  // log(w) for w near the negative real axis, honouring an infinitesimal side.
  if (w.imag() == 0.0 && w.real() < 0.0) {
    if (side == CutSide::above)
      return {std::log(-w.real()), -pi};
    if (side == CutSide::below)
      return {std::log(-w.real()), pi};
  }
  return std::log(w);
}

void check_cut(cplx x, CutSide side) {
  if (x.imag() == 0.0 && x.real() >= 1.0 && side == CutSide::none)
    throw CutError("hypergeometric argument on the cut [1, inf) without a side");
  if (x.imag() == 0.0 && x.real() == 1.0)
    throw CutError("hypergeometric argument at the logarithmic branch point x = 1");
}

} // namespace

cplx gamma_c(cplx z) {
  if (is_nonpositive_integer(z))
    throw PoleError("Gamma pole at a non-positive integer");
  if (z.real() < 0.5)
    return pi / (std::sin(pi * z) * gamma_c(1.0 - z));
  const cplx zm1 = z - 1.0;
  const cplx t = zm1 + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, zm1 + 0.5) * std::exp(-t) * lanczos_sum(zm1);
}

cplx lgamma_c(cplx z) {
  if (is_nonpositive_integer(z))
    throw PoleError("log-Gamma pole at a non-positive integer");
  if (z.real() < 0.5)
    return std::log(pi) - std::log(std::sin(pi * z)) - lgamma_c(1.0 - z);
  const cplx zm1 = z - 1.0;
  const cplx t = zm1 + 7.5;
  return 0.5 * std::log(2.0 * pi) + (zm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(zm1));
}

cplx digamma_c(cplx z) {
  if (is_nonpositive_integer(z))
    throw PoleError("digamma pole at a non-positive integer");
  if (z.real() < 0.5)
    return digamma_c(1.0 - z) - pi / std::tan(pi * z);
  cplx acc = 0.0;
  while (std::abs(z) < 12.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const cplx w = 1.0 / (z * z);
  // Bernoulli tail B_2k / (2k z^2k)
  const cplx tail =
      w * (1.0 / 12 - w * (1.0 / 120 - w * (1.0 / 252 - w * (1.0 / 240 - w * (1.0 / 132 - w * (691.0 / 32760 - w / 12.0))))));
  return acc + std::log(z) - 0.5 / z - tail;
}

namespace hyp {

cplx series(cplx a, cplx b, cplx c, cplx x) {
  if (std::abs(x) >= 1.0)
    throw DomainError("hypergeometric series outside its disk of convergence");
  cplx term = 1.0, sum = 1.0;
  for (int n = 0; n < 5000; ++n) {
    term *= (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * x;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && n > 2)
      return sum;
  }
  throw ConvergenceError("hypergeometric series did not converge", std::abs(term));
}

cplx log_connection(cplx alpha, cplx x, CutSide side) {
  check_cut(x, side);
  const cplx w = 1.0 - x;
  if (std::abs(w) >= 1.0)
    throw DomainError("logarithmic connection used outside |1 - x| < 1");
  const cplx a = 1.0 - alpha, b = alpha;
  const cplx L = log_cut(w, side);
  // psi values advanced by the recurrence psi(s+1) = psi(s) + 1/s.
  cplx psi1 = digamma_c(1.0), psia = digamma_c(a), psib = digamma_c(b);
  cplx coef = 1.0, wn = 1.0, sum = 0.0;
  for (int n = 0; n < 5000; ++n) {
    const cplx term = coef * wn * (2.0 * psi1 - psia - psib - L);
    sum += term;
    if (n > 2 && std::abs(term) <= 1e-17 * std::abs(sum))
      return std::sin(pi * alpha) / pi * sum;
    coef *= (a + double(n)) * (b + double(n)) / (double(n + 1) * double(n + 1));
    wn *= w;
    psi1 += 1.0 / double(n + 1);
    psia += 1.0 / (a + double(n));
    psib += 1.0 / (b + double(n));
  }
  throw ConvergenceError("logarithmic connection series did not converge", 0.0);
}

cplx pfaff(cplx alpha, cplx x) {
  if (x.imag() == 0.0 && x.real() >= 1.0)
    throw CutError("Pfaff route on the cut");
  const cplx y = x / (x - 1.0);
  return std::pow(1.0 - x, alpha - 1.0) * series(1.0 - alpha, 1.0 - alpha, 1.0, y);
}

cplx continuation(cplx alpha, cplx x, CutSide side) {
  check_cut(x, side);
  const cplx a = 1.0 - alpha, b = alpha, c = 1.0;
  const bool lower = x.imag() < 0.0 || (x.imag() == 0.0 && side == CutSide::below);
  cplx z = lower ? cplx(0.5, -0.5) : cplx(0.5, 0.5);
  cplx y = series(a, b, c, z);
  cplx dy = a * b / c * series(a + 1.0, b + 1.0, c + 1.0, z);
  const cplx ab = a * b;
  const cplx q1 = -(a + b + 1.0);
  for (int step = 0; step < 10000; ++step) {
    const cplx rest = x - z;
    if (std::abs(rest) == 0.0)
      return y;
    const double radius = std::min(std::abs(z), std::abs(1.0 - z));
    double h = 0.5 * radius;
    const bool last = std::abs(rest) <= h;
    const cplx t = last ? rest : rest / std::abs(rest) * h;
    const cplx p0 = z * (1.0 - z), p1 = 1.0 - 2.0 * z;
    const double p2 = -1.0;
    const cplx q0 = c - (a + b + 1.0) * z;
    cplx ykm = y, yk = dy; // y_0, y_1 in Taylor coefficients
    cplx val = ykm + yk * t, der = yk;
    cplx tp = t; // t^k for k = 1
    for (int k = 0; k < 400; ++k) {
      const double kk = k;
      const cplx ynext = -((p1 * kk * (kk + 1.0) + q0 * (kk + 1.0)) * yk +
                           (p2 * kk * (kk - 1.0) + q1 * kk - ab) * ykm) /
                         (p0 * (kk + 2.0) * (kk + 1.0));
      der += (kk + 2.0) * ynext * tp;
      tp *= t;
      val += ynext * tp;
      ykm = yk;
      yk = ynext;
      if (k > 4 && std::abs(ynext * tp) <= 1e-18 * std::abs(val) && std::abs(ykm * tp / t) <= 1e-18 * std::abs(val))
        break;
    }
    y = val;
    dy = der;
    z += t;
    if (last)
      return y;
  }
  throw ConvergenceError("hypergeometric continuation exceeded its step budget", 0.0);
}

} // namespace hyp

HypRoute hyp2f1_route(cplx x) {
  if (std::abs(x) <= 0.75)
    return HypRoute::series;
  if (std::abs(1.0 - x) <= 0.75)
    return HypRoute::log_connection;
  if (std::abs(x) <= 0.75 * std::abs(x - 1.0))
    return HypRoute::pfaff;
  return HypRoute::continuation;
}

cplx hyp2f1_log1(cplx alpha, cplx x, CutSide side) {
  check_cut(x, side);
  switch (hyp2f1_route(x)) {
  case HypRoute::series:
    return hyp::series(1.0 - alpha, alpha, 1.0, x);
  case HypRoute::log_connection:
    return hyp::log_connection(alpha, x, side);
  case HypRoute::pfaff:
    return hyp::pfaff(alpha, x);
  case HypRoute::continuation:
    break;
  }
  return hyp::continuation(alpha, x, side);
}

cplx legendre_p_int(int d, double nu, cplx lambda, double rel_tol) {
  if (d < 2)
    throw DomainError("Legendre integral representation needs d >= 2");
  if (lambda.imag() == 0.0 && lambda.real() <= -1.0)
    throw CutError("Legendre function argument on the cut (-inf, -1]");
  const cplx s = std::sqrt(lambda - 1.0) * std::sqrt(lambda + 1.0);
  if ((lambda + s).real() <= 0.0 || (lambda - s).real() <= 0.0)
    throw DomainError("integral representation needs lambda +- sqrt(lambda^2-1) in the right half plane");
  const cplx expo(-0.5 * (d - 1), nu);
  auto integrand = [&](double t) {
    const cplx base = lambda + s * std::cos(t);
    const double w = d == 2 ? 1.0 : std::pow(std::sin(t), d - 2);
    return std::exp(expo * std::log(base)) * w;
  };
  const GaussRule &rule = gauss_legendre(16);
  auto level = [&](int panels) {
    cplx acc = 0.0;
    const double hw = 0.5 * pi / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = (2 * p + 1) * hw;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * hw * integrand(mid + hw * rule.nodes[i]);
    }
    return acc;
  };
  const double norm = std::exp((lgamma_c(0.5 * d) - 0.5 * std::log(pi) - lgamma_c(0.5 * (d - 1))).real());
  cplx prev = level(1);
  double diff = 0.0;
  for (int panels = 2; panels <= 4096; panels *= 2) {
    const cplx cur = level(panels);
    diff = std::abs(cur - prev);
    if (diff <= rel_tol * std::abs(cur))
      return norm * cur;
    prev = cur;
  }
  throw ConvergenceError("Legendre integral did not reach the requested tolerance", diff / std::abs(prev));
}

} // namespace ds2
