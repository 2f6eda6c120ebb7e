#include "ds2/bump.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "ds2/errors.hpp"

namespace ds2 {

namespace {

using Poly = std::vector<double>;

Poly poly_derivative(const Poly &p) {
  Poly d(p.size() > 1 ? p.size() - 1 : 1, 0.0);
  for (std::size_t i = 1; i < p.size(); ++i)
    d[i - 1] = i * p[i];
  return d;
}

Poly poly_mul(const Poly &a, const Poly &b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      r[i + k] += a[i] * b[k];
  return r;
}

Poly poly_add(Poly a, const Poly &b) {
  if (b.size() > a.size())
    a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i)
    a[i] += b[i];
  return a;
}

// p^(j) = N_j(s) p(s) / (1 - s^2)^(2j)
// N_{j+1} = N_j' u^2 + 4 j s u N_j - 2 s N_j,  u = 1 - s^2
std::array<Poly, max_bump_order + 1> build_numerators() {
  std::array<Poly, max_bump_order + 1> N;
  N[0] = {1.0};
  const Poly u = {1.0, 0.0, -1.0};
  const Poly u2 = poly_mul(u, u);
  const Poly s = {0.0, 1.0};
  for (int j = 0; j < max_bump_order; ++j) {
    Poly t1 = poly_mul(poly_derivative(N[j]), u2);
    Poly t2 = poly_mul(poly_mul(s, u), N[j]);
    for (double &c : t2)
      c *= 4.0 * j;
    Poly t3 = poly_mul(s, N[j]);
    for (double &c : t3)
      c *= -2.0;
    N[j + 1] = poly_add(poly_add(t1, t2), t3);
  }
  return N;
}

const std::array<Poly, max_bump_order + 1> &numerators() {
  static const auto N = build_numerators();
  return N;
}

} // namespace

template <typename Real> Real bump_derivative_impl(int j, Real s) {
  if (j < 0 || j > max_bump_order)
    throw DomainError("bump derivative order out of range");
  if (!(std::abs(s) < Real(1)))
    return Real(0);
  const Real u = Real(1) - s * s;
  const Poly &N = numerators()[j];
  Real v = 0;
  for (std::size_t i = N.size(); i-- > 0;)
    v = v * s + Real(N[i]);
  return v * std::exp(Real(1) - Real(1) / u - Real(2 * j) * std::log(u));
}

double bump_derivative(int j, double s) { return bump_derivative_impl<double>(j, s); }

long double bump_derivative_ld(int j, long double s) { return bump_derivative_impl<long double>(j, s); }

TrigPoly::TrigPoly(cplx constant) {
  m_c[0] = constant;
  prune();
}

TrigPoly TrigPoly::mode(int m, cplx c) {
  TrigPoly t;
  t.m_c[m] = c;
  t.prune();
  return t;
}

cplx TrigPoly::eval(double u) const {
  cplx s = 0.0;
  for (const auto &[m, c] : m_c)
    s += c * std::polar(1.0, m * u);
  return s;
}

std::complex<long double> TrigPoly::eval_ld(long double u) const {
  std::complex<long double> s = 0.0L;
  for (const auto &[m, c] : m_c)
    s += std::complex<long double>(c.real(), c.imag()) * std::polar(1.0L, m * u);
  return s;
}

TrigPoly TrigPoly::derivative() const {
  TrigPoly t;
  for (const auto &[m, c] : m_c)
    if (m != 0)
      t.m_c[m] = cplx(0.0, m) * c;
  return t;
}

TrigPoly &TrigPoly::operator+=(const TrigPoly &o) {
  for (const auto &[m, c] : o.m_c)
    m_c[m] += c;
  prune();
  return *this;
}

TrigPoly TrigPoly::operator+(const TrigPoly &o) const {
  TrigPoly t = *this;
  t += o;
  return t;
}

TrigPoly TrigPoly::operator*(const TrigPoly &o) const {
  TrigPoly t;
  for (const auto &[m1, c1] : m_c)
    for (const auto &[m2, c2] : o.m_c)
      t.m_c[m1 + m2] += c1 * c2;
  t.prune();
  return t;
}

TrigPoly TrigPoly::operator*(cplx s) const {
  TrigPoly t;
  for (const auto &[m, c] : m_c)
    t.m_c[m] = c * s;
  t.prune();
  return t;
}

TrigPoly TrigPoly::cos_squared() {
  TrigPoly t;
  t.m_c[0] = 0.5;
  t.m_c[2] = 0.25;
  t.m_c[-2] = 0.25;
  return t;
}

void TrigPoly::prune() {
  for (auto it = m_c.begin(); it != m_c.end();) {
    if (it->second == cplx(0.0))
      it = m_c.erase(it);
    else
      ++it;
  }
}

} // namespace ds2
