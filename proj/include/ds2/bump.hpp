#pragma once

#include <complex>
#include <map>

namespace ds2 {

using cplx = std::complex<double>;

// j-th derivative of p(s) = exp(1 - 1/(1 - s^2)) on (-1, 1), zero outside.
double bump_derivative(int j, double s);
long double bump_derivative_ld(int j, long double s);

inline constexpr int max_bump_order = 16;

// Finite Fourier polynomial sum_m c_m e^{i m u} in u = tau / R.
class TrigPoly {
public:
  TrigPoly() = default;
  explicit TrigPoly(cplx constant);

  static TrigPoly mode(int m, cplx c);

  cplx eval(double u) const;
  std::complex<long double> eval_ld(long double u) const;
  // d/du
  TrigPoly derivative() const;
  bool empty() const { return m_c.empty(); }
  const std::map<int, cplx> &coeffs() const { return m_c; }

  TrigPoly &operator+=(const TrigPoly &o);
  TrigPoly operator+(const TrigPoly &o) const;
  TrigPoly operator*(const TrigPoly &o) const;
  TrigPoly operator*(cplx s) const;

  // cos^2 u = (2 + e^{2iu} + e^{-2iu}) / 4
  static TrigPoly cos_squared();

private:
  void prune();
  std::map<int, cplx> m_c;
};

} // namespace ds2
