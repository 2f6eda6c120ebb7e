#include "ds2/geometry.hpp"

#include <cmath>
#include <sstream>

#include "ds2/errors.hpp"

namespace ds2 {

namespace {

constexpr double two_pi = 2.0 * pi;

double wrap_angle(double theta) {
  double t = std::fmod(theta, two_pi);
  if (t < 0.0)
    t += two_pi;
  if (t >= two_pi)
    t = 0.0;
  return t;
}

TubeTag classify_tube(const std::array<cplx, 3> &z) {
  const double y0 = z[0].imag();
  const double ys = std::hypot(z[1].imag(), z[2].imag());
  const double scale = std::abs(z[0]) + std::abs(z[1]) + std::abs(z[2]);
  if (std::abs(y0) + ys <= 1e-300 + 1e-15 * scale)
    return TubeTag::real;
  if (y0 > ys)
    return TubeTag::forward;
  if (-y0 > ys)
    return TubeTag::backward;
  return TubeTag::real;
}

} // namespace

DsParams::DsParams(double radius) : m_R(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw DomainError("de Sitter radius must be positive and finite");
}

DsPoint::DsPoint(double tau, double theta, const DsParams &params)
    : m_tau(tau), m_theta(wrap_angle(theta)), m_R(params.R()) {
  if (!(std::abs(tau) < params.tau_infinity()))
    throw DomainError("conformal time outside (-pi R/2, pi R/2)");
  const double c = std::cos(tau / m_R);
  m_x << m_R * std::tan(tau / m_R), m_R * std::cos(m_theta) / c, m_R * std::sin(m_theta) / c;
}

DsPoint DsPoint::from_embedding(const Eigen::Vector3d &x, const DsParams &params) {
  const double R = params.R();
  DsPoint p;
  p.m_R = R;
  p.m_tau = R * std::atan(x(0) / R);
  p.m_theta = wrap_angle(std::atan2(x(2), x(1)));
  p.m_x = x;
  return p;
}

ComplexDsPoint::ComplexDsPoint(const std::array<cplx, 3> &z, const DsParams &params)
    : m_z(z), m_R(params.R()), m_tag(classify_tube(z)) {
  const cplx q = z[0] * z[0] - z[1] * z[1] - z[2] * z[2];
  const double scale = std::norm(z[0]) + std::norm(z[1]) + std::norm(z[2]) + m_R * m_R;
  if (std::abs(q + m_R * m_R) > 1e-12 * scale)
    throw DomainError("complex point is not on the complexified hyperboloid");
}

ComplexDsPoint ComplexDsPoint::from_conformal(cplx tau, double theta, const DsParams &params) {
  const double R = params.R();
  const cplx u = tau / R;
  const cplx c = std::cos(u);
  return ComplexDsPoint({R * std::tan(u), R * std::cos(theta) / c, R * std::sin(theta) / c}, params);
}

ComplexDsPoint ComplexDsPoint::from_real(const DsPoint &x) {
  const auto &e = x.embedding();
  return ComplexDsPoint({cplx(e(0)), cplx(e(1)), cplx(e(2))}, DsParams(x.R()));
}

GroupElement::GroupElement(const Eigen::Matrix3d &M) : m_M(M) {
  const Eigen::Matrix3d J = minkowski_metric();
  const double err = (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff() * M.cwiseAbs().maxCoeff());
  if (err > 1e-12 * scale)
    throw DomainError("matrix does not preserve the Minkowski form");
  if (std::abs(M.determinant() - 1.0) > 1e-10 * scale || !(M(0, 0) > 0.0))
    throw DomainError("matrix is not in the proper orthochronous component");
}

GroupElement GroupElement::identity() { return GroupElement(Eigen::Matrix3d::Identity()); }

GroupElement GroupElement::inverse() const {
  const Eigen::Matrix3d J = minkowski_metric();
  return GroupElement(J * m_M.transpose() * J);
}

GroupElement GroupElement::operator*(const GroupElement &other) const {
  return GroupElement(m_M * other.m_M);
}

GroupElement generators(GeneratorKind kind, double a) {
  Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
  switch (kind) {
  case GeneratorKind::rotation: {
    const double c = std::cos(a), s = std::sin(a);
    M(1, 1) = c;
    M(1, 2) = -s;
    M(2, 1) = s;
    M(2, 2) = c;
    break;
  }
  case GeneratorKind::boost01:
  case GeneratorKind::boost02: {
    const int k = kind == GeneratorKind::boost01 ? 1 : 2;
    const double ch = std::cosh(a), sh = std::sinh(a);
    M(0, 0) = ch;
    M(0, k) = sh;
    M(k, 0) = sh;
    M(k, k) = ch;
    break;
  }
  }
  return GroupElement(M);
}

cplx invariant_lambda(const ComplexDsPoint &z, const ComplexDsPoint &zp, const DsParams &params) {
  const auto &a = z.z();
  const auto &b = zp.z();
  return (a[0] * b[0] - a[1] * b[1] - a[2] * b[2]) / (params.R() * params.R());
}

double invariant_lambda(const DsPoint &x, const DsPoint &xp, const DsParams &params) {
  const auto &a = x.embedding();
  const auto &b = xp.embedding();
  return (a(0) * b(0) - a(1) * b(1) - a(2) * b(2)) / (params.R() * params.R());
}

CausalClass causal_class(const DsPoint &x, const DsPoint &xp, const DsParams &params) {
  const double lam = invariant_lambda(x, xp, params);
  if (std::abs(lam + 1.0) <= 1e-10)
    return CausalClass::lightlike;
  return lam < -1.0 ? CausalClass::timelike : CausalClass::spacelike;
}

DsPoint group_action(const GroupElement &g, const DsPoint &x) {
  return DsPoint::from_embedding(g.matrix() * x.embedding(), DsParams(x.R()));
}

Eigen::Matrix3d minkowski_metric() {
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  J(0, 0) = 1.0;
  J(1, 1) = -1.0;
  J(2, 2) = -1.0;
  return J;
}

} // namespace ds2
