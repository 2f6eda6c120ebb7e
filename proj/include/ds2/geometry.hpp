#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace ds2 {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Radius of the two-dimensional de Sitter hyperboloid x0^2 - x1^2 - x2^2 = -R^2.
class DsParams {
public:
  explicit DsParams(double radius = 1.0);
  double R() const { return m_R; }
  // Conformal infinity sits at |tau| = pi R / 2.
  double tau_infinity() const { return 0.5 * pi * m_R; }

private:
  double m_R;
};

// A real point of X2 in conformal (tau, theta) and embedding coordinates.
class DsPoint {
public:
  DsPoint(double tau, double theta, const DsParams &params);
  static DsPoint from_embedding(const Eigen::Vector3d &x, const DsParams &params);

  double tau() const { return m_tau; }
  double theta() const { return m_theta; }
  const Eigen::Vector3d &embedding() const { return m_x; }
  double R() const { return m_R; }

private:
  DsPoint() = default;
  double m_tau = 0.0;
  double m_theta = 0.0;
  double m_R = 1.0;
  Eigen::Vector3d m_x;
};

enum class TubeTag { real, forward, backward };

// A point of the complexified hyperboloid, tagged by which tube (if any)
// its imaginary part places it in.
class ComplexDsPoint {
public:
  ComplexDsPoint(const std::array<cplx, 3> &z, const DsParams &params);
  // Complexified conformal coordinates: tau may carry an imaginary part.
  static ComplexDsPoint from_conformal(cplx tau, double theta, const DsParams &params);
  static ComplexDsPoint from_real(const DsPoint &x);

  const std::array<cplx, 3> &z() const { return m_z; }
  TubeTag tube_tag() const { return m_tag; }
  double R() const { return m_R; }

private:
  std::array<cplx, 3> m_z;
  double m_R;
  TubeTag m_tag;
};

// Element of SO0(1,2) acting linearly on the ambient space.
class GroupElement {
public:
  explicit GroupElement(const Eigen::Matrix3d &M);
  static GroupElement identity();

  const Eigen::Matrix3d &matrix() const { return m_M; }
  GroupElement inverse() const;
  GroupElement operator*(const GroupElement &other) const;

private:
  Eigen::Matrix3d m_M;
};

enum class GeneratorKind { rotation, boost01, boost02 };

GroupElement generators(GeneratorKind kind, double parameter);

enum class CausalClass { timelike, lightlike, spacelike };

// lambda = z.z'/R^2 with the ambient Minkowski product.
cplx invariant_lambda(const ComplexDsPoint &z, const ComplexDsPoint &zp, const DsParams &params);
double invariant_lambda(const DsPoint &x, const DsPoint &xp, const DsParams &params);

CausalClass causal_class(const DsPoint &x, const DsPoint &xp, const DsParams &params);

DsPoint group_action(const GroupElement &g, const DsPoint &x);

// Minkowski metric J = diag(1,-1,-1).
Eigen::Matrix3d minkowski_metric();

} // namespace ds2
