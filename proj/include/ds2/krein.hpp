#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ds2/pairing.hpp"

namespace ds2 {

class KreinContext {
public:
  KreinContext(const TestFunction &h, const KernelConvention &conv);
  static KreinContext build(const DsPoint &seed_center, const GridSpec &spec, const KernelConvention &conv,
                            const HOptions &opt = {});

  const TestFunction &h() const { return m_h; }
  const TestFunction &v0() const { return m_v0; }
  const KernelConvention &conv() const { return m_conv; }
  double R() const { return m_h.spec().R; }

private:
  TestFunction m_h;
  TestFunction m_v0;
  KernelConvention m_conv;
};

// (f, g) = <f0, g0> + <f, h><h, g> + conj(int f) int g
cplx krein_product(const TestFunction &f, const TestFunction &g, const KreinContext &ctx);
cplx krein_product(const Profile &f, const Profile &g, const KreinContext &ctx);

struct FunctionalCheck {
  cplx lhs; // (v0, f)
  cplx rhs; // <h, f>
};
FunctionalCheck functional_check(const TestFunction &f, const KreinContext &ctx);

// |<f0, f0>| + |<h, f>|^2 + |int f|^2; vanishes exactly on the null ideal.
double nihil_norm(const TestFunction &f, const KreinContext &ctx);

struct GramPair {
  std::vector<TestFunction> basis;
  Eigen::MatrixXcd G_indef;
  Eigen::MatrixXcd G_krein;
  Eigen::MatrixXcd eta;
  int rank = 0;
};

// basis[0] = h, basis[1] = v0; the remaining inputs are projected into the
// zero-integral space and made Krein-orthogonal to v0 before assembly.
GramPair krein_metric(const std::vector<TestFunction> &extra, const KreinContext &ctx, double cutoff = 1e-8,
                      int expected_null = 0);

// Krein norm (d, d) of d = alpha_g v0 - v0.
double v0_invariance(const GroupElement &g, const KreinContext &ctx);

// Hermitian pseudo-inverse with relative spectral cutoff; returns rank via out-param.
Eigen::MatrixXcd hermitian_pinv(const Eigen::MatrixXcd &G, double cutoff, int *rank = nullptr);

} // namespace ds2
