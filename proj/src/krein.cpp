#include "ds2/krein.hpp"

#include <cmath>

#include "ds2/errors.hpp"

namespace ds2 {

KreinContext::KreinContext(const TestFunction &h, const KernelConvention &conv)
    : m_h(h), m_v0(laplace_beltrami(h) * (-4.0 * pi * h.spec().R * h.spec().R)), m_conv(conv) {
  if (std::abs(integral(h) - 1.0) > 1e-9)
    throw DomainError("reference function must have unit integral");
}

KreinContext KreinContext::build(const DsPoint &seed_center, const GridSpec &spec, const KernelConvention &conv,
                                 const HOptions &opt) {
  return KreinContext(construct_h(seed_center, spec, conv, opt).h, conv);
}

cplx krein_product(const Profile &f, const Profile &g, const KreinContext &ctx) {
  const Profile &h = ctx.h().profile();
  Profile f0 = f, g0 = g;
  f0.axpy(-f.I, h);
  g0.axpy(-g.I, h);
  const auto &c = ctx.conv();
  return pair_profiles(f0, g0, c) + pair_profiles(f, h, c) * pair_profiles(h, g, c) + std::conj(f.I) * g.I;
}

cplx krein_product(const TestFunction &f, const TestFunction &g, const KreinContext &ctx) {
  return krein_product(f.profile(), g.profile(), ctx);
}

FunctionalCheck functional_check(const TestFunction &f, const KreinContext &ctx) {
  return {krein_product(ctx.v0(), f, ctx), pair_indef(ctx.h(), f, ctx.conv())};
}

double nihil_norm(const TestFunction &f, const KreinContext &ctx) {
  const Profile &p = f.profile();
  Profile p0 = p;
  p0.axpy(-p.I, ctx.h().profile());
  const auto &c = ctx.conv();
  return std::abs(pair_profiles(p0, p0, c)) + std::norm(pair_profiles(ctx.h().profile(), p, c)) + std::norm(p.I);
}

Eigen::MatrixXcd hermitian_pinv(const Eigen::MatrixXcd &G, double cutoff, int *rank) {
  const Eigen::MatrixXcd H = 0.5 * (G + G.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const auto &ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  int r = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cutoff * top) {
      inv(i) = 1.0 / ev(i);
      ++r;
    }
  if (rank)
    *rank = r;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

GramPair krein_metric(const std::vector<TestFunction> &extra, const KreinContext &ctx, double cutoff,
                      int expected_null) {
  GramPair gp;
  gp.basis.push_back(ctx.h());
  gp.basis.push_back(ctx.v0());
  const cplx vv = krein_product(ctx.v0(), ctx.v0(), ctx);
  for (const auto &f : extra) {
    const TestFunction f0 = f - ctx.h() * integral(f);
    const cplx c = krein_product(ctx.v0(), f0, ctx) / vv;
    gp.basis.push_back(f0 - ctx.v0() * c);
  }
  const int n = static_cast<int>(gp.basis.size());
  gp.G_indef = gram_indef(gp.basis, ctx.conv());
  gp.G_krein.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      gp.G_krein(i, j) = krein_product(gp.basis[i], gp.basis[j], ctx);
      gp.G_krein(j, i) = std::conj(gp.G_krein(i, j));
    }
  const Eigen::MatrixXcd P = hermitian_pinv(gp.G_krein, cutoff, &gp.rank);
  if (gp.rank < n - expected_null)
    throw ConditioningError("Krein Gram matrix rank " + std::to_string(gp.rank) + " below expected " +
                            std::to_string(n - expected_null));
  gp.eta = P * gp.G_indef;
  return gp;
}

double v0_invariance(const GroupElement &g, const KreinContext &ctx) {
  const TestFunction d = transport(g, ctx.v0()) - ctx.v0();
  return krein_product(d, d, ctx).real();
}

} // namespace ds2
