#include <doctest.h>

#include "ds2/fock.hpp"

using namespace ds2;

namespace {

double max_abs(const Eigen::MatrixXcd &A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

struct Fixture {
  GridSpec spec = GridSpec::make(1.0);
  KreinContext ctx = KreinContext::build(DsPoint(0.1, 1.0, DsParams(1.0)), spec, KernelConvention{});
  std::vector<TestFunction> basis;
  GramPair gp;
  std::unique_ptr<OneParticleSpace> ops;
  FockRep rep{5, 4};
  Fixture() {
    const double c[6][4] = {{0.2, 0.25, 0.3, 0.5},  {-0.3, 0.2, 1.7, 0.6}, {0.0, 0.3, 3.1, 0.45},
                            {0.4, 0.22, 4.4, 0.7}, {-0.1, 0.28, 5.5, 0.5}, {0.3, 0.2, 2.4, 0.4}};
    for (const auto &b : c)
      basis.push_back(bump(DsPoint(b[0], b[2], DsParams(1.0)), b[1], b[3], 1.0, spec));
    gp = krein_metric(basis, ctx);
    ops = std::make_unique<OneParticleSpace>(gp, ctx, 5);
  }
};

const Fixture &fixture() {
  static const Fixture f;
  return f;
}

} // namespace

TEST_CASE("occupation basis") {
  const FockRep rep(6, 4);
  CHECK(rep.dim() == 210);
  for (int s = 0; s < rep.dim(); ++s)
    CHECK(rep.index(rep.states()[s]) == s);
  CHECK(rep.vacuum().norm() == 1.0);
  CHECK(rep.occupation(rep.index({1, 0, 2, 0, 0, 1})) == 4);
}

TEST_CASE("ladder algebra below the cutoff") {
  const FockRep rep(3, 4);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const Eigen::MatrixXcd c = rep.lower(i) * rep.raise(k) - rep.raise(k) * rep.lower(i);
      Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(rep.dim(), rep.dim());
      if (i == k)
        want.setIdentity();
      const Eigen::MatrixXcd P = rep.sector(3);
      CHECK(max_abs(P * (c - want) * P) < 1e-14);
      CHECK(max_abs(rep.raise(i) * rep.raise(k) - rep.raise(k) * rep.raise(i)) < 1e-14);
    }
  const Eigen::MatrixXcd P2 = rep.sector(2);
  CHECK(max_abs(P2 * P2 - P2) == 0.0);
  CHECK(std::abs(P2.trace() - 10.0) < 1e-15);
}

TEST_CASE("one-particle space is Krein orthonormal") {
  const auto &F = fixture();
  const OneParticleSpace &ops = *F.ops;
  const int n = ops.dim();
  const Eigen::MatrixXcd K = ops.coefficients().adjoint() * F.gp.G_krein.topLeftCorner(n, n) * ops.coefficients();
  CHECK(max_abs(K - Eigen::MatrixXcd::Identity(n, n)) < 1e-8);
  CHECK(max_abs(ops.eta() * ops.eta() - Eigen::MatrixXcd::Identity(n, n)) < 1e-8);
  CHECK(std::abs(ops.indef(ops.v0(), ops.h()) - 1.0) < 1e-9);
  CHECK(std::abs(ops.indef(ops.v0(), ops.v0())) < 1e-9);
}

TEST_CASE("fields reproduce the two-point function and its commutator") {
  const auto &F = fixture();
  const OneParticleSpace &ops = *F.ops;
  const FockRep &rep = F.rep;
  const Eigen::VectorXcd vac = rep.vacuum();
  const Eigen::VectorXcd f = ops.coords(F.basis[1]), g = ops.coords(F.basis[4]);
  const Eigen::MatrixXcd pf = field_op(f, rep, ops.eta()), pg = field_op(g, rep, ops.eta());
  CHECK(std::abs(vac.dot(pf * pg * vac) - ops.indef(f, g)) < 1e-13);
  const cplx c = ops.indef(f, g) - ops.indef(g, f);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(rep.dim(), rep.dim());
  CHECK(sector_norm(pf * pg - pg * pf - c * I, rep, rep.max_particles() - 2) < 1e-12);
}

TEST_CASE("charge") {
  const auto &F = fixture();
  const OneParticleSpace &ops = *F.ops;
  const FockRep &rep = F.rep;
  const Eigen::MatrixXcd Q = charge(rep, ops);
  // self-adjoint for the indefinite Fock product
  const Eigen::MatrixXcd etaF = rep.second_quantize(ops.eta());
  CHECK(sector_norm(etaF * Q.adjoint() * etaF - Q, rep, rep.max_particles() - 1) < 1e-12);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(rep.dim(), rep.dim());
  for (int k : {0, 2, 5}) {
    const Eigen::MatrixXcd pf = field_op(ops.coords(F.basis[k]), rep, ops.eta());
    const cplx If = integral(F.basis[k]);
    CHECK(sector_norm(Q * pf - pf * Q + cplx(0.0, 1.0) * If * I, rep, rep.max_particles() - 2) < 1e-9);
  }
  const Eigen::MatrixXcd pp = phi_plus(rep, ops), pm = phi_minus(rep, ops);
  CHECK(max_abs(Q - cplx(0.0, 1.0) * (pp - pm)) < 1e-14);
  CHECK(sector_norm(pp * pm - pm * pp, rep, rep.max_particles() - 2) < 1e-12);
}

TEST_CASE("gauge unitaries") {
  const auto &F = fixture();
  const FockRep &rep = F.rep;
  const Eigen::MatrixXcd Q = charge(rep, *F.ops);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(rep.dim(), rep.dim());
  CHECK(max_abs(gauge_unitary(0.0, Q, rep).U - I) < 1e-15);
  const GaugeUnitary g = gauge_unitary(0.3, Q, rep);
  const Eigen::MatrixXcd etaF = rep.second_quantize(F.ops->eta());
  CHECK(sector_norm(g.U.adjoint() * etaF * g.U - etaF, rep, rep.max_particles() - 2) < 1e-8);
  const Eigen::MatrixXcd pf = field_op(F.ops->coords(F.basis[3]), rep, F.ops->eta());
  const cplx If = integral(F.basis[3]);
  const Eigen::MatrixXcd Ui = gauge_unitary(-0.3, Q, rep).U;
  CHECK(sector_norm(g.U * pf * Ui - pf - 0.3 * If * I, rep, rep.max_particles() - 3) < 1e-8);
}

TEST_CASE("physical subspace") {
  const auto &F = fixture();
  const FockRep &rep = F.rep;
  const OneParticleSpace &ops = *F.ops;
  const Eigen::MatrixXcd P = physical_projector(rep, ops);
  CHECK(max_abs(P * P - P) < 1e-10);
  CHECK(max_abs(P - P.adjoint()) < 1e-12);
  const Eigen::VectorXcd vac = rep.vacuum();
  CHECK((P * vac - vac).norm() < 1e-12);
  const Eigen::VectorXcd v1 = rep.creator(ops.v0()) * vac;
  const Eigen::VectorXcd h1 = rep.creator(ops.h()) * vac;
  CHECK((P * v1 - v1).norm() < 1e-9 * v1.norm());
  CHECK((P * h1 - h1).norm() > 0.1 * h1.norm());
  const int n = ops.dim();
  CHECK(physical_invariance_defect(Eigen::MatrixXcd::Identity(n, n), rep, ops) < 1e-12);
}
