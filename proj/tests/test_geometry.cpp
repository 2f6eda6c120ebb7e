#include <doctest.h>

#include <random>

#include "ds2/errors.hpp"
#include "ds2/geometry.hpp"
#include "oracles.hpp"

using namespace ds2;

TEST_CASE("conformal chart lands on the hyperboloid") {
  for (double R : {1.0, 2.5}) {
    const DsParams P(R);
    const DsPoint x(0.4 * R, 2.0, P);
    const Eigen::Vector3d z = x.embedding();
    CHECK(z(0) * z(0) - z(1) * z(1) - z(2) * z(2) == doctest::Approx(-R * R).epsilon(1e-14));
    const DsPoint y = DsPoint::from_embedding(z, P);
    CHECK(y.tau() == doctest::Approx(x.tau()).epsilon(1e-14));
    CHECK(y.theta() == doctest::Approx(x.theta()).epsilon(1e-14));
  }
}

TEST_CASE("theta wraps and conformal infinity is rejected") {
  const DsParams P(1.0);
  CHECK(DsPoint(0.0, -0.5, P).theta() == doctest::Approx(2.0 * pi - 0.5));
  CHECK_THROWS_AS(DsPoint(0.5 * pi, 0.0, P), DomainError);
  CHECK_THROWS_AS(DsPoint(-0.6 * pi, 0.0, P), DomainError);
}

TEST_CASE("invariant lambda matches the embedding product") {
  const DsParams P(1.3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const DsPoint x(u(rng), 3.0 * u(rng), P), y(u(rng), 3.0 * u(rng), P);
    const double ref = oracle::lambda(x.tau(), x.theta(), y.tau(), y.theta(), 1.3);
    CHECK(invariant_lambda(x, y, P) == doctest::Approx(ref).epsilon(1e-12));
  }
  const DsPoint x(0.3, 1.0, P);
  CHECK(invariant_lambda(x, x, P) == doctest::Approx(-1.0).epsilon(1e-14));
  const DsPoint anti = DsPoint::from_embedding(-x.embedding(), P);
  CHECK(invariant_lambda(x, anti, P) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("causal classes") {
  const DsParams P(1.0);
  CHECK(causal_class(DsPoint(-0.5, 0.0, P), DsPoint(0.5, 0.1, P), P) == CausalClass::timelike);
  CHECK(causal_class(DsPoint(0.0, 0.0, P), DsPoint(0.0, 1.0, P), P) == CausalClass::spacelike);
  CHECK(causal_class(DsPoint(0.0, 0.0, P), DsPoint(0.7, 0.7, P), P) == CausalClass::lightlike);
}

TEST_CASE("group elements preserve the form and act on points") {
  const Eigen::Matrix3d J = minkowski_metric();
  const GroupElement g = generators(GeneratorKind::rotation, 0.7) * generators(GeneratorKind::boost01, 0.4) *
                         generators(GeneratorKind::boost02, -0.3);
  const Eigen::Matrix3d M = g.matrix();
  CHECK((M.transpose() * J * M - J).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((g * g.inverse()).matrix().isApprox(Eigen::Matrix3d::Identity(), 1e-14));
  const DsParams P(1.0);
  const DsPoint x(0.2, 1.0, P), y(-0.3, 4.0, P);
  CHECK(invariant_lambda(group_action(g, x), group_action(g, y), P) ==
        doctest::Approx(invariant_lambda(x, y, P)).epsilon(1e-13));
  const DsPoint r = group_action(generators(GeneratorKind::rotation, 0.5), x);
  CHECK(r.tau() == doctest::Approx(0.2));
  CHECK(r.theta() == doctest::Approx(1.5));
}

TEST_CASE("improper and non-orthochronous matrices are rejected") {
  Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
  M(1, 1) = -1.0;
  CHECK_THROWS_AS(GroupElement{M}, DomainError);
  M = -Eigen::Matrix3d::Identity();
  M(1, 1) = 1.0;
  CHECK_THROWS_AS(GroupElement{M}, DomainError);
  M = Eigen::Matrix3d::Identity();
  M(0, 1) = 0.1;
  CHECK_THROWS_AS(GroupElement{M}, DomainError);
}

TEST_CASE("complex points and tube tags") {
  const DsParams P(1.0);
  const auto zb = ComplexDsPoint::from_conformal(cplx(0.2, -0.01), 1.0, P);
  const auto zf = ComplexDsPoint::from_conformal(cplx(0.2, 0.01), 1.0, P);
  CHECK(zb.tube_tag() == TubeTag::backward);
  CHECK(zf.tube_tag() == TubeTag::forward);
  CHECK(ComplexDsPoint::from_real(DsPoint(0.2, 1.0, P)).tube_tag() == TubeTag::real);
  CHECK_THROWS_AS(ComplexDsPoint({cplx(1.0), cplx(0.0), cplx(0.0)}, P), DomainError);
}
