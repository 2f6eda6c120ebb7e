#include <doctest.h>

#include "ds2/current.hpp"
#include "ds2/errors.hpp"
#include "oracles.hpp"

using namespace ds2;

namespace {

// int W0(x, y) g(y) dsigma(y) for a unit bump g, by tensor Gauss quadrature.
cplx smear_oracle(double t, double h, double ct, double wt, double ch, double wh, double R, int n = 80) {
  std::vector<double> x, w;
  oracle::gauss(n, x, w);
  cplx s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double tt = ct + wt * x[i], hh = ch + wh * x[k];
      const double c = std::cos(tt / R);
      s += w[i] * w[k] * wt * wh * R / (c * c) * oracle::bump(x[i]) * oracle::bump(x[k]) * oracle::w0(t, h, tt, hh, R);
    }
  return s;
}

TestFunction unit_bump(double ct, double wt, double ch, double wh, const GridSpec &spec) {
  return bump(DsPoint(ct, ch, DsParams(spec.R)), wt, wh, 1.0, spec);
}

} // namespace

TEST_CASE("grid derivatives") {
  const EvalGrid grid = EvalGrid::make(1.0, 1.0, 41, 16);
  Eigen::MatrixXcd a(41, 16), da(41, 16), dh(41, 16);
  for (int i = 0; i < 41; ++i)
    for (int k = 0; k < 16; ++k) {
      const double t = grid.tau[i], h = grid.theta[k];
      a(i, k) = std::pow(t, 5) - 2.0 * t * t + std::sin(3.0 * h);
      da(i, k) = 5.0 * std::pow(t, 4) - 4.0 * t;
      dh(i, k) = 3.0 * std::cos(3.0 * h);
    }
  const Eigen::MatrixXcd d = diff_tau(a, grid.dtau());
  CHECK((d.middleRows(4, 33) - da.middleRows(4, 33)).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(d.topRows(4).cwiseAbs().maxCoeff() == 0.0);
  CHECK((diff_theta(a) - dh).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::MatrixXcd d2 = diff_theta(a, 2);
  for (int i = 0; i < 41; ++i)
    for (int k = 0; k < 16; ++k)
      CHECK(std::abs(d2(i, k) + 9.0 * std::sin(3.0 * grid.theta[k])) < 1e-11);
}

TEST_CASE("smeared field against direct quadrature") {
  for (double R : {1.0, 2.0}) {
    const GridSpec spec = GridSpec::make(R);
    const TestFunction g = unit_bump(0.1 * R, 0.3 * R, 1.0, 0.5, spec);
    const SmearedField sf = smear(g, EvalGrid::make(spec, 65, 32));
    // spacelike, timelike future and timelike past of the support
    for (auto [t, h] : {std::pair{0.0, 3.5}, std::pair{1.15, 1.0}, std::pair{-0.85, 0.95}}) {
      INFO(t, " ", h);
      const cplx ref = smear_oracle(t * R, h, 0.1 * R, 0.3 * R, 1.0, 0.5, R);
      CHECK(std::abs(sf.jet(t * R, h).u - ref) < 1e-9 * std::abs(ref));
    }
    CHECK(std::abs(sf.c0() - integral(g)) < 1e-15);
  }
}

TEST_CASE("smearing is linear") {
  const GridSpec spec = GridSpec::make(1.0);
  const EvalGrid grid = EvalGrid::make(spec, 33, 16);
  const TestFunction g1 = unit_bump(0.1, 0.3, 1.0, 0.5, spec), g2 = unit_bump(-0.2, 0.25, 2.5, 0.7, spec);
  const cplx s(0.4, 1.3);
  const SmearedField a = smear(g1, grid), b = smear(g2, grid), c = smear(g1 + g2 * s, grid);
  CHECK((c.values() - a.values() - s * b.values()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("closing constant") {
  CHECK(kappa_value(KappaConvention::derived, 2.0) == doctest::Approx(-1.0 / (4.0 * pi)));
  CHECK(kappa_value(KappaConvention::paper, 2.0) == doctest::Approx(1.0 / (8.0 * pi)));
}

TEST_CASE("corrected current is closed and carries a conserved charge") {
  for (double R : {1.0, 2.0}) {
    const GridSpec spec = GridSpec::make(R);
    const TestFunction g = unit_bump(0.1 * R, 0.5 * R, 1.0, 1.0, spec) + unit_bump(-0.2 * R, 0.4 * R, 4.0, 0.8, spec);
    const SmearedField sf = smear(g, EvalGrid::make(spec));
    CHECK(smeared_box_residual(sf).relative() < 1e-4);
    const CorrectedCurrent w(sf, KappaConvention::derived);
    CHECK(closedness_residual(w.on_grid()).relative() < 1e-3);
    const std::vector<cplx> J = slice_charge(w, {-0.5 * R, 0.0, 0.3 * R, 0.6 * R});
    CHECK(relative_spread(J) < 1e-8);
    CHECK(std::abs(J[1] + cplx(0.0, 1.0) * sf.c0() / (16.0 * pi)) < 1e-8 * std::abs(sf.c0()));
    // without the correction the charge drifts
    const CorrectedCurrent bare(sf, 0.0);
    CHECK(relative_spread(slice_charge(bare, {-0.5 * R, 0.0, 0.3 * R, 0.6 * R})) > 0.1);
  }
}

TEST_CASE("zero-integral sources have no charge and no winding") {
  const GridSpec spec = GridSpec::make(1.0);
  const TestFunction g1 = unit_bump(0.1, 0.5, 1.0, 1.0, spec), g2 = unit_bump(-0.2, 0.4, 4.0, 0.8, spec);
  const TestFunction g = g1 - g2 * (integral(g1) / integral(g2));
  const SmearedField sf = smear(g, EvalGrid::make(spec));
  CHECK(std::abs(sf.c0()) < 1e-13);
  const CorrectedCurrent w(sf, KappaConvention::derived);
  for (cplx J : slice_charge(w, {-0.4, 0.0, 0.5}))
    CHECK(std::abs(J) < 1e-10);
  const DualField d = dual_field(w, 16, 0);
  for (cplx c : d.winding)
    CHECK(std::abs(c) < 1e-9);
  CHECK(d.path_mismatch < 1e-9);
}

TEST_CASE("winding of the dual field") {
  const GridSpec spec = GridSpec::make(1.0);
  const TestFunction g = unit_bump(0.1, 0.5, 1.0, 1.0, spec);
  const SmearedField sf = smear(g, EvalGrid::make(spec));
  const CorrectedCurrent w(sf, KappaConvention::derived);
  const DualField d = dual_field(w, 16, 0);
  for (cplx c : d.winding)
    CHECK(std::abs(c - cplx(0.0, 0.5) * sf.c0()) < 1e-8 * std::abs(sf.c0()));
  CHECK(d.path_mismatch < 1e-9);
  CHECK(d.dropped_term_coefficient > 0.0);
}

TEST_CASE("commutator smearing") {
  const GridSpec spec = GridSpec::make(1.0);
  const TestFunction g = unit_bump(0.1, 0.5, 1.0, 1.0, spec);
  const SmearedField sc = smear_commutator(g, EvalGrid::make(spec));
  // spacelike to the support the commutator function vanishes
  CHECK(std::abs(sc.jet(0.0, 1.0 + pi).u) < 1e-10);
  const CorrectedCurrent w(sc, KappaConvention::derived);
  const std::vector<cplx> J = slice_charge(w, {-0.3, 0.4});
  CHECK(std::abs(J[0] + cplx(0.0, 1.0) * integral(g) / (8.0 * pi)) < 1e-8);
  CHECK(relative_spread(J) < 1e-8);
}

TEST_CASE("slices outside the grid are rejected") {
  const GridSpec spec = GridSpec::make(1.0);
  const SmearedField sf = smear(unit_bump(0.1, 0.5, 1.0, 1.0, spec), EvalGrid::make(spec, 33, 16));
  const CorrectedCurrent w(sf, KappaConvention::derived);
  CHECK_THROWS_AS(slice_charge(w, {1.5}), DomainError);
}
