#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "ds2/errors.hpp"
#include "ds2/testfn.hpp"
#include "oracles.hpp"

using namespace ds2;

namespace {

// R int int f sec^2(tau/R) dtau dtheta for a separable bump, plain Gauss rules.
double bump_integral_oracle(double ct, double wt, double wh, double R) {
  std::vector<double> x, w;
  oracle::gauss(400, x, w);
  double st = 0.0, sh = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double t = ct + wt * x[i];
    const double c = std::cos(t / R);
    st += w[i] * wt * oracle::bump(x[i]) / (c * c);
    sh += w[i] * wh * oracle::bump(x[i]);
  }
  return R * st * sh;
}

} // namespace

TEST_CASE("grid specs per resolution") {
  const GridSpec h = GridSpec::make(1.0, Resolution::half), s = GridSpec::make(1.0), d = GridSpec::make(1.0, Resolution::twice);
  CHECK(h.ntheta == 48);
  CHECK(s.ntheta == 96);
  CHECK(d.ntheta == 192);
  CHECK(s.ntau() == 128);
  CHECK(s.support_limit() < s.tau_window());
  CHECK(s.tau_window() < 0.5 * pi - s.delta_frac * 0.5 * pi + 1e-12);
}

TEST_CASE("bump integral against direct quadrature") {
  for (double R : {1.0, 2.0}) {
    const GridSpec spec = GridSpec::make(R);
    const TestFunction f = bump(DsPoint(0.3 * R, 1.0, DsParams(R)), 0.4 * R, 0.7, 1.0, spec);
    const double ref = bump_integral_oracle(0.3 * R, 0.4 * R, 0.7, R);
    CHECK(integral(f).real() == doctest::Approx(ref).epsilon(1e-13));
    CHECK(grid_integral(f).real() == doctest::Approx(ref).epsilon(1e-4));
    CHECK(f.eval(0.3 * R, 1.0).real() == doctest::Approx(1.0));
    CHECK(f.eval(0.3 * R, 1.0 + 0.35).real() == doctest::Approx(oracle::bump(0.5)));
  }
}

TEST_CASE("support outside the window is rejected with the side named") {
  const GridSpec spec = GridSpec::make(1.0);
  try {
    bump(DsPoint(1.0, 0.0, DsParams(1.0)), 0.4, 0.5, 1.0, spec);
    FAIL("expected SupportError");
  } catch (const SupportError &e) {
    CHECK(std::string(e.what()).find("upper") != std::string::npos);
  }
  CHECK_THROWS_AS(bump(DsPoint(-1.0, 0.0, DsParams(1.0)), 0.4, 0.5, 1.0, spec), SupportError);
}

TEST_CASE("analytic Laplacian against finite differences of the generator") {
  const double R = 1.2;
  const GridSpec spec = GridSpec::make(R);
  const TestFunction f = bump(DsPoint(0.1, 2.0, DsParams(R)), 0.5, 0.9, cplx(1.0, 0.5), spec);
  const TestFunction lf = laplace_beltrami(f);
  const double e = 1e-3;
  for (auto [t, h] : {std::pair{0.2, 2.1}, std::pair{-0.1, 1.7}, std::pair{0.4, 2.5}}) {
    auto d2 = [&](auto g) { return (-g(-2 * e) + 16.0 * g(-e) - 30.0 * g(0.0) + 16.0 * g(e) - g(2 * e)) / (12 * e * e); };
    const cplx ftt = d2([&](double s) { return f.eval(t + s, h); });
    const cplx fhh = d2([&](double s) { return f.eval(t, h + s); });
    const double c = std::cos(t / R);
    const cplx ref = c * c * (ftt - fhh / (R * R));
    CHECK(std::abs(lf.eval(t, h) - ref) < 1e-6 * std::max(1.0, std::abs(ref)));
  }
  // integral of a Laplacian vanishes
  CHECK(std::abs(integral(lf)) < 1e-12);
}

TEST_CASE("grid Laplacian fallback on a wide bump") {
  const GridSpec spec = GridSpec::make(1.0);
  const TestFunction f = bump(DsPoint(0.0, 3.0, DsParams(1.0)), 0.9, 2.5, 1.0, spec);
  const TestFunction g = TestFunction::from_grid(f.values(), spec, true);
  const TestFunction a = laplace_beltrami(f), b = laplace_beltrami(g);
  REQUIRE_FALSE(b.has_generator());
  const double scale = a.values().cwiseAbs().maxCoeff();
  CHECK((a.values() - b.values()).cwiseAbs().maxCoeff() < 1e-2 * scale);
}

TEST_CASE("transport acts by pull-back") {
  const GridSpec spec = GridSpec::make(1.0);
  const DsParams P(1.0);
  const TestFunction f = bump(DsPoint(0.1, 1.0, P), 0.3, 0.6, 1.0, spec);
  const GroupElement g = generators(GeneratorKind::boost01, 0.25) * generators(GeneratorKind::rotation, 0.4);
  const TestFunction tf = transport(g, f);
  for (auto [t, h] : {std::pair{0.1, 1.4}, std::pair{0.2, 1.2}, std::pair{0.0, 1.6}}) {
    const DsPoint x(t, h, P);
    const DsPoint y = group_action(g.inverse(), x);
    CHECK(std::abs(tf.eval(t, h) - f.eval(y.tau(), y.theta())) < 1e-12);
  }
  CHECK(integral(tf).real() == doctest::Approx(integral(f).real()).epsilon(1e-12));
  const TestFunction gt = grid_transport(g, f);
  CHECK((gt.values() - tf.values()).cwiseAbs().maxCoeff() < 3e-2);
}

TEST_CASE("decomposition against a unit-integral function") {
  const GridSpec spec = GridSpec::make(1.0);
  const DsParams P(1.0);
  const TestFunction b = bump(DsPoint(0.0, 0.0, P), 0.3, 0.6, 1.0, spec);
  const TestFunction h = b * (1.0 / integral(b));
  const TestFunction f = bump(DsPoint(0.2, 2.0, P), 0.3, 0.6, 2.0, spec);
  const Decomposition d = decompose(f, h);
  CHECK(std::abs(integral(d.f0)) < 1e-13);
  CHECK(std::abs(d.c - integral(f)) < 1e-13);
  CHECK_THROWS_AS(decompose(f, b), DomainError);
}

TEST_CASE("JSON and binary round trips") {
  const GridSpec spec = GridSpec::make(1.0, Resolution::half);
  const TestFunction f = bump(DsPoint(0.1, 1.0, DsParams(1.0)), 0.3, 0.6, cplx(1.0, -0.2), spec);
  const auto dir = std::filesystem::temp_directory_path();
  const std::string pj = (dir / "ds2_tf.json").string(), pb = (dir / "ds2_tf.bin").string();
  save_json(f, pj);
  save_binary(f, pb);
  const TestFunction a = load_json(pj), b = load_binary(pb);
  CHECK(a.values() == f.values());
  CHECK(b.values() == f.values());
  CHECK(b.spec().ntheta == spec.ntheta);
  std::remove(pj.c_str());
  std::remove(pb.c_str());
}
