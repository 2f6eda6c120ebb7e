#include <doctest.h>

#include <random>

#include "ds2/errors.hpp"
#include "ds2/kernels.hpp"
#include "oracles.hpp"

using namespace ds2;

namespace {

// cos^2(tau/R)(d_tau^2 - R^-2 d_theta^2) by fourth order differences.
template <class F> cplx box_fd(F f, double t, double h, double R) {
  const double e = 1e-3;
  auto d2 = [&](auto g) { return (-g(-2 * e) + 16.0 * g(-e) - 30.0 * g(0.0) + 16.0 * g(e) - g(2 * e)) / (12.0 * e * e); };
  const cplx ftt = d2([&](double s) { return f(t + s * R, h); }) / (R * R);
  const cplx fhh = d2([&](double s) { return f(t, h + s); });
  const double c = std::cos(t / R);
  return c * c * (ftt - fhh / (R * R));
}

} // namespace

TEST_CASE("mass parameter range") {
  CHECK_NOTHROW(MassParam(0.5));
  CHECK_NOTHROW(MassParam(cplx(0.5, -1.0)));
  CHECK_THROWS_AS(MassParam(0.0), DomainError);
  CHECK_THROWS_AS(MassParam(0.7), DomainError);
  CHECK(MassParam::from_nu(0.0).mu2R2().real() == doctest::Approx(0.25));
}

TEST_CASE("massive kernel against the Gauss series") {
  for (double l : {0.9, 0.2, -0.4}) {
    const cplx ref = oracle::gamma(0.5) * oracle::gamma(0.5) / (4.0 * pi) * oracle::hyp_half(0.5 * (1.0 - l));
    CHECK(std::abs(massive_w(MassParam(0.5), l) - ref) < 1e-13);
  }
  const cplx a(0.5, -0.7);
  for (double l : {0.5, -0.3}) {
    const cplx ref =
        oracle::gamma(a) * oracle::gamma(1.0 - a) / (4.0 * pi) * oracle::hyp_series(1.0 - a, a, 1.0, 0.5 * (1.0 - l));
    CHECK(std::abs(massive_w(MassParam(a), l) - ref) < 1e-12 * std::abs(ref));
  }
  CHECK(massive_w(MassParam(0.5), 1.0).real() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("massless kernel constants") {
  const KernelConvention series{ConstantScheme::series_limit}, paper{ConstantScheme::paper_closed_form};
  CHECK(std::abs(massless_w(1.0, series)) < 1e-16);
  for (double l : {-0.9, 0.0, 2.5}) {
    CHECK(massless_w(l, series).real() == doctest::Approx(-std::log(0.5 * (1 + l)) / (4 * pi)).epsilon(1e-14));
    CHECK(massless_w(l, paper).real() == doctest::Approx(-std::log(2.0 * (1 + l)) / (4 * pi)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(massless_w(-2.0, series), CutError);
  CHECK(massless_w(-2.0, series, LambdaSide::above).imag() == doctest::Approx(-0.25));
  CHECK(massless_w(-2.0, series, LambdaSide::below).imag() == doctest::Approx(0.25));
}

TEST_CASE("subtracted massive kernel approaches W0 linearly in alpha") {
  const KernelConvention series{};
  double prev = 0.0;
  for (double a : {1e-2, 1e-3, 1e-4}) {
    const MassParam m(a);
    double worst = 0.0;
    for (double l = -0.9; l <= 3.0; l += 0.1)
      worst = std::max(worst, std::abs(massive_w(m, l) - subtraction_constant(m) - massless_w(l, series)));
    if (prev > 0.0)
      CHECK(prev / worst == doctest::Approx(10.0).epsilon(0.05));
    prev = worst;
  }
}

TEST_CASE("Klein-Gordon equation by finite differences") {
  const double R = 1.5;
  const DsParams P(R);
  const DsPoint y(0.1, 2.0, P);
  for (cplx a : {cplx(0.3), cplx(0.5, -0.6)}) {
    const MassParam m(a);
    auto f = [&](double t, double h) { return massive_w(m, invariant_lambda(DsPoint(t, h, P), y, P)); };
    for (auto [t, h] : {std::pair{0.3, 0.5}, std::pair{-0.2, 3.5}}) {
      const cplx lhs = box_fd(f, t, h, R) + m.mu2R2() / (R * R) * f(t, h);
      CHECK(std::abs(lhs) < 1e-7);
    }
  }
  auto w0 = [&](double t, double h) { return massless_w_pair(DsPoint(t, h, P), y, KernelConvention{}); };
  for (auto [t, h] : {std::pair{0.3, 0.5}, std::pair{1.2, 2.1}, std::pair{-0.4, 5.0}})
    CHECK(std::abs(box_fd(w0, t, h, R) + 1.0 / (4 * pi * R * R)) < 1e-7);
}

TEST_CASE("general dimension formula reduces to the two-dimensional kernel") {
  const DsParams P(1.0);
  for (double nu : {0.0, 0.8})
    for (double l : {0.1, 0.3, 1.4})
      CHECK(std::abs(general_w(2, nu, l, P) - massive_w(MassParam::from_nu(nu), l)) < 1e-9);
  const DsParams P2(2.0);
  CHECK(std::abs(2.0 * general_w(2, 0.4, 0.3, P2) - massive_w(MassParam::from_nu(0.4), 0.3)) < 1e-9);
}

TEST_CASE("real pairs: sign rule, epsilon limit, commutator") {
  const DsParams P(1.0);
  const KernelConvention conv{};
  const DsPoint early(-0.4, 1.0, P), late(0.5, 1.1, P), side(0.0, 2.5, P);
  const cplx w_le = massless_w_pair(late, early, conv);
  const cplx ref = oracle::w0(0.5, 1.1, -0.4, 1.0, 1.0);
  CHECK(std::abs(w_le - ref) < 1e-14);
  CHECK(w_le.imag() == doctest::Approx(-0.25));
  CHECK(std::abs(commutator_w(late, early, conv) - cplx(0.0, -0.5)) < 1e-9);
  CHECK(std::abs(commutator_w(early, late, conv) - cplx(0.0, 0.5)) < 1e-9);
  CHECK(std::abs(commutator_w(early, side, conv)) < 1e-9);
  for (const DsPoint *q : {&late, &side}) {
    const BoundaryValue bv = boundary_value_w(early, *q, default_eps_levels(), conv);
    CHECK(std::abs(bv.value - massless_w_pair(early, *q, conv)) < 1e-6);
  }
}

TEST_CASE("Neville extrapolation is exact on polynomials") {
  const std::vector<double> h = {0.4, 0.2, 0.1, 0.05};
  std::vector<cplx> f;
  for (double x : h)
    f.push_back(cplx(2.0 - 3.0 * x + x * x * x, x));
  const BoundaryValue b = neville_zero(h, f);
  CHECK(std::abs(b.value - 2.0) < 1e-13);
}

TEST_CASE("flat remark function and its cut") {
  CHECK(std::abs(flat_remark_f(0.0)) < 1e-16);
  CHECK_THROWS_AS(flat_remark_f(1.5), CutError);
  const cplx up = flat_remark_f(cplx(1.5, 1e-12)), dn = flat_remark_f(cplx(1.5, -1e-12));
  CHECK(std::abs(up - dn) == doctest::Approx(2 * pi).epsilon(1e-9));
}
