#include "ds2/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "ds2/errors.hpp"

namespace ds2 {

namespace {

template <typename Real> void build_rule(int n, std::vector<Real> &nodes, std::vector<Real> &weights) {
  nodes.assign(n, Real(0));
  weights.assign(n, Real(0));
  const Real pi = Real(3.141592653589793238462643383279502884L);
  auto legendre = [n](Real x, Real &p1, Real &dp) {
    Real p0 = 1, q = x;
    for (int k = 2; k <= n; ++k) {
      const Real p2 = ((2 * k - 1) * x * q - (k - 1) * p0) / k;
      p0 = q;
      q = p2;
    }
    if (n == 1)
      p0 = 1;
    p1 = q;
    dp = n * (x * q - p0) / (x * x - 1);
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(pi * (i + Real(0.75)) / (n + Real(0.5)));
    Real p1, dp;
    for (int it = 0; it < 100; ++it) {
      legendre(x, p1, dp);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 8 * std::numeric_limits<Real>::epsilon())
        break;
    }
    legendre(x, p1, dp);
    const Real w = 2 / ((1 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    nodes[n / 2] = 0;
}

} // namespace

const GaussRule &gauss_legendre(int n) {
  if (n < 1)
    throw DomainError("Gauss rule needs at least one node");
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto &slot = cache[n];
  if (!slot) {
    slot = std::make_unique<GaussRule>();
    build_rule<double>(n, slot->nodes, slot->weights);
  }
  return *slot;
}

const GaussRuleLD &gauss_legendre_ld(int n) {
  if (n < 1)
    throw DomainError("Gauss rule needs at least one node");
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<GaussRuleLD>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto &slot = cache[n];
  if (!slot) {
    slot = std::make_unique<GaussRuleLD>();
    build_rule<long double>(n, slot->nodes, slot->weights);
  }
  return *slot;
}

GaussRule composite_gauss(double a, double b, int panels, int order) {
  const GaussRule &base = gauss_legendre(order);
  GaussRule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      r.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
      r.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return r;
}

} // namespace ds2
