#pragma once

#include <vector>

namespace ds2 {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

struct GaussRuleLD {
  std::vector<long double> nodes;
  std::vector<long double> weights;
};

// Cached; the returned reference stays valid for the program lifetime.
const GaussRule &gauss_legendre(int n);
const GaussRuleLD &gauss_legendre_ld(int n);

// Composite rule mapped to [a, b] with `panels` equal panels of `order` nodes.
GaussRule composite_gauss(double a, double b, int panels, int order);

} // namespace ds2
