#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ds2/expansion.hpp"
#include "ds2/geometry.hpp"

namespace ds2 {

enum class Resolution { half, standard, twice };

// Sampling grid over the chart window |tau| <= window_frac * pi R / 2.
// theta: uniform periodic nodes 2 pi k / ntheta; tau: composite Gauss-Legendre.
struct GridSpec {
  double R = 1.0;
  int ntheta = 96;
  int tau_panels = 32;
  int tau_order = 4;
  double window_frac = 0.8;
  double delta_frac = 0.15;
  int margin_cells = 4;
  ProfileOptions profile;

  static GridSpec make(double R, Resolution res = Resolution::standard);

  int ntau() const { return tau_panels * tau_order; }
  double tau_window() const { return window_frac * 0.5 * pi * R; }
  // Largest |tau| a support may reach: window minus the zero margin.
  double support_limit() const;
  void validate() const;

  std::vector<double> tau_nodes() const;
  std::vector<double> tau_weights() const;
  std::vector<double> theta_nodes() const;
};

// Invariant measure weights on the grid: quadrature weight * R / cos^2(tau/R).
class MeasureGrid {
public:
  explicit MeasureGrid(const GridSpec &spec);
  const Eigen::MatrixXd &weights() const { return m_w; }

private:
  Eigen::MatrixXd m_w;
};

class TestFunction {
public:
  TestFunction() = default;
  static TestFunction from_expansion(const Expansion &e, const GridSpec &spec, bool is_real);
  static TestFunction from_grid(const Eigen::MatrixXcd &values, const GridSpec &spec, bool is_real);
  static TestFunction zero(const GridSpec &spec);

  const GridSpec &spec() const { return *m_spec; }
  const Eigen::MatrixXcd &values() const { return m_values; }
  const std::optional<Expansion> &generator() const { return m_gen; }
  bool has_generator() const { return m_gen.has_value(); }
  bool is_real() const { return m_real; }

  // Generator value, or interpolated grid value for grid-only functions.
  cplx eval(double tau, double theta) const;
  const Profile &profile() const;

  TestFunction operator+(const TestFunction &o) const;
  TestFunction operator-(const TestFunction &o) const;
  TestFunction operator*(cplx s) const;

private:
  std::shared_ptr<const GridSpec> m_spec;
  Eigen::MatrixXcd m_values;
  std::optional<Expansion> m_gen;
  bool m_real = false;
  struct Cache {
    std::mutex mtx;
    std::shared_ptr<Profile> profile;
  };
  std::shared_ptr<Cache> m_cache;
};

TestFunction operator*(cplx s, const TestFunction &f);

TestFunction bump(const DsPoint &center, double w_tau, double w_theta, cplx amplitude, const GridSpec &spec);

// Integral against the invariant measure. Generator-backed functions use their
// native Gauss rules; grid-only functions use the grid quadrature.
cplx integral(const TestFunction &f);
cplx grid_integral(const TestFunction &f);

TestFunction laplace_beltrami(const TestFunction &f);
TestFunction transport(const GroupElement &g, const TestFunction &f);

struct Decomposition {
  TestFunction f0;
  cplx c;
};
Decomposition decompose(const TestFunction &f, const TestFunction &h);

// Grid-based linear data, used for grid-only functions.
Profile grid_profile(const TestFunction &f);

// Grid-only operations, also callable on generator-backed functions.
TestFunction grid_laplacian(const TestFunction &f);
TestFunction grid_transport(const GroupElement &g, const TestFunction &f);

void save_json(const TestFunction &f, const std::string &path);
void save_binary(const TestFunction &f, const std::string &path);
TestFunction load_json(const std::string &path);
TestFunction load_binary(const std::string &path);

} // namespace ds2
