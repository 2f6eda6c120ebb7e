#include "ds2/testfn.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>
#include <unsupported/Eigen/FFT>

#include "ds2/errors.hpp"
#include "ds2/quadrature.hpp"

namespace ds2 {

namespace {

std::string tau_boundary_name(bool upper) { return upper ? "upper tau boundary" : "lower tau boundary"; }

void check_extent(double lo, double hi, const GridSpec &spec) {
  const double lim = spec.support_limit();
  if (hi > lim + 1e-12)
    throw SupportError("support reaches tau = " + std::to_string(hi) + " beyond the " + tau_boundary_name(true) +
                       " at " + std::to_string(lim));
  if (lo < -lim - 1e-12)
    throw SupportError("support reaches tau = " + std::to_string(lo) + " beyond the " + tau_boundary_name(false) +
                       " at " + std::to_string(-lim));
}

Eigen::MatrixXcd sample(const Expansion &e, const GridSpec &spec) {
  const auto tn = spec.tau_nodes();
  const auto hn = spec.theta_nodes();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(tn.size(), hn.size());
  for (const auto &entry : e.entries()) {
    const Atom &a = *entry.atom;
    const auto [lo, hi] = a.tau_extent(spec.R);
    for (std::size_t i = 0; i < tn.size(); ++i) {
      if (tn[i] <= lo || tn[i] >= hi)
        continue;
      for (std::size_t k = 0; k < hn.size(); ++k)
        v(i, k) += entry.c * a.eval(tn[i], hn[k], spec.R);
    }
  }
  return v;
}

// Weights of the second derivative at z from values at nodes x (Fornberg).
std::vector<double> fornberg_d2(double z, const std::vector<double> &x) {
  const int n = static_cast<int>(x.size()), m = 2;
  std::vector<std::array<double, 3>> c(n, {0.0, 0.0, 0.0});
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j)
    w[j] = c[j][2];
  return w;
}

// Four-point Lagrange weights at t for nodes x[0..3].
std::array<double, 4> lagrange4(double t, const double *x) {
  std::array<double, 4> w;
  for (int i = 0; i < 4; ++i) {
    double v = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != i)
        v *= (t - x[j]) / (x[i] - x[j]);
    w[i] = v;
  }
  return w;
}

cplx interpolate(const TestFunction &f, double tau, double theta) {
  const GridSpec &s = f.spec();
  const auto tn = s.tau_nodes();
  const int nt = static_cast<int>(tn.size()), nh = s.ntheta;
  if (tau <= tn.front() || tau >= tn.back())
    return 0.0;
  int i = static_cast<int>(std::upper_bound(tn.begin(), tn.end(), tau) - tn.begin()) - 2;
  i = std::clamp(i, 0, nt - 4);
  const auto wt = lagrange4(tau, &tn[i]);
  const double h = 2.0 * pi / nh;
  double t = std::fmod(theta, 2.0 * pi);
  if (t < 0)
    t += 2.0 * pi;
  const int k0 = static_cast<int>(std::floor(t / h)) - 1;
  const double xs[4] = {(k0)*h, (k0 + 1) * h, (k0 + 2) * h, (k0 + 3) * h};
  const auto wh = lagrange4(t, xs);
  cplx v = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const int kk = ((k0 + b) % nh + nh) % nh;
      v += wt[a] * wh[b] * f.values()(i + a, kk);
    }
  return v;
}

} // namespace

GridSpec GridSpec::make(double R, Resolution res) {
  GridSpec s;
  s.R = R;
  switch (res) {
  case Resolution::half:
    s.ntheta = 48;
    s.tau_panels = 16;
    s.profile.modes = 256;
    s.profile.node_scale = 0.6;
    break;
  case Resolution::standard:
    break;
  case Resolution::twice:
    s.ntheta = 192;
    s.tau_panels = 64;
    s.profile.modes = 768;
    s.profile.node_scale = 1.5;
    break;
  }
  s.validate();
  return s;
}

double GridSpec::support_limit() const {
  const double cell = 2.0 * tau_window() / ntau();
  return tau_window() - margin_cells * cell;
}

void GridSpec::validate() const {
  if (!(R > 0.0) || ntheta < 8 || tau_panels < 2 || tau_order < 2 || margin_cells < 4)
    throw DomainError("invalid grid specification");
  if (!(window_frac > 0.0) || window_frac > 1.0 - delta_frac + 1e-15 || !(delta_frac > 0.0))
    throw DomainError("chart window must lie inside |tau| < pi R/2 - delta");
  if (profile.modes < 8 || !(profile.node_scale > 0.0))
    throw DomainError("invalid profile options");
}

std::vector<double> GridSpec::tau_nodes() const {
  return composite_gauss(-tau_window(), tau_window(), tau_panels, tau_order).nodes;
}

std::vector<double> GridSpec::tau_weights() const {
  return composite_gauss(-tau_window(), tau_window(), tau_panels, tau_order).weights;
}

std::vector<double> GridSpec::theta_nodes() const {
  std::vector<double> t(ntheta);
  for (int k = 0; k < ntheta; ++k)
    t[k] = 2.0 * pi * k / ntheta;
  return t;
}

MeasureGrid::MeasureGrid(const GridSpec &spec) {
  const auto tn = spec.tau_nodes();
  const auto tw = spec.tau_weights();
  m_w.resize(tn.size(), spec.ntheta);
  const double dh = 2.0 * pi / spec.ntheta;
  for (std::size_t i = 0; i < tn.size(); ++i) {
    const double c = std::cos(tn[i] / spec.R);
    m_w.row(i).setConstant(tw[i] * spec.R / (c * c) * dh);
  }
}

TestFunction TestFunction::from_expansion(const Expansion &e, const GridSpec &spec, bool is_real) {
  spec.validate();
  if (!e.entries().empty()) {
    const auto [lo, hi] = e.tau_extent(spec.R);
    check_extent(lo, hi, spec);
  }
  TestFunction f;
  f.m_spec = std::make_shared<const GridSpec>(spec);
  f.m_values = sample(e, spec);
  f.m_gen = e;
  f.m_real = is_real;
  f.m_cache = std::make_shared<Cache>();
  return f;
}

TestFunction TestFunction::from_grid(const Eigen::MatrixXcd &values, const GridSpec &spec, bool is_real) {
  spec.validate();
  if (values.rows() != spec.ntau() || values.cols() != spec.ntheta)
    throw DomainError("grid values do not match the grid specification");
  TestFunction f;
  f.m_spec = std::make_shared<const GridSpec>(spec);
  f.m_values = values;
  f.m_real = is_real;
  f.m_cache = std::make_shared<Cache>();
  return f;
}

TestFunction TestFunction::zero(const GridSpec &spec) { return from_expansion(Expansion(), spec, true); }

cplx TestFunction::eval(double tau, double theta) const {
  if (m_gen)
    return m_gen->eval(tau, theta, m_spec->R);
  return interpolate(*this, tau, theta);
}

const Profile &TestFunction::profile() const {
  std::lock_guard<std::mutex> lock(m_cache->mtx);
  if (!m_cache->profile)
    m_cache->profile =
        std::make_shared<Profile>(m_gen ? m_gen->profile(m_spec->R, m_spec->profile) : grid_profile(*this));
  return *m_cache->profile;
}

TestFunction TestFunction::operator+(const TestFunction &o) const {
  TestFunction f;
  f.m_spec = m_spec;
  f.m_values = m_values + o.m_values;
  if (m_gen && o.m_gen)
    f.m_gen = *m_gen + *o.m_gen;
  f.m_real = m_real && o.m_real;
  f.m_cache = std::make_shared<Cache>();
  return f;
}

TestFunction TestFunction::operator-(const TestFunction &o) const { return *this + o * cplx(-1.0); }

TestFunction TestFunction::operator*(cplx s) const {
  TestFunction f;
  f.m_spec = m_spec;
  f.m_values = m_values * s;
  if (m_gen)
    f.m_gen = *m_gen * s;
  f.m_real = m_real && s.imag() == 0.0;
  f.m_cache = std::make_shared<Cache>();
  return f;
}

TestFunction operator*(cplx s, const TestFunction &f) { return f * s; }

TestFunction bump(const DsPoint &center, double w_tau, double w_theta, cplx amplitude, const GridSpec &spec) {
  if (!(w_tau > 0.0) || !(w_theta > 0.0) || !(w_theta < pi))
    throw DomainError("bump widths must be positive, with theta half-width below pi");
  SeparableAtom a;
  a.ctau = center.tau();
  a.wtau = w_tau;
  a.ctheta = center.theta();
  a.wtheta = w_theta;
  if (amplitude != cplx(0.0))
    a.terms.push_back({TrigPoly(amplitude), 0, 0});
  check_extent(a.ctau - w_tau, a.ctau + w_tau, spec);
  return TestFunction::from_expansion(Expansion::single(a), spec, amplitude.imag() == 0.0);
}

cplx integral(const TestFunction &f) { return f.profile().I; }

cplx grid_integral(const TestFunction &f) {
  const MeasureGrid m(f.spec());
  return (f.values().array() * m.weights().array().cast<cplx>()).sum();
}

Profile grid_profile(const TestFunction &f) {
  const GridSpec &s = f.spec();
  const int M = s.profile.modes;
  const MeasureGrid mg(s);
  const auto tn = s.tau_nodes();
  const auto hn = s.theta_nodes();
  Profile p = Profile::zero(M);
  for (std::size_t i = 0; i < tn.size(); ++i) {
    const cplx q(std::log(std::cos(tn[i] / s.R)), tn[i] / s.R);
    for (int k = 0; k < s.ntheta; ++k) {
      const cplx v = f.values()(i, k) * mg.weights()(i, k);
      if (v == cplx(0.0))
        continue;
      p.I += v;
      p.Q += v * q;
      const cplx zp = std::polar(1.0, tn[i] / s.R - hn[k]);
      const cplx zm = std::polar(1.0, tn[i] / s.R + hn[k]);
      cplx ap = v, am = v;
      for (int n = 1; n <= M; ++n) {
        ap *= zp;
        am *= zm;
        p.A[2 * (n - 1)] += ap;
        p.A[2 * (n - 1) + 1] += am;
      }
    }
  }
  return p;
}

TestFunction grid_laplacian(const TestFunction &f) {
  const GridSpec &s = f.spec();
  const int nt = s.ntau(), nh = s.ntheta;
  const auto tn = s.tau_nodes();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nt, nh);
  // theta: spectral second derivative per row.
  Eigen::FFT<double> fft;
  for (int i = 0; i < nt; ++i) {
    std::vector<cplx> row(nh), spec(nh);
    for (int k = 0; k < nh; ++k)
      row[k] = f.values()(i, k);
    fft.fwd(spec, row);
    for (int k = 0; k < nh; ++k) {
      int m = k <= nh / 2 ? k : k - nh;
      if (nh % 2 == 0 && k == nh / 2)
        m = 0;
      spec[k] *= -double(m) * double(m);
    }
    fft.inv(row, spec);
    for (int k = 0; k < nh; ++k)
      out(i, k) = -row[k] / (s.R * s.R);
  }
  // tau: 7-point Fornberg stencils on the Gauss nodes.
  for (int i = 0; i < nt; ++i) {
    const int i0 = std::clamp(i - 3, 0, nt - 7);
    std::vector<double> xs(tn.begin() + i0, tn.begin() + i0 + 7);
    const auto w = fornberg_d2(tn[i], xs);
    const double c = std::cos(tn[i] / s.R);
    for (int k = 0; k < nh; ++k) {
      cplx d2 = 0.0;
      for (int j = 0; j < 7; ++j)
        d2 += w[j] * f.values()(i0 + j, k);
      out(i, k) = c * c * (d2 + out(i, k));
    }
  }
  return TestFunction::from_grid(out, s, f.is_real());
}

TestFunction laplace_beltrami(const TestFunction &f) {
  if (f.has_generator())
    return TestFunction::from_expansion(f.generator()->laplacian(f.spec().R), f.spec(), f.is_real());
  return grid_laplacian(f);
}

TestFunction grid_transport(const GroupElement &g, const TestFunction &f) {
  const GridSpec &s = f.spec();
  const DsParams params(s.R);
  const auto tn = s.tau_nodes();
  const auto hn = s.theta_nodes();
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < s.ntau(); ++i)
    for (int k = 0; k < s.ntheta; ++k)
      if (std::abs(f.values()(i, k)) > 1e-14) {
        const double t = group_action(g, DsPoint(tn[i], hn[k], params)).tau();
        lo = std::min(lo, t);
        hi = std::max(hi, t);
      }
  if (hi >= lo)
    check_extent(lo, hi, s);
  const GroupElement ginv = g.inverse();
  Eigen::MatrixXcd out(s.ntau(), s.ntheta);
  for (int i = 0; i < s.ntau(); ++i)
    for (int k = 0; k < s.ntheta; ++k) {
      const DsPoint y = group_action(ginv, DsPoint(tn[i], hn[k], params));
      out(i, k) = interpolate(f, y.tau(), y.theta());
    }
  return TestFunction::from_grid(out, s, f.is_real());
}

TestFunction transport(const GroupElement &g, const TestFunction &f) {
  if (f.has_generator())
    return TestFunction::from_expansion(f.generator()->transported(g), f.spec(), f.is_real());
  return grid_transport(g, f);
}

Decomposition decompose(const TestFunction &f, const TestFunction &h) {
  const cplx ih = integral(h);
  if (std::abs(ih - 1.0) > 1e-10)
    throw DomainError("reference function is not normalized: integral " + std::to_string(std::abs(ih)));
  const cplx c = integral(f);
  return {f - h * c, c};
}

namespace {

nlohmann::json spec_json(const GridSpec &s) {
  return {{"R", s.R},
          {"ntheta", s.ntheta},
          {"tau_panels", s.tau_panels},
          {"tau_order", s.tau_order},
          {"window_frac", s.window_frac},
          {"delta_frac", s.delta_frac},
          {"margin_cells", s.margin_cells},
          {"modes", s.profile.modes},
          {"node_scale", s.profile.node_scale}};
}

GridSpec spec_from_json(const nlohmann::json &j) {
  GridSpec s;
  s.R = j.at("R");
  s.ntheta = j.at("ntheta");
  s.tau_panels = j.at("tau_panels");
  s.tau_order = j.at("tau_order");
  s.window_frac = j.at("window_frac");
  s.delta_frac = j.at("delta_frac");
  s.margin_cells = j.at("margin_cells");
  s.profile.modes = j.at("modes");
  s.profile.node_scale = j.at("node_scale");
  s.validate();
  return s;
}

constexpr char binary_magic[8] = {'D', 'S', '2', 'T', 'F', 'N', '0', '1'};

template <typename T> void put(std::ostream &os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char *>(b), sizeof(T));
}

template <typename T> T get(std::istream &is) {
  unsigned char b[sizeof(T)];
  is.read(reinterpret_cast<char *>(b), sizeof(T));
  if (!is)
    throw DomainError("truncated test function dump");
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

} // namespace

void save_json(const TestFunction &f, const std::string &path) {
  nlohmann::json j;
  j["format"] = "ds2-testfunction";
  j["grid"] = spec_json(f.spec());
  j["is_real"] = f.is_real();
  std::vector<double> re, im;
  for (int i = 0; i < f.values().rows(); ++i)
    for (int k = 0; k < f.values().cols(); ++k) {
      re.push_back(f.values()(i, k).real());
      im.push_back(f.values()(i, k).imag());
    }
  j["values_re"] = re;
  j["values_im"] = im;
  std::ofstream os(path);
  if (!os)
    throw DomainError("cannot write " + path);
  os << j.dump() << "\n";
}

TestFunction load_json(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw DomainError("cannot read " + path);
  nlohmann::json j;
  is >> j;
  if (j.value("format", "") != "ds2-testfunction")
    throw DomainError("not a test function dump: " + path);
  const GridSpec s = spec_from_json(j.at("grid"));
  const auto re = j.at("values_re").get<std::vector<double>>();
  const auto im = j.at("values_im").get<std::vector<double>>();
  if (re.size() != std::size_t(s.ntau() * s.ntheta) || im.size() != re.size())
    throw DomainError("value count does not match the grid");
  Eigen::MatrixXcd v(s.ntau(), s.ntheta);
  for (int i = 0; i < s.ntau(); ++i)
    for (int k = 0; k < s.ntheta; ++k)
      v(i, k) = cplx(re[i * s.ntheta + k], im[i * s.ntheta + k]);
  return TestFunction::from_grid(v, s, j.value("is_real", false));
}

void save_binary(const TestFunction &f, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw DomainError("cannot write " + path);
  const GridSpec &s = f.spec();
  os.write(binary_magic, 8);
  put<double>(os, s.R);
  put<std::int32_t>(os, s.ntheta);
  put<std::int32_t>(os, s.tau_panels);
  put<std::int32_t>(os, s.tau_order);
  put<double>(os, s.window_frac);
  put<double>(os, s.delta_frac);
  put<std::int32_t>(os, s.margin_cells);
  put<std::int32_t>(os, s.profile.modes);
  put<double>(os, s.profile.node_scale);
  put<std::int32_t>(os, f.is_real() ? 1 : 0);
  for (int i = 0; i < f.values().rows(); ++i)
    for (int k = 0; k < f.values().cols(); ++k) {
      put<double>(os, f.values()(i, k).real());
      put<double>(os, f.values()(i, k).imag());
    }
}

TestFunction load_binary(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw DomainError("cannot read " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, binary_magic, 8) != 0)
    throw DomainError("not a binary test function dump: " + path);
  GridSpec s;
  s.R = get<double>(is);
  s.ntheta = get<std::int32_t>(is);
  s.tau_panels = get<std::int32_t>(is);
  s.tau_order = get<std::int32_t>(is);
  s.window_frac = get<double>(is);
  s.delta_frac = get<double>(is);
  s.margin_cells = get<std::int32_t>(is);
  s.profile.modes = get<std::int32_t>(is);
  s.profile.node_scale = get<double>(is);
  const bool real = get<std::int32_t>(is) != 0;
  s.validate();
  Eigen::MatrixXcd v(s.ntau(), s.ntheta);
  for (int i = 0; i < s.ntau(); ++i)
    for (int k = 0; k < s.ntheta; ++k) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      v(i, k) = cplx(re, im);
    }
  return TestFunction::from_grid(v, s, real);
}

} // namespace ds2
