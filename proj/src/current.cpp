#include "ds2/current.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

#include "ds2/errors.hpp"
#include "ds2/quadrature.hpp"

namespace ds2 {

EvalGrid EvalGrid::make(double R, double T, int ntau, int ntheta) {
  if (ntau < 2 * stencil_halfwidth + 3 || ntheta < 8)
    throw DomainError("evaluation grid too small");
  if (!(T > 0.0) || T >= 0.5 * pi * R)
    throw DomainError("evaluation grid leaves the chart");
  EvalGrid g;
  g.R = R;
  g.tau.resize(ntau);
  g.theta.resize(ntheta);
  for (int i = 0; i < ntau; ++i)
    g.tau[i] = -T + 2.0 * T * double(i) / double(ntau - 1);
  for (int k = 0; k < ntheta; ++k)
    g.theta[k] = 2.0 * pi * double(k) / double(ntheta);
  return g;
}

EvalGrid EvalGrid::make(const GridSpec &spec, int ntau, int ntheta) {
  return make(spec.R, spec.tau_window(), ntau, ntheta);
}

cplx FieldJet::box(double tau, double R) const {
  const double c = std::cos(tau / R);
  return c * c * (u_tt - u_hh / (R * R));
}

FieldJet ModalField::jet(double tau, double theta) const {
  const double t = tau / R;
  const double c = std::cos(t), tn = std::tan(t);
  const cplx q(std::log(c), t);
  const cplx q_t(-tn / R, 1.0 / R);
  const double q_tt = -1.0 / (c * c * R * R);

  FieldJet j;
  j.u = a0 + aq * std::conj(q) + bq * q;
  j.u_t = aq * std::conj(q_t) + bq * q_t;
  j.u_tt = (aq + bq) * q_tt;

  const int M = static_cast<int>(alpha.size() / 2);
  const bool has_beta = !beta.empty();
  const cplx z = std::polar(1.0, theta - t);  // conj e_n, n > 0
  const cplx w = std::polar(1.0, -theta - t); // conj e_n, n < 0
  cplx zm = 1.0, wm = 1.0;
  const cplx I(0.0, 1.0);
  cplx s_u = 0.0, s_t = 0.0, s_h = 0.0, s_2t = 0.0, s_2h = 0.0;
  for (int m = 1; m <= M; ++m) {
    zm *= z;
    wm *= w;
    const double dm = m;
    const cplx P = alpha[2 * (m - 1)] * zm;
    const cplx N = alpha[2 * (m - 1) + 1] * wm;
    cplx Pb = 0.0, Nb = 0.0;
    if (has_beta) {
      Pb = beta[2 * (m - 1)] * std::conj(zm);
      Nb = beta[2 * (m - 1) + 1] * std::conj(wm);
    }
    const cplx all = P + N + Pb + Nb;
    s_u += all;
    s_t += dm * ((Pb + Nb) - (P + N));
    s_h += dm * ((P + Nb) - (N + Pb));
    s_2t += dm * dm * all;
  }
  s_2h = s_2t;
  j.u += s_u;
  j.u_t += I * s_t / R;
  j.u_h = I * s_h;
  j.u_tt -= s_2t / (R * R);
  j.u_hh = -s_2h;
  return j;
}

namespace {

// Drop trailing modes that cannot move a double result.
void trim(ModalField &f) {
  double scale = std::max({std::abs(f.a0), std::abs(f.aq), std::abs(f.bq)});
  for (const auto &a : f.alpha)
    scale = std::max(scale, std::abs(a));
  for (const auto &b : f.beta)
    scale = std::max(scale, std::abs(b));
  int M = static_cast<int>(f.alpha.size() / 2);
  auto small = [&](int m) {
    double s = std::abs(f.alpha[2 * (m - 1)]) + std::abs(f.alpha[2 * (m - 1) + 1]);
    if (!f.beta.empty())
      s += std::abs(f.beta[2 * (m - 1)]) + std::abs(f.beta[2 * (m - 1) + 1]);
    return s <= 1e-19 * scale;
  };
  while (M > 0 && small(M))
    --M;
  f.alpha.resize(2 * M);
  if (!f.beta.empty())
    f.beta.resize(2 * M);
}

int active_modes(const ModalField &f) { return static_cast<int>(f.alpha.size() / 2); }

} // namespace

SmearedField::SmearedField(TestFunction g, ModalField field, cplx c0, EvalGrid grid)
    : m_g(std::move(g)), m_field(std::move(field)), m_c0(c0), m_grid(std::move(grid)) {
  trim(m_field);
  const int nt = static_cast<int>(m_grid.tau.size()), nh = static_cast<int>(m_grid.theta.size());
  m_u.resize(nt, nh);
  for (int i = 0; i < nt; ++i)
    for (int k = 0; k < nh; ++k)
      m_u(i, k) = m_field.jet(m_grid.tau[i], m_grid.theta[k]).u;
}

SmearedField smear(const TestFunction &g, const EvalGrid &grid, const KernelConvention &conv) {
  const Profile &p = g.profile();
  const double R = g.spec().R;
  if (std::abs(grid.R - R) > 1e-14 * R)
    throw DomainError("evaluation grid radius differs from the test function");
  const double s = 1.0 / (4.0 * pi);
  ModalField f;
  f.R = R;
  f.a0 = s * (conv.modal_constant() * p.I + p.Q);
  f.aq = s * p.I;
  f.alpha.resize(p.A.size());
  for (int m = 1; m <= p.modes(); ++m) {
    f.alpha[2 * (m - 1)] = s * p.A[2 * (m - 1)] / double(m);
    f.alpha[2 * (m - 1) + 1] = s * p.A[2 * (m - 1) + 1] / double(m);
  }
  return SmearedField(g, std::move(f), p.I, grid);
}

SmearedField smear_commutator(const TestFunction &g, const EvalGrid &grid) {
  if (!g.is_real())
    throw DomainError("commutator smearing needs a real test function");
  const Profile &p = g.profile();
  const double R = g.spec().R;
  if (std::abs(grid.R - R) > 1e-14 * R)
    throw DomainError("evaluation grid radius differs from the test function");
  const double s = 1.0 / (4.0 * pi);
  ModalField f;
  f.R = R;
  f.a0 = s * (p.Q - std::conj(p.Q));
  f.aq = s * p.I;
  f.bq = -s * std::conj(p.I);
  f.alpha.resize(p.A.size());
  f.beta.resize(p.A.size());
  for (int m = 1; m <= p.modes(); ++m)
    for (int b = 0; b < 2; ++b) {
      const std::size_t i = 2 * (m - 1) + b;
      f.alpha[i] = s * p.A[i] / double(m);
      f.beta[i] = -s * std::conj(p.A[i]) / double(m);
    }
  return SmearedField(g, std::move(f), p.I - std::conj(p.I), grid);
}

double kappa_value(KappaConvention k, double R) {
  return k == KappaConvention::paper ? 1.0 / (4.0 * pi * R) : -1.0 / (4.0 * pi);
}

CorrectedCurrent::CorrectedCurrent(const SmearedField &sf, double kappa) : m_sf(&sf), m_kappa(kappa) {}
CorrectedCurrent::CorrectedCurrent(const SmearedField &sf, KappaConvention k)
    : m_sf(&sf), m_kappa(kappa_value(k, sf.R())) {}

std::pair<cplx, cplx> CorrectedCurrent::at(double tau, double theta) const {
  const double R = m_sf->R();
  const FieldJet j = m_sf->jet(tau, theta);
  return {-j.u_h / R, -R * j.u_t + m_kappa * std::tan(tau / R) * m_sf->c0()};
}

OneFormGrid CorrectedCurrent::on_grid() const {
  const EvalGrid &g = m_sf->grid();
  OneFormGrid w;
  w.grid = g;
  const int nt = static_cast<int>(g.tau.size()), nh = static_cast<int>(g.theta.size());
  w.w_tau.resize(nt, nh);
  w.w_theta.resize(nt, nh);
  for (int i = 0; i < nt; ++i)
    for (int k = 0; k < nh; ++k) {
      const auto [a, b] = at(g.tau[i], g.theta[k]);
      w.w_tau(i, k) = a;
      w.w_theta(i, k) = b;
    }
  return w;
}

Eigen::MatrixXcd diff_tau(const Eigen::MatrixXcd &a, double h, int order) {
  static const double d1[] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  static const double d2[] = {-1.0 / 560, 8.0 / 315, -1.0 / 5,  8.0 / 5,  -205.0 / 72,
                              8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};
  if (order != 1 && order != 2)
    throw DomainError("diff_tau supports orders 1 and 2");
  const double *c = order == 1 ? d1 : d2;
  const double scale = order == 1 ? 1.0 / h : 1.0 / (h * h);
  const int H = stencil_halfwidth;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(a.rows(), a.cols());
  for (Eigen::Index i = H; i + H < a.rows(); ++i)
    for (int s = -H; s <= H; ++s)
      if (c[s + H] != 0.0)
        out.row(i) += (c[s + H] * scale) * a.row(i + s);
  return out;
}

Eigen::MatrixXcd diff_theta(const Eigen::MatrixXcd &a, int order) {
  const int n = static_cast<int>(a.cols());
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd out(a.rows(), a.cols());
  std::vector<cplx> row(n), spec;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < n; ++k)
      row[k] = a(i, k);
    fft.fwd(spec, row);
    for (int k = 0; k < n; ++k) {
      const int kk = k <= n / 2 ? k : k - n;
      if (2 * k == n && order % 2 == 1) {
        spec[k] = 0.0;
        continue;
      }
      spec[k] *= std::pow(cplx(0.0, double(kk)), order);
    }
    fft.inv(row, spec);
    for (int k = 0; k < n; ++k)
      out(i, k) = row[k];
  }
  return out;
}

namespace {

GridResidual interior_compare(const Eigen::MatrixXcd &lhs, const Eigen::MatrixXcd &rhs, const Eigen::MatrixXcd &mag) {
  GridResidual r;
  const int H = stencil_halfwidth;
  for (Eigen::Index i = H; i + H < lhs.rows(); ++i)
    for (Eigen::Index k = 0; k < lhs.cols(); ++k) {
      r.max_abs = std::max(r.max_abs, std::abs(lhs(i, k) - rhs(i, k)));
      r.scale = std::max(r.scale, std::abs(mag(i, k)));
    }
  return r;
}

} // namespace

GridResidual closedness_residual(const OneFormGrid &w) {
  const Eigen::MatrixXcd a = diff_tau(w.w_theta, w.grid.dtau());
  const Eigen::MatrixXcd b = diff_theta(w.w_tau);
  const Eigen::MatrixXcd mag = a.cwiseAbs().cwiseMax(b.cwiseAbs()).cast<cplx>();
  return interior_compare(a, b, mag);
}

GridResidual hodge_box_residual(const SmearedField &sf) {
  const EvalGrid &g = sf.grid();
  const double R = g.R;
  const int nt = static_cast<int>(g.tau.size()), nh = static_cast<int>(g.theta.size());
  Eigen::MatrixXcd st(nt, nh), sh(nt, nh), rhs(nt, nh);
  for (int i = 0; i < nt; ++i) {
    const double c = std::cos(g.tau[i] / R);
    for (int k = 0; k < nh; ++k) {
      const FieldJet j = sf.jet(g.tau[i], g.theta[k]);
      st(i, k) = -j.u_h / R;
      sh(i, k) = -R * j.u_t;
      rhs(i, k) = -R / (c * c) * j.box(g.tau[i], R);
    }
  }
  const Eigen::MatrixXcd a = diff_tau(sh, g.dtau());
  const Eigen::MatrixXcd b = diff_theta(st);
  const Eigen::MatrixXcd lhs = a - b;
  const Eigen::MatrixXcd mag = a.cwiseAbs().cwiseMax(b.cwiseAbs()).cast<cplx>();
  return interior_compare(lhs, rhs, mag);
}

GridResidual smeared_box_residual(const SmearedField &sf, int probes) {
  const EvalGrid &g = sf.grid();
  const double R = g.R;
  const Eigen::MatrixXcd &u = sf.values();
  const Eigen::MatrixXcd utt = diff_tau(u, g.dtau(), 2);
  const Eigen::MatrixXcd uhh = diff_theta(u, 2);
  const cplx target = -sf.c0() / (4.0 * pi * R * R);
  const int H = stencil_halfwidth;
  const int nt = static_cast<int>(u.rows()), nh = static_cast<int>(u.cols());
  GridResidual r;
  r.scale = std::abs(target);
  for (int p = 0; p < probes; ++p) {
    // deterministic spread over the interior rows and all columns
    const int i = H + 1 + static_cast<int>((long long)(nt - 2 * H - 3) * (2 * p + 1) / (2 * probes));
    const int k = static_cast<int>((long long)nh * ((7 * p) % probes) / probes);
    const double c = std::cos(g.tau[i] / R);
    const cplx box = c * c * (utt(i, k) - uhh(i, k) / (R * R));
    r.max_abs = std::max(r.max_abs, std::abs(box - target));
  }
  return r;
}

GridResidual correction_derivative_residual(const SmearedField &sf, double kappa) {
  const EvalGrid &g = sf.grid();
  const double R = g.R;
  const int nt = static_cast<int>(g.tau.size());
  Eigen::MatrixXcd t(nt, 1), exact(nt, 1);
  for (int i = 0; i < nt; ++i) {
    const double c = std::cos(g.tau[i] / R);
    t(i, 0) = kappa * std::tan(g.tau[i] / R) * sf.c0();
    exact(i, 0) = kappa / (R * c * c) * sf.c0();
  }
  return interior_compare(diff_tau(t, g.dtau()), exact, exact);
}

std::vector<cplx> slice_charge(const CorrectedCurrent &w, const std::vector<double> &taus) {
  const EvalGrid &g = w.field().grid();
  const double T = g.tau.back();
  std::vector<cplx> J;
  J.reserve(taus.size());
  for (double tau : taus) {
    if (std::abs(tau) > T)
      throw DomainError("slice outside the evaluation grid");
    cplx loop = 0.0;
    for (double th : g.theta)
      loop += w.at(tau, th).second;
    loop *= g.dtheta();
    J.push_back(-loop / (8.0 * pi));
  }
  return J;
}

double relative_spread(const std::vector<cplx> &J) {
  if (J.empty())
    return 0.0;
  cplx mean = 0.0;
  for (const auto &j : J)
    mean += j;
  mean /= double(J.size());
  double s = 0.0;
  for (const auto &j : J)
    s = std::max(s, std::abs(j - mean));
  return std::abs(mean) > 0.0 ? s / std::abs(mean) : s;
}

namespace {

// Integral of one component of omega along a straight axis-aligned segment.
cplx segment(const CorrectedCurrent &w, bool along_tau, double fixed, double a, double b, int active) {
  const double R = w.field().R();
  const double len = std::abs(b - a) / (along_tau ? R : 1.0);
  const int order = std::clamp(8 + static_cast<int>(std::ceil(0.6 * active * len)), 8, 96);
  const GaussRule &r = gauss_legendre(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cplx s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double x = mid + half * r.nodes[i];
    const auto om = along_tau ? w.at(x, fixed) : w.at(fixed, x);
    s += r.weights[i] * (along_tau ? om.first : om.second);
  }
  return s * half;
}

} // namespace

DualField dual_field(const CorrectedCurrent &w, int base_tau_index, int base_theta_index, int stride) {
  const EvalGrid &g = w.field().grid();
  const double R = g.R;
  if (stride < 1)
    throw DomainError("stride must be positive");
  DualField d;
  for (std::size_t i = 0; i < g.tau.size(); i += stride)
    d.tau.push_back(g.tau[i]);
  std::vector<double> th;
  for (std::size_t k = 0; k < g.theta.size(); k += stride)
    th.push_back(g.theta[k]);
  const int nt = static_cast<int>(d.tau.size()), nh = static_cast<int>(th.size());
  if (base_tau_index < 0 || base_tau_index >= nt || base_theta_index < 0 || base_theta_index >= nh)
    throw DomainError("base point outside the potential grid");
  const double tb = d.tau[base_tau_index], hb = th[base_theta_index];
  const double dh = 2.0 * pi / double(nh);
  d.theta.resize(nh);
  for (int j = 0; j < nh; ++j)
    d.theta[j] = hb + dh * double(j);
  const int active = active_modes(w.field().field());

  // tau-first path: along tau at theta_b, then along theta.
  std::vector<cplx> base_col(nt, 0.0);
  for (int i = base_tau_index + 1; i < nt; ++i)
    base_col[i] = base_col[i - 1] + segment(w, true, hb, d.tau[i - 1], d.tau[i], active);
  for (int i = base_tau_index - 1; i >= 0; --i)
    base_col[i] = base_col[i + 1] + segment(w, true, hb, d.tau[i + 1], d.tau[i], active);
  d.potential.resize(nt, nh);
  d.winding.resize(nt);
  for (int i = 0; i < nt; ++i) {
    cplx acc = base_col[i];
    d.potential(i, 0) = acc;
    for (int j = 1; j < nh; ++j) {
      acc += segment(w, false, d.tau[i], d.theta[j - 1], d.theta[j], active);
      d.potential(i, j) = acc;
    }
    acc += segment(w, false, d.tau[i], d.theta[nh - 1], hb + 2.0 * pi, active);
    d.winding[i] = acc - base_col[i];
  }

  // theta-first path: along theta at tau_b, then along tau.
  std::vector<cplx> base_row(nh, 0.0);
  for (int j = 1; j < nh; ++j)
    base_row[j] = base_row[j - 1] + segment(w, false, tb, d.theta[j - 1], d.theta[j], active);
  for (int j = 0; j < nh; ++j) {
    std::vector<cplx> col(nt, 0.0);
    col[base_tau_index] = base_row[j];
    for (int i = base_tau_index + 1; i < nt; ++i)
      col[i] = col[i - 1] + segment(w, true, d.theta[j], d.tau[i - 1], d.tau[i], active);
    for (int i = base_tau_index - 1; i >= 0; --i)
      col[i] = col[i + 1] + segment(w, true, d.theta[j], d.tau[i + 1], d.tau[i], active);
    for (int i = 0; i < nt; ++i)
      d.path_mismatch = std::max(d.path_mismatch, std::abs(col[i] - d.potential(i, j)));
  }

  const double lb = std::log(std::cos(tb / R));
  for (double t : d.tau)
    d.dropped_term_coefficient =
        std::max(d.dropped_term_coefficient, std::abs(std::log(std::cos(t / R)) - lb) / (4.0 * pi));
  return d;
}

} // namespace ds2
