#include "ds2/expansion.hpp"

#include <cmath>
#include <map>

#include "ds2/quadrature.hpp"

namespace ds2 {

namespace {

double wrap_pm_pi(double a) {
  a = std::remainder(a, 2.0 * pi);
  return a;
}

int node_count(double scale, double phase, int order) {
  return static_cast<int>(std::ceil(scale * (80.0 + 16.0 * order + 0.9 * phase)));
}

int max_order(const SeparableAtom &a, bool tau) {
  int m = 0;
  for (const auto &t : a.terms)
    m = std::max(m, tau ? t.j : t.k);
  return m;
}

int max_trig_mode(const SeparableAtom &a) {
  int m = 0;
  for (const auto &t : a.terms)
    for (const auto &[k, c] : t.T.coeffs())
      m = std::max(m, std::abs(k));
  return m;
}

// q(x) = ln cos(tau/R) + i tau/R
cplx q_weight(double tau, double R) { return {std::log(std::cos(tau / R)), tau / R}; }

struct Rule1D {
  std::vector<long double> x, w;
};

Rule1D mapped_rule(double c, double hw, int n) {
  const GaussRuleLD &g = gauss_legendre_ld(n);
  Rule1D r;
  for (int i = 0; i < n; ++i) {
    r.x.push_back(c + hw * g.nodes[i]);
    r.w.push_back(hw * g.weights[i]);
  }
  return r;
}

Profile separable_profile(const SeparableAtom &a, double R, const ProfileOptions &opt) {
  const int M = opt.modes;
  Profile p = Profile::zero(M);
  const int mt = max_trig_mode(a);
  const Rule1D rt = mapped_rule(a.ctau, a.wtau, node_count(opt.node_scale, (M + mt) * a.wtau / R, max_order(a, true)));
  const Rule1D rh = mapped_rule(a.ctheta, a.wtheta, node_count(opt.node_scale, M * a.wtheta, max_order(a, false)));
  using cld = std::complex<long double>;
  std::vector<cplx> tn(M + 1), th(M + 1);
  cld I_acc = 0.0L, Q_acc = 0.0L;
  for (const auto &term : a.terms) {
    std::fill(tn.begin(), tn.end(), cplx(0.0));
    std::fill(th.begin(), th.end(), cplx(0.0));
    cld t0 = 0.0L, tq = 0.0L;
    long double h0 = 0.0L;
    const long double sj = std::pow((long double)a.wtau, -term.j), sk = std::pow((long double)a.wtheta, -term.k);
    for (std::size_t i = 0; i < rt.x.size(); ++i) {
      const long double tau = rt.x[i];
      const long double u = tau / R;
      const long double c = std::cos(u);
      const cld vl = term.T.eval_ld(u) * (bump_derivative_ld(term.j, (tau - a.ctau) / a.wtau) * sj * R / (c * c) * rt.w[i]);
      t0 += vl;
      tq += vl * cld(std::log(c), u);
      const cplx v(double(vl.real()), double(vl.imag()));
      const cplx z = std::polar(1.0, double(u));
      cplx zn = z;
      for (int n = 1; n <= M; ++n) {
        tn[n] += v * zn;
        zn *= z;
      }
    }
    for (std::size_t i = 0; i < rh.x.size(); ++i) {
      const long double vl = bump_derivative_ld(term.k, ((long double)rh.x[i] - a.ctheta) / a.wtheta) * sk * rh.w[i];
      h0 += vl;
      const double v = double(vl);
      const cplx z = std::polar(1.0, -double(rh.x[i]));
      cplx zn = z;
      for (int n = 1; n <= M; ++n) {
        th[n] += v * zn;
        zn *= z;
      }
    }
    I_acc += t0 * h0;
    Q_acc += tq * h0;
    for (int n = 1; n <= M; ++n) {
      p.mode(n) += tn[n] * th[n];
      p.mode(-n) += tn[n] * std::conj(th[n]);
    }
  }
  p.I = cplx(double(I_acc.real()), double(I_acc.imag()));
  p.Q = cplx(double(Q_acc.real()), double(Q_acc.imag()));
  return p;
}

Profile transported_profile(const SeparableAtom &a, const GroupElement &g, double R, const ProfileOptions &opt) {
  const int M = opt.modes;
  Profile p = Profile::zero(M);
  const double stretch = g.matrix()(0, 0) * g.matrix()(0, 0);
  const int mt = max_trig_mode(a);
  const Rule1D rt = mapped_rule(a.ctau, a.wtau, node_count(opt.node_scale, stretch * (M + mt) * a.wtau / R, max_order(a, true)));
  const Rule1D rh = mapped_rule(a.ctheta, a.wtheta, node_count(opt.node_scale, stretch * M * a.wtheta, max_order(a, false)));
  const std::size_t nt = rt.x.size(), nh = rh.x.size();
  using cld = std::complex<long double>;
  // Separable values on the tensor grid.
  std::vector<cld> f(nt * nh, 0.0L);
  for (const auto &term : a.terms) {
    const long double sj = std::pow((long double)a.wtau, -term.j), sk = std::pow((long double)a.wtheta, -term.k);
    std::vector<cld> ft(nt);
    std::vector<long double> fh(nh);
    for (std::size_t i = 0; i < nt; ++i)
      ft[i] = term.T.eval_ld(rt.x[i] / R) * (bump_derivative_ld(term.j, (rt.x[i] - a.ctau) / a.wtau) * sj);
    for (std::size_t k = 0; k < nh; ++k)
      fh[k] = bump_derivative_ld(term.k, (rh.x[k] - a.ctheta) / a.wtheta) * sk;
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t k = 0; k < nh; ++k)
        f[i * nh + k] += ft[i] * fh[k];
  }
  const DsParams params(R);
  cld I_acc = 0.0L, Q_acc = 0.0L;
  for (std::size_t i = 0; i < nt; ++i) {
    const long double c = std::cos(rt.x[i] / R);
    const long double wt = R / (c * c) * rt.w[i];
    for (std::size_t k = 0; k < nh; ++k) {
      const cld vl = f[i * nh + k] * (wt * rh.w[k]);
      if (vl == cld(0.0L))
        continue;
      const DsPoint x = group_action(g, DsPoint(double(rt.x[i]), double(rh.x[k]), params));
      I_acc += vl;
      const cplx q = q_weight(x.tau(), R);
      Q_acc += vl * cld(q.real(), q.imag());
      const cplx v(double(vl.real()), double(vl.imag()));
      const cplx zp = std::polar(1.0, x.tau() / R - x.theta());
      const cplx zm = std::polar(1.0, x.tau() / R + x.theta());
      cplx ap = v, am = v;
      for (int n = 1; n <= M; ++n) {
        ap *= zp;
        am *= zm;
        p.A[2 * (n - 1)] += ap;
        p.A[2 * (n - 1) + 1] += am;
      }
    }
  }
  p.I = cplx(double(I_acc.real()), double(I_acc.imag()));
  p.Q = cplx(double(Q_acc.real()), double(Q_acc.imag()));
  return p;
}

} // namespace

Profile Profile::zero(int M) {
  Profile p;
  p.A.assign(2 * static_cast<std::size_t>(M), cplx(0.0));
  return p;
}

Profile &Profile::axpy(cplx c, const Profile &o) {
  if (A.size() < o.A.size())
    A.resize(o.A.size(), cplx(0.0));
  I += c * o.I;
  Q += c * o.Q;
  for (std::size_t i = 0; i < o.A.size(); ++i)
    A[i] += c * o.A[i];
  return *this;
}

cplx SeparableAtom::eval(double tau, double theta, double R) const {
  const double st = (tau - ctau) / wtau;
  if (!(std::abs(st) < 1.0))
    return 0.0;
  const double sh = wrap_pm_pi(theta - ctheta) / wtheta;
  if (!(std::abs(sh) < 1.0))
    return 0.0;
  cplx v = 0.0;
  for (const auto &t : terms)
    v += t.T.eval(tau / R) * (bump_derivative(t.j, st) * std::pow(wtau, -t.j)) *
         (bump_derivative(t.k, sh) * std::pow(wtheta, -t.k));
  return v;
}

SeparableAtom SeparableAtom::laplacian(double R) const {
  // cos^2(tau/R) (d_tau^2 - R^-2 d_theta^2) applied termwise.
  std::map<std::pair<int, int>, TrigPoly> acc;
  const TrigPoly C = TrigPoly::cos_squared();
  for (const auto &t : terms) {
    const TrigPoly d1 = t.T.derivative() * (1.0 / R);
    const TrigPoly d2 = t.T.derivative().derivative() * (1.0 / (R * R));
    acc[{t.j, t.k}] += C * d2;
    acc[{t.j + 1, t.k}] += C * d1 * 2.0;
    acc[{t.j + 2, t.k}] += C * t.T;
    acc[{t.j, t.k + 2}] += C * t.T * (-1.0 / (R * R));
  }
  SeparableAtom out = *this;
  out.terms.clear();
  for (auto &[jk, T] : acc)
    if (!T.empty())
      out.terms.push_back({T, jk.first, jk.second});
  return out;
}

Atom::Atom(std::shared_ptr<const SeparableAtom> base, const GroupElement &g, bool transported)
    : m_base(std::move(base)), m_g(g), m_ginv(g.inverse()), m_transported(transported) {}

cplx Atom::eval(double tau, double theta, double R) const {
  if (!m_transported)
    return m_base->eval(tau, theta, R);
  const DsPoint y = group_action(m_ginv, DsPoint(tau, theta, DsParams(R)));
  return m_base->eval(y.tau(), y.theta(), R);
}

std::pair<double, double> Atom::tau_extent(double R) const {
  const auto &b = *m_base;
  if (!m_transported)
    return {b.ctau - b.wtau, b.ctau + b.wtau};
  const DsParams params(R);
  double lo = 1e300, hi = -1e300;
  const int n = 256;
  auto visit = [&](double t, double h) {
    const double tau = group_action(m_g, DsPoint(t, h, params)).tau();
    lo = std::min(lo, tau);
    hi = std::max(hi, tau);
  };
  for (int i = 0; i <= n; ++i) {
    const double s = -1.0 + 2.0 * i / n;
    visit(b.ctau + s * b.wtau, b.ctheta - b.wtheta);
    visit(b.ctau + s * b.wtau, b.ctheta + b.wtheta);
    visit(b.ctau - b.wtau, b.ctheta + s * b.wtheta);
    visit(b.ctau + b.wtau, b.ctheta + s * b.wtheta);
  }
  return {lo, hi};
}

const Profile &Atom::profile(double R, const ProfileOptions &opt) const {
  std::lock_guard<std::mutex> lock(m_mtx);
  if (!m_profile || m_profile_modes != opt.modes || m_profile_R != R || m_profile_scale != opt.node_scale) {
    m_profile = std::make_shared<Profile>(m_transported ? transported_profile(*m_base, m_g, R, opt)
                                                        : separable_profile(*m_base, R, opt));
    m_profile_modes = opt.modes;
    m_profile_R = R;
    m_profile_scale = opt.node_scale;
  }
  return *m_profile;
}

Expansion Expansion::single(const SeparableAtom &a, cplx c) {
  Expansion e;
  e.m_entries.push_back(
      {c, std::make_shared<const Atom>(std::make_shared<const SeparableAtom>(a), GroupElement::identity(), false)});
  return e;
}

cplx Expansion::eval(double tau, double theta, double R) const {
  cplx v = 0.0;
  for (const auto &e : m_entries)
    v += e.c * e.atom->eval(tau, theta, R);
  return v;
}

Expansion Expansion::laplacian(double R) const {
  Expansion out;
  for (const auto &e : m_entries) {
    auto base = std::make_shared<const SeparableAtom>(e.atom->base().laplacian(R));
    out.m_entries.push_back({e.c, std::make_shared<const Atom>(base, e.atom->group(), e.atom->transported())});
  }
  return out;
}

Expansion Expansion::transported(const GroupElement &g) const {
  Expansion out;
  for (const auto &e : m_entries) {
    const GroupElement gg = g * e.atom->group();
    const auto &M = gg.matrix();
    const bool rotation = std::abs(M(0, 0) - 1.0) < 1e-14 && std::abs(M(0, 1)) < 1e-14 && std::abs(M(0, 2)) < 1e-14;
    if (rotation) {
      // A rotation only shifts theta, so the atom stays separable.
      SeparableAtom b = e.atom->base();
      b.ctheta = wrap_pm_pi(b.ctheta + std::atan2(M(2, 1), M(1, 1)));
      out.m_entries.push_back(
          {e.c, std::make_shared<const Atom>(std::make_shared<const SeparableAtom>(std::move(b)), GroupElement::identity(), false)});
      continue;
    }
    out.m_entries.push_back({e.c, std::make_shared<const Atom>(e.atom->base_ptr(), gg, true)});
  }
  return out;
}

Profile Expansion::profile(double R, const ProfileOptions &opt) const {
  Profile p = Profile::zero(opt.modes);
  for (const auto &e : m_entries)
    p.axpy(e.c, e.atom->profile(R, opt));
  return p;
}

std::pair<double, double> Expansion::tau_extent(double R) const {
  double lo = 1e300, hi = -1e300;
  for (const auto &e : m_entries) {
    const auto [a, b] = e.atom->tau_extent(R);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  return {lo, hi};
}

Expansion Expansion::operator+(const Expansion &o) const {
  Expansion out = *this;
  out.m_entries.insert(out.m_entries.end(), o.m_entries.begin(), o.m_entries.end());
  return out;
}

Expansion Expansion::operator*(cplx s) const {
  Expansion out = *this;
  for (auto &e : out.m_entries)
    e.c *= s;
  return out;
}

} // namespace ds2
