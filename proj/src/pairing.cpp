#include "ds2/pairing.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

#include "ds2/errors.hpp"

namespace ds2 {

cplx pair_profiles(const Profile &f, const Profile &g, const KernelConvention &conv) {
  const int M = std::min(f.modes(), g.modes());
  cplx s = conv.modal_constant() * std::conj(f.I) * g.I + std::conj(f.Q) * g.I + std::conj(f.I) * g.Q;
  // Sum from the top so the small tail is added first.
  cplx modes = 0.0;
  for (int n = M; n >= 1; --n)
    modes += (std::conj(f.mode(n)) * g.mode(n) + std::conj(f.mode(-n)) * g.mode(-n)) / double(n);
  return (s + modes) / (4.0 * pi);
}

cplx pair_indef(const TestFunction &f, const TestFunction &g, const KernelConvention &conv) {
  return pair_profiles(f.profile(), g.profile(), conv);
}

double mode_tail(const Profile &p) {
  const int M = p.modes();
  double total = std::abs(p.I) + std::abs(p.Q);
  for (const auto &a : p.A)
    total = std::max(total, std::abs(a));
  if (total == 0.0 || M == 0)
    return 0.0;
  return std::max(std::abs(p.mode(M)), std::abs(p.mode(-M))) / total;
}

Eigen::MatrixXcd gram_indef(const std::vector<TestFunction> &basis, const KernelConvention &conv) {
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXcd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      G(i, j) = pair_indef(basis[i], basis[j], conv);
      G(j, i) = std::conj(G(i, j));
    }
  return G;
}

BoundaryValue pair_indef_regularized(const TestFunction &f, const TestFunction &g, const KernelConvention &conv,
                                     const std::vector<double> &eps_levels) {
  const GridSpec &s = f.spec();
  const MeasureGrid mg(s);
  const auto tn = s.tau_nodes();
  const auto hn = s.theta_nodes();
  const DsParams params(s.R);
  struct Node {
    ComplexDsPoint zm, zp;
    cplx v;
  };
  auto collect = [&](const TestFunction &u, bool conj_first, double eps) {
    std::vector<Node> out;
    for (int i = 0; i < s.ntau(); ++i)
      for (int k = 0; k < s.ntheta; ++k) {
        const cplx v = u.values()(i, k);
        if (std::abs(v) < 1e-15)
          continue;
        const cplx w = (conj_first ? std::conj(v) : v) * mg.weights()(i, k);
        out.push_back({ComplexDsPoint::from_conformal(cplx(tn[i], -eps), hn[k], params),
                       ComplexDsPoint::from_conformal(cplx(tn[i], eps), hn[k], params), w});
      }
    return out;
  };
  std::vector<cplx> vals;
  for (double eps : eps_levels) {
    const auto a = collect(f, true, eps);
    const auto b = collect(g, false, eps);
    cplx acc = 0.0;
    for (const auto &x : a)
      for (const auto &y : b)
        acc += x.v * y.v * massless_w(invariant_lambda(x.zm, y.zp, params), conv);
    vals.push_back(acc);
  }
  return neville_zero(eps_levels, vals);
}

namespace {

// Coefficients of W_alpha around w = (1 + lambda)/2 = 0:
//   4 pi W_alpha = A(w) - B(w) ln w,  B(0) = 1.
struct LogSeries {
  std::vector<cplx> a, b;
  explicit LogSeries(cplx alpha, int n = 160) {
    const cplx p = 1.0 - alpha, q = alpha;
    cplx coef = 1.0;
    cplx psi1 = digamma_c(1.0), psip = digamma_c(p), psiq = digamma_c(q);
    for (int k = 0; k < n; ++k) {
      b.push_back(coef);
      a.push_back(coef * (2.0 * psi1 - psip - psiq));
      coef *= (p + double(k)) * (q + double(k)) / (double(k + 1) * double(k + 1));
      psi1 += 1.0 / double(k + 1);
      psip += 1.0 / (p + double(k));
      psiq += 1.0 / (q + double(k));
    }
  }
  cplx remainder(double w, cplx L, cplx C) const {
    cplx A = 0.0, B = 0.0;
    for (std::size_t k = a.size(); k-- > 1;) {
      A = A * w + a[k];
      B = B * w + b[k];
    }
    A = A * w + a[0];
    B = B * w; // B(w) - 1
    return (A - B * L) / (4.0 * pi) - C;
  }
};

cplx remainder_with(const LogSeries &ls, const MassParam &m, cplx C, double u, double up, double dtheta) {
  const double cu = std::cos(u), cup = std::cos(up);
  const double w = (std::cos(u - up) - std::cos(dtheta)) / (2.0 * cu * cup);
  const double lam = 2.0 * w - 1.0;
  const LambdaSide side = std::sin(u - up) > 0.0 ? LambdaSide::above : LambdaSide::below;
  if (std::abs(w) <= 0.75) {
    cplx L = std::log(std::abs(w));
    if (w < 0.0)
      L += cplx(0.0, side == LambdaSide::above ? pi : -pi);
    if (w == 0.0)
      return ls.remainder(0.0, 0.0, C);
    return ls.remainder(w, L, C);
  }
  const KernelConvention series{};
  if (lam < -1.0)
    return massive_w(m, lam, side) - C - massless_w(lam, series, side);
  return massive_w(m, lam) - C - massless_w(lam, series);
}

} // namespace

cplx massive_remainder(const MassParam &m, double tau, double taup, double dtheta, double R) {
  const LogSeries ls(m.alpha());
  return remainder_with(ls, m, subtraction_constant(m), tau / R, taup / R, dtheta);
}

Eigen::MatrixXcd gram_massive(const std::vector<TestFunction> &basis, const MassParam &m) {
  const int nb = static_cast<int>(basis.size());
  if (nb == 0)
    return Eigen::MatrixXcd(0, 0);
  const GridSpec &s = basis[0].spec();
  const KernelConvention series{};
  const cplx C = subtraction_constant(m);
  Eigen::MatrixXcd G(nb, nb);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      const Profile &pi_ = basis[i].profile();
      const Profile &pj = basis[j].profile();
      G(i, j) = pair_profiles(pi_, pj, series) + C * std::conj(pi_.I) * pj.I;
    }
  const int nt = s.ntau(), nh = s.ntheta;
  const auto tn = s.tau_nodes();
  const auto tw = s.tau_weights();
  const double dh = 2.0 * pi / nh;
  Eigen::FFT<double> fft;
  // Row spectra F_i(tau, m) of each basis function.
  std::vector<std::vector<std::vector<cplx>>> F(nb, std::vector<std::vector<cplx>>(nt));
  std::vector<bool> active(nt, false);
  for (int b = 0; b < nb; ++b)
    for (int i = 0; i < nt; ++i) {
      std::vector<cplx> row(nh);
      bool nz = false;
      for (int k = 0; k < nh; ++k) {
        row[k] = basis[b].values()(i, k);
        nz = nz || std::abs(row[k]) > 1e-15;
      }
      if (nz)
        active[i] = true;
      fft.fwd(F[b][i], row);
    }
  const LogSeries ls(m.alpha());
  std::vector<cplx> r(nh), rhat(nh);
  for (int i = 0; i < nt; ++i) {
    if (!active[i])
      continue;
    const double ci = std::cos(tn[i] / s.R);
    const double wi = tw[i] * s.R / (ci * ci);
    for (int j = 0; j < nt; ++j) {
      if (!active[j])
        continue;
      const double cj = std::cos(tn[j] / s.R);
      const double wj = tw[j] * s.R / (cj * cj);
      for (int k = 0; k < nh; ++k)
        r[k] = remainder_with(ls, m, C, tn[i] / s.R, tn[j] / s.R, 2.0 * pi * k / nh);
      fft.fwd(rhat, r);
      const double scale = wi * wj * dh * dh / nh;
      for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b) {
          cplx acc = 0.0;
          for (int k = 0; k < nh; ++k)
            acc += std::conj(F[a][i][k]) * rhat[k] * F[b][j][k];
          G(a, b) += scale * acc;
        }
    }
  }
  return G;
}

HConstruction construct_h(const DsPoint &seed_center, const GridSpec &spec, const KernelConvention &conv,
                          const HOptions &opt) {
  const TestFunction raw = bump(seed_center, opt.w_tau, opt.w_theta, 1.0, spec);
  const TestFunction h1 = raw * (1.0 / integral(raw));
  const TestFunction bg = laplace_beltrami(h1);
  HConstruction out{h1, h1};
  out.h1_norm = pair_indef(h1, h1, conv);
  out.cross_term = pair_indef(h1, bg, conv);
  if (std::abs(out.cross_term.real()) < 1e-12)
    throw ConditioningError("degenerate correction: <h1, Box g> vanishes");
  out.beta = -out.h1_norm.real() / (2.0 * out.cross_term.real());
  out.beta_closed_form = 2.0 * pi * spec.R * spec.R * out.h1_norm.real();
  out.h = h1 + bg * out.beta;
  const cplx ih = integral(out.h);
  const cplx hh = pair_indef(out.h, out.h, conv);
  if (std::abs(ih - 1.0) > 1e-9 || std::abs(hh) > 1e-7 * std::max(1.0, std::abs(out.h1_norm)))
    throw ConvergenceError("reference function constraints not met", std::max(std::abs(ih - 1.0), std::abs(hh)));
  return out;
}

} // namespace ds2
