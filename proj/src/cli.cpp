#include "ds2/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include "ds2/errors.hpp"
#include "ds2/fock.hpp"
#include "ds2/krein.hpp"

namespace ds2 {

bool Check::pass() const {
  if (!std::isfinite(value))
    return false;
  if (relation == "<")
    return value < bound;
  if (relation == ">=")
    return value >= bound;
  return value <= bound;
}

Check at_most(std::string name, std::string tag, double value, double bound) {
  return {std::move(name), std::move(tag), value, bound, "<="};
}

Check below(std::string name, std::string tag, double value, double bound) {
  return {std::move(name), std::move(tag), value, bound, "<"};
}

bool Report::passed() const {
  for (const auto &c : checks)
    if (!c.pass())
      return false;
  return true;
}

nlohmann::ordered_json Report::to_json(const RunConfig &cfg) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  nlohmann::ordered_json c = nlohmann::ordered_json::object();
  for (const auto &[k, v] : cfg.entries())
    c[k] = v;
  j["config"] = c;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto &ch : checks)
    j["checks"].push_back({{"name", ch.name},
                           {"tag", ch.tag},
                           {"value", ch.value},
                           {"relation", ch.relation},
                           {"bound", ch.bound},
                           {"pass", ch.pass()}});
  j["data"] = data;
  j["pass"] = passed();
  return j;
}

namespace {

using json = nlohmann::ordered_json;

double uniform(std::mt19937_64 &rng, double a, double b) {
  return a + (b - a) * double(rng() >> 11) * 0x1.0p-53;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const Eigen::MatrixXcd &A) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < A.cols(); ++k)
      r.push_back(to_json(A(i, k)));
    rows.push_back(r);
  }
  return rows;
}

double min_eig_rel(const Eigen::MatrixXcd &G) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (G + G.adjoint()));
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  return top > 0.0 ? es.eigenvalues()(0) / top : 0.0;
}

// Random real bumps with centres |tau| <= tau_max.
std::vector<TestFunction> random_bumps(std::mt19937_64 &rng, int n, const GridSpec &spec, double tau_max) {
  const double R = spec.R;
  const DsParams P(R);
  std::vector<TestFunction> out;
  for (int i = 0; i < n; ++i) {
    const double tc = uniform(rng, -tau_max, tau_max) * R;
    const double hc = uniform(rng, 0.0, 2.0 * pi);
    const double wt = uniform(rng, 0.2, 0.3) * R;
    const double wh = uniform(rng, 0.4, 0.8);
    out.push_back(bump(DsPoint(tc, hc, P), wt, wh, 1.0, spec));
  }
  return out;
}

template <class F> cplx fd_box(F f, double tau, double theta, double R) {
  const double ht = 1e-3 * R, hh = 1e-3;
  auto d2 = [](cplx m2, cplx m1, cplx c, cplx p1, cplx p2, double h) {
    return (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
  };
  const cplx c = f(tau, theta);
  const cplx ftt = d2(f(tau - 2 * ht, theta), f(tau - ht, theta), c, f(tau + ht, theta), f(tau + 2 * ht, theta), ht);
  const cplx fhh = d2(f(tau, theta - 2 * hh), f(tau, theta - hh), c, f(tau, theta + hh), f(tau, theta + 2 * hh), hh);
  const double cs = std::cos(tau / R);
  return cs * cs * (ftt - fhh / (R * R));
}

KreinContext make_context(const RunConfig &cfg, const GridSpec &spec) {
  return KreinContext::build(DsPoint(0.1 * cfg.R, 1.0, DsParams(cfg.R)), spec, cfg.kernel_convention());
}

} // namespace

Report cmd_kernel(const RunConfig &cfg) {
  Report r;
  r.command = "kernel";
  const KernelConvention conv = cfg.kernel_convention();
  if (cfg.lambda_min <= -1.0)
    throw UsageError("lambda grid must stay above the cut at lambda = -1");
  const bool massless = cfg.kernel_alpha == "massless";
  const double alpha = massless ? 0.0 : std::stod(cfg.kernel_alpha);

  CsvFile t{"kernel", {"lambda", "re", "im"}, {}};
  for (int i = 0; i < cfg.lambda_points; ++i) {
    const double lam = cfg.lambda_min + (cfg.lambda_max - cfg.lambda_min) * double(i) / double(cfg.lambda_points - 1);
    const cplx w = massless ? massless_w(lam, conv) : massive_w(MassParam(alpha), lam);
    t.rows.push_back({lam, w.real(), w.imag()});
  }
  r.tables.push_back(std::move(t));

  const cplx w1 = massless_w(1.0, conv);
  r.data["massless_at_1"] = to_json(w1);
  if (conv.scheme == ConstantScheme::series_limit)
    r.checks.push_back(at_most("massless_kernel_at_lambda_1", "series-constant", std::abs(w1), 1e-15));
  const cplx wh = massive_w(MassParam(0.5), 1.0);
  r.data["alpha_half_at_1"] = to_json(wh);
  r.checks.push_back(at_most("alpha_half_at_lambda_1_minus_quarter", "massive-kernel", std::abs(wh - 0.25), 1e-14));

  // Pointwise wave operator on W0 and on the flat-remark function.
  std::mt19937_64 rng(cfg.seed);
  const double R = cfg.R;
  const DsParams P(R);
  double box_w0 = 0.0, box_f = 0.0, jump = 0.0;
  int nw = 0, nf = 0, nj = 0;
  json probes = json::array();
  while (nw < 10 || nf < 10 || nj < 5) {
    const DsPoint x(uniform(rng, -0.6, 0.6) * R, uniform(rng, 0.0, 2.0 * pi), P);
    const DsPoint y(uniform(rng, -0.6, 0.6) * R, uniform(rng, 0.0, 2.0 * pi), P);
    const double lam = invariant_lambda(x, y, P);
    if (nw < 10 && std::abs(lam + 1.0) > 0.3) {
      auto f = [&](double t, double h) { return massless_w_pair(DsPoint(t, h, P), y, conv); };
      const double res = std::abs(fd_box(f, x.tau(), x.theta(), R) + 1.0 / (4.0 * pi * R * R)) * R * R;
      box_w0 = std::max(box_w0, res);
      probes.push_back({{"lambda", lam}, {"box_w0_residual", res}});
      ++nw;
    }
    if (nf < 10 && std::abs(lam) < 0.7) {
      auto f = [&](double t, double h) { return flat_remark_f(invariant_lambda(DsPoint(t, h, P), y, P)); };
      box_f = std::max(box_f, std::abs(fd_box(f, x.tau(), x.theta(), R)) * R * R);
      ++nf;
    }
    if (nj < 5 && lam > 1.05) {
      const cplx up = flat_remark_f(cplx(lam, 1e-13)), dn = flat_remark_f(cplx(lam, -1e-13));
      jump = std::max(jump, std::abs(std::abs(up - dn) - 2.0 * pi));
      if (std::abs(up.imag() + pi) > 1e-9 || std::abs(dn.imag() - pi) > 1e-9)
        jump = std::max(jump, 1.0);
      ++nj;
    }
  }
  r.data["box_w0_probes"] = probes;
  r.checks.push_back(at_most("box_w0_plus_inverse_4piR2", "anomaly-pointwise", box_w0, 1e-6));
  r.checks.push_back(at_most("box_flat_remark_function", "remark-solution", box_f, 1e-6));
  r.checks.push_back(at_most("flat_remark_jump_minus_2pi", "remark-cut", jump, 1e-9));
  return r;
}

Report cmd_limit(const RunConfig &cfg) {
  Report r;
  r.command = "limit";
  if (cfg.lambda_min <= -1.0)
    throw UsageError("lambda grid must stay above the cut at lambda = -1");
  const KernelConvention series{ConstantScheme::series_limit};
  const std::vector<double> alphas = {1e-2, 1e-3, 1e-4};
  CsvFile t{"limit", {"alpha", "max_residual"}, {}};
  std::vector<double> lx, ly;
  for (double a : alphas) {
    const MassParam m(a);
    const cplx C = subtraction_constant(m);
    double worst = 0.0;
    for (int i = 0; i < cfg.lambda_points; ++i) {
      const double lam =
          cfg.lambda_min + (cfg.lambda_max - cfg.lambda_min) * double(i) / double(cfg.lambda_points - 1);
      worst = std::max(worst, std::abs(massive_w(m, lam) - C - massless_w(lam, series)));
    }
    t.rows.push_back({a, worst});
    lx.push_back(std::log(a));
    ly.push_back(std::log(worst));
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3.0, my = (ly[0] + ly[1] + ly[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  r.data["slope"] = slope;
  r.tables.push_back(std::move(t));
  r.checks.push_back(at_most("limit_slope_minus_one", "massless-limit", std::abs(slope - 1.0), 0.1));
  return r;
}

Report cmd_krein(const RunConfig &cfg) {
  Report r;
  r.command = "krein";
  const GridSpec spec = cfg.grid();
  const KernelConvention conv = cfg.kernel_convention();
  const double R = cfg.R;
  const DsParams P(R);
  std::mt19937_64 rng(cfg.seed);
  const KreinContext ctx = make_context(cfg, spec);
  const TestFunction &h = ctx.h(), &v0 = ctx.v0();
  const auto basis = random_bumps(rng, cfg.basis_size, spec, 0.45);

  // Anomaly on random pairs.
  double anomaly = 0.0;
  for (int k = 0; k < 5; ++k) {
    const TestFunction &f = basis[k % basis.size()];
    const TestFunction &g = basis[(k + 3) % basis.size()];
    const cplx lhs = pair_indef(laplace_beltrami(f), g, conv);
    const cplx rhs = -std::conj(integral(f)) * integral(g) / (4.0 * pi * R * R);
    anomaly = std::max(anomaly, std::abs(lhs - rhs) / std::abs(rhs));
  }
  r.checks.push_back(at_most("anomaly_relative", "anomaly", anomaly, 1e-6));

  // Zero-integral Gram.
  std::vector<TestFunction> d0;
  for (const auto &f : basis)
    d0.push_back(f - h * integral(f));
  const Eigen::MatrixXcd G0 = gram_indef(d0, conv);
  const double d0_min = min_eig_rel(G0);
  r.data["zero_integral_gram_min_eig_rel"] = d0_min;
  r.checks.push_back(at_most("zero_integral_gram_negativity", "positivity-d0", -d0_min, 1e-8));

  // Negative-norm witness on the full space.
  const double a = 0.8 * R;
  const TestFunction wit = bump(DsPoint(a, 1.0, P), 0.2 * R, 2.0, 1.0, spec) -
                           bump(DsPoint(-a, 1.0, P), 0.2 * R, 2.0, cplx(0.0, 1.0), spec);
  const double wnorm = pair_indef(wit, wit, conv).real();
  r.data["witness_norm"] = wnorm;
  r.checks.push_back(below("witness_indefinite_norm", "indefinite-full-space", wnorm, 0.0));

  // Massive kernel, full basis.
  std::vector<TestFunction> full = basis;
  full.push_back(h);
  const double m_min = min_eig_rel(gram_massive(full, MassParam(0.5)));
  r.data["massive_gram_min_eig_rel"] = m_min;
  r.checks.push_back(at_most("massive_gram_negativity", "positivity-massive", -m_min, 1e-8));

  // Krein products.
  const cplx hh = krein_product(h, h, ctx), vv = krein_product(v0, v0, ctx), vh = krein_product(v0, h, ctx);
  r.data["krein_h_h"] = to_json(hh);
  r.data["krein_v0_v0"] = to_json(vv);
  r.data["krein_v0_h"] = to_json(vh);
  r.checks.push_back(at_most("krein_h_h_minus_one", "krein-h", std::abs(hh - 1.0), 1e-5));
  r.checks.push_back(at_most("krein_v0_v0_minus_one", "krein-v0-normalization", std::abs(vv - 1.0), 1e-3));
  r.checks.push_back(at_most("krein_v0_h", "krein-v0-h-orthogonal", std::abs(vh), 1e-5));
  double func = 0.0, lemma = 0.0;
  for (int k = 0; k < 5; ++k) {
    const TestFunction &f = basis[(2 * k + 1) % basis.size()];
    const cplx If = integral(f);
    func = std::max(func, std::abs(pair_indef(v0, f, conv) - If) / (1.0 + std::abs(If)));
    const FunctionalCheck fc = functional_check(f, ctx);
    lemma = std::max(lemma, std::abs(fc.lhs - fc.rhs) / (1.0 + std::abs(fc.rhs)));
  }
  r.checks.push_back(at_most("v0_pairing_minus_integral", "v0-functional", func, 1e-5));
  r.checks.push_back(at_most("krein_v0_f_minus_h_pairing", "v0-krein-functional", lemma, 1e-5));
  r.checks.push_back(at_most("v0_indefinite_norm", "double-anomaly", std::abs(pair_indef(v0, v0, conv)), 1e-6));
  r.checks.push_back(at_most("v0_integral", "v0-zero-integral", std::abs(integral(v0)), 1e-9));
  const TestFunction g0 = basis[0] - basis[1] * (integral(basis[0]) / integral(basis[1]));
  r.checks.push_back(at_most("nihil_norm_box_zero_integral", "null-ideal", nihil_norm(laplace_beltrami(g0), ctx), 1e-8));

  // Metric operator.
  std::vector<TestFunction> extra(basis.begin(), basis.end());
  const GramPair gp = krein_metric(extra, ctx);
  const Eigen::MatrixXcd &eta = gp.eta;
  const int n = static_cast<int>(eta.rows());
  const double swap = std::max({std::abs(eta(0, 1) - 1.0), std::abs(eta(1, 0) - 1.0), std::abs(eta(0, 0)),
                                std::abs(eta(1, 1))});
  const double block =
      (eta.bottomRightCorner(n - 2, n - 2) - Eigen::MatrixXcd::Identity(n - 2, n - 2)).cwiseAbs().maxCoeff();
  const double off = std::max(eta.topRightCorner(2, n - 2).cwiseAbs().maxCoeff(),
                              eta.bottomLeftCorner(n - 2, 2).cwiseAbs().maxCoeff());
  const double sq = (eta * eta - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  r.checks.push_back(at_most("eta_swaps_h_v0", "metric-swap", swap, 1e-5));
  r.checks.push_back(at_most("eta_identity_on_complement", "metric-identity", std::max(block, off), 1e-5));
  r.checks.push_back(at_most("eta_squared_minus_identity", "metric-involution", sq, 1e-5));
  const double gk_min = min_eig_rel(gp.G_krein);
  r.checks.push_back(at_most("krein_gram_negativity", "krein-positive", -gk_min, 1e-8));
  double restr = 0.0;
  for (int i = 2; i < n; ++i)
    for (int k = 2; k < n; ++k)
      restr = std::max(restr, std::abs(gp.G_krein(i, k) - gp.G_indef(i, k)));
  r.checks.push_back(at_most("krein_equals_indefinite_on_complement", "krein-restriction", restr, 1e-6));
  r.data["rank"] = gp.rank;
  r.data["G_indef"] = to_json(gp.G_indef);
  r.data["G_krein"] = to_json(gp.G_krein);
  r.data["eta"] = to_json(gp.eta);
  return r;
}

Report cmd_fock(const RunConfig &cfg) {
  Report r;
  r.command = "fock";
  const GridSpec spec = cfg.grid();
  std::mt19937_64 rng(cfg.seed);
  const KreinContext ctx = make_context(cfg, spec);
  const auto basis = random_bumps(rng, cfg.basis_size, spec, 0.45);
  const GramPair gp = krein_metric(basis, ctx);
  const OneParticleSpace ops(gp, ctx, cfg.fock_modes);
  const FockRep rep(cfg.fock_modes, cfg.fock_particles);
  const int N = cfg.fock_particles;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(rep.dim(), rep.dim());
  r.data["fock_dim"] = rep.dim();

  const Eigen::MatrixXcd K1 = ops.coefficients().adjoint() * gp.G_krein.topLeftCorner(ops.dim(), ops.dim()) *
                              ops.coefficients();
  r.checks.push_back(at_most("orthonormal_basis_gram", "one-particle-basis",
                             (K1 - Eigen::MatrixXcd::Identity(ops.dim(), ops.dim())).cwiseAbs().maxCoeff(), 1e-8));

  const Eigen::MatrixXcd phi_v = field_op(ops.v0(), rep, ops.eta());
  const Eigen::MatrixXcd Q = charge(rep, ops);
  const Eigen::MatrixXcd pp = phi_plus(rep, ops), pm = phi_minus(rep, ops);
  double c_vf = 0.0, c_qf = 0.0, c_pp = 0.0, c_pm = 0.0, two_point = 0.0;
  const Eigen::VectorXcd vac = rep.vacuum();
  for (int k = 0; k < 3; ++k) {
    const TestFunction &f = basis[basis.size() - 1 - k];
    const Eigen::VectorXcd fc = ops.coords(f);
    const cplx If = integral(f);
    const Eigen::MatrixXcd phi_f = field_op(fc, rep, ops.eta());
    c_vf = std::max(c_vf, sector_norm(phi_v * phi_f - phi_f * phi_v, rep, N - 2));
    c_qf = std::max(c_qf, sector_norm(Q * phi_f - phi_f * Q + cplx(0.0, 1.0) * If * I, rep, N - 2));
    c_pp = std::max(c_pp, sector_norm(pp * phi_f - phi_f * pp + 0.5 * If * I, rep, N - 2));
    c_pm = std::max(c_pm, sector_norm(pm * phi_f - phi_f * pm - 0.5 * If * I, rep, N - 2));
    const Eigen::VectorXcd gc = ops.coords(basis[k]);
    const Eigen::MatrixXcd phi_g = field_op(gc, rep, ops.eta());
    const cplx vev = vac.dot(phi_f * phi_g * vac);
    two_point = std::max(two_point, std::abs(vev - ops.indef(fc, gc)));
  }
  r.checks.push_back(at_most("vacuum_two_point_reproduction", "two-point", two_point, 1e-12));
  r.checks.push_back(at_most("commutator_phi_v0_phi_f", "phi-v0-central", c_vf, 1e-10));
  r.checks.push_back(at_most("commutator_Q_phi_f_plus_i_integral", "charge-commutator", c_qf, 1e-8));
  r.checks.push_back(at_most("commutator_phi_plus_phi_f", "phi-plus-commutator", c_pp, 1e-8));
  r.checks.push_back(at_most("commutator_phi_minus_phi_f", "phi-minus-commutator", c_pm, 1e-8));
  // The identity is exact up to the quadrature floor of <v0, v0>.
  r.checks.push_back(at_most("commutator_phi_plus_phi_minus", "phi-pm-commute", sector_norm(pp * pm - pm * pp, rep, N - 2), 1e-12));
  r.data["charge_normalization"] = charge_normalization;

  const TestFunction &f = basis.back();
  const Eigen::MatrixXcd phi_f = field_op(ops.coords(f), rep, ops.eta());
  const cplx If = integral(f);
  const Eigen::MatrixXcd etaF = rep.second_quantize(ops.eta());
  double conj_err = 0.0, eta_err = 0.0;
  json gauge = json::array();
  for (double lam : {0.1, 0.25, 0.5}) {
    const GaugeUnitary g = gauge_unitary(lam, Q, rep);
    const Eigen::MatrixXcd Ui = gauge_unitary(-lam, Q, rep).U;
    const double ce = sector_norm(g.U * phi_f * Ui - phi_f - lam * If * I, rep, N - 3);
    const double ee = sector_norm(g.U.adjoint() * etaF * g.U - etaF, rep, N - 2);
    conj_err = std::max(conj_err, ce);
    eta_err = std::max(eta_err, ee);
    gauge.push_back({{"lambda", lam}, {"conjugation_error", ce}, {"eta_unitarity_error", ee}, {"estimate", g.error_estimate}});
  }
  r.data["gauge"] = gauge;
  r.checks.push_back(at_most("gauge_conjugation_shift", "gauge-shift", conj_err, 1e-8));
  r.checks.push_back(at_most("gauge_eta_unitarity", "gauge-eta-unitary", eta_err, 1e-8));
  const Eigen::VectorXcd qv = Q * vac;
  const double disp = std::abs(qv.dot(etaF * qv));
  r.data["vacuum_displacement_norm"] = disp;
  r.checks.push_back(at_most("vacuum_displacement_indefinite_norm", "zero-norm-vacuum-image", disp, 1e-10));

  // Physical states.
  const Eigen::VectorXcd u = ops.eta() * ops.v0();
  const Eigen::MatrixXcd P1 =
      Eigen::MatrixXcd::Identity(ops.dim(), ops.dim()) - u * u.adjoint() / u.squaredNorm();
  const double phys_min = min_eig_rel(P1.adjoint() * ops.eta() * P1);
  r.checks.push_back(at_most("physical_gram_negativity", "physical-positivity", -phys_min, 1e-8));
  const Eigen::VectorXcd hstate = rep.creator(ops.h()) * vac;
  const Eigen::MatrixXcd Pphys = physical_projector(rep, ops);
  r.data["h_state_defect"] = (hstate - Pphys * hstate).norm();
  return r;
}

Report cmd_charge(const RunConfig &cfg) {
  Report r;
  r.command = "charge";
  const GridSpec spec = cfg.grid();
  const double R = cfg.R;
  const DsParams P(R);
  std::mt19937_64 rng(cfg.seed);
  const KernelConvention conv = cfg.kernel_convention();
  const TestFunction g1 = bump(DsPoint(uniform(rng, -0.2, 0.2) * R, uniform(rng, 0.0, 2.0 * pi), P), 0.5 * R, 1.0, 1.0, spec);
  const TestFunction g2 = bump(DsPoint(uniform(rng, -0.2, 0.2) * R, uniform(rng, 0.0, 2.0 * pi), P), 0.4 * R, 0.8, 0.5, spec);
  const TestFunction g = g1 + g2;
  const EvalGrid eg = EvalGrid::make(spec);
  const SmearedField sf = smear(g, eg, conv);
  const CorrectedCurrent w(sf, cfg.kappa_convention());
  r.data["c0"] = to_json(sf.c0());
  r.data["kappa"] = w.kappa();

  const GridResidual box = smeared_box_residual(sf);
  r.checks.push_back(at_most("smeared_box_u", "smeared-field-equation", box.max_abs, 1e-5));
  const GridResidual hb = hodge_box_residual(sf);
  r.checks.push_back(at_most("d_star_du_minus_box_dvol", "hodge-box", hb.relative(), 1e-4));
  r.checks.push_back(at_most("correction_term_derivative", "correction-derivative",
                             correction_derivative_residual(sf, w.kappa()).max_abs, 1e-6));
  const GridResidual cl = closedness_residual(w.on_grid());
  r.checks.push_back(at_most("closedness", "closed-current", cl.relative(), 1e-4));

  std::vector<double> taus;
  for (int i = 0; i < 8; ++i)
    taus.push_back((-0.9 + 1.8 * double(i) / 7.0) * eg.tau.back());
  const std::vector<cplx> J = slice_charge(w, taus);
  const double spread = relative_spread(J);
  r.checks.push_back(at_most("slice_charge_spread", "conservation", spread, 1e-4));
  cplx mean = 0.0;
  for (const auto &j : J)
    mean += j / double(J.size());
  CsvFile t{"charge", {"tau", "J_real", "J_imag", "spread"}, {}};
  for (std::size_t i = 0; i < J.size(); ++i)
    t.rows.push_back({taus[i], J[i].real(), J[i].imag(), std::abs(mean) > 0.0 ? std::abs(J[i] - mean) / std::abs(mean) : 0.0});
  r.tables.push_back(std::move(t));

  const CorrectedCurrent bare(sf, 0.0);
  const double bare_spread = relative_spread(slice_charge(bare, taus));
  r.data["uncorrected_spread"] = bare_spread;
  r.checks.push_back({"uncorrected_spread_over_tolerance", "negative-control", bare_spread / 1e-4, 10.0, ">="});

  const DualField d = dual_field(w, static_cast<int>(eg.tau.size() / 8), 0);
  const std::vector<cplx> Jd = slice_charge(w, d.tau);
  double wind = 0.0;
  CsvFile wt{"winding", {"tau", "winding_real", "winding_imag", "J_real", "J_imag"}, {}};
  for (std::size_t i = 0; i < d.tau.size(); ++i) {
    wind = std::max(wind, std::abs(d.winding[i] + 8.0 * pi * Jd[i]) / std::abs(8.0 * pi * Jd[i]));
    wt.rows.push_back({d.tau[i], d.winding[i].real(), d.winding[i].imag(), Jd[i].real(), Jd[i].imag()});
  }
  r.tables.push_back(std::move(wt));
  r.checks.push_back(at_most("winding_over_minus_8pi_J", "dual-field-winding", wind, 1e-4));
  r.checks.push_back(at_most("dual_field_path_mismatch", "dual-field-path", d.path_mismatch, 1e-6));
  r.data["dropped_term_coefficient"] = d.dropped_term_coefficient;

  // Commutator function in place of W0.
  const SmearedField sc = smear_commutator(g, eg);
  const std::vector<cplx> Jc = slice_charge(CorrectedCurrent(sc, cfg.kappa_convention()), taus);
  cplx jc = 0.0;
  for (const auto &j : Jc)
    jc += j / double(Jc.size());
  const cplx target = cplx(0.0, -1.0) * integral(g);
  r.data["commutator_charge"] = to_json(jc);
  r.data["commutator_ratio"] = to_json(jc / target);
  r.checks.push_back(at_most("commutator_calibration", "charge-commutator-calibration",
                             std::abs(jc / target - 1.0 / (8.0 * pi)) * 8.0 * pi, 1e-4));

  // Zero-integral smearing: the correction term drops out.
  const TestFunction gz = g1 - g2 * (integral(g1) / integral(g2));
  const SmearedField sz = smear(gz, eg, conv);
  const double z_paper = closedness_residual(CorrectedCurrent(sz, KappaConvention::paper).on_grid()).relative();
  const double z_derived = closedness_residual(CorrectedCurrent(sz, KappaConvention::derived).on_grid()).relative();
  r.checks.push_back(at_most("zero_integral_closed_both_conventions", "zero-integral-current", std::max(z_paper, z_derived), 1e-4));

  // Radius experiment: at R = 2 only one kappa closes.
  {
    RunConfig c2 = cfg;
    c2.R = 2.0;
    const GridSpec s2 = c2.grid();
    const DsParams P2(2.0);
    const TestFunction g2 = bump(DsPoint(0.2, 1.0, P2), 1.0, 1.0, 1.0, s2);
    const SmearedField f2 = smear(g2, EvalGrid::make(s2), conv);
    const double rp = closedness_residual(CorrectedCurrent(f2, KappaConvention::paper).on_grid()).relative();
    const double rd = closedness_residual(CorrectedCurrent(f2, KappaConvention::derived).on_grid()).relative();
    r.data["radius_2_closedness"] = {{"paper", rp}, {"derived", rd}};
  }
  return r;
}

Report cmd_invariance(const RunConfig &cfg) {
  Report r;
  r.command = "invariance";
  const GridSpec spec = cfg.grid();
  const KernelConvention conv = cfg.kernel_convention();
  const double R = cfg.R;
  const DsParams P(R);
  std::mt19937_64 rng(cfg.seed);

  double kern = 0.0;
  for (int k = 0; k < 20; ++k) {
    const GroupElement g = generators(GeneratorKind::rotation, uniform(rng, 0.0, 2.0 * pi)) *
                           generators(GeneratorKind::boost01, uniform(rng, -0.5, 0.5)) *
                           generators(GeneratorKind::boost02, uniform(rng, -0.5, 0.5));
    const DsPoint x(uniform(rng, -0.5, 0.5) * R, uniform(rng, 0.0, 2.0 * pi), P);
    const DsPoint y(uniform(rng, -0.5, 0.5) * R, uniform(rng, 0.0, 2.0 * pi), P);
    const cplx w = massless_w_pair(x, y, conv);
    const cplx wg = massless_w_pair(group_action(g, x), group_action(g, y), conv);
    kern = std::max(kern, std::abs(wg - w) / std::max(1.0, std::abs(w)));
  }
  r.checks.push_back(at_most("kernel_invariance", "kernel-invariance", kern, 1e-8));

  const auto probes = random_bumps(rng, 2, spec, 0.3);
  const cplx base = pair_indef(probes[0], probes[1], conv);
  double smeared = 0.0;
  for (const GroupElement &g : {generators(GeneratorKind::rotation, 1.0), generators(GeneratorKind::boost01, 0.3),
                                generators(GeneratorKind::boost02, -0.25)}) {
    const cplx t = pair_indef(transport(g, probes[0]), transport(g, probes[1]), conv);
    smeared = std::max(smeared, std::abs(t - base) / std::max(1.0, std::abs(base)));
  }
  r.checks.push_back(at_most("smeared_pairing_invariance", "smeared-invariance", smeared, 1e-6));

  const KreinContext ctx = make_context(cfg, spec);
  json v0inv = json::array();
  double worst = 0.0;
  for (const auto &[kind, name, a] : {std::tuple{GeneratorKind::rotation, "rotation", 1.0},
                                      std::tuple{GeneratorKind::boost01, "boost01", 0.3},
                                      std::tuple{GeneratorKind::boost02, "boost02", 0.3}}) {
    const double d = std::abs(v0_invariance(generators(kind, a), ctx));
    v0inv.push_back({{"generator", name}, {"parameter", a}, {"krein_norm", d}});
    worst = std::max(worst, d);
  }
  r.data["v0_invariance"] = v0inv;
  r.checks.push_back(at_most("v0_class_invariance", "v0-invariance", worst, 1e-4));

  const KreinContext ctx2 =
      KreinContext::build(DsPoint(-0.2 * R, 4.0, P), spec, conv, HOptions{0.6, 1.5});
  const TestFunction dv = ctx2.v0() - ctx.v0();
  r.checks.push_back(at_most("h_independence_of_v0", "v0-unique", std::abs(krein_product(dv, dv, ctx)), 1e-5));

  const auto basis = random_bumps(rng, cfg.basis_size, spec, 0.3);
  const GramPair gp = krein_metric(basis, ctx);
  const OneParticleSpace ops(gp, ctx, cfg.fock_modes);
  const FockRep rep(cfg.fock_modes, cfg.fock_particles);
  const Eigen::MatrixXcd U1 = one_particle_action(generators(GeneratorKind::boost01, 0.2), ops);
  r.checks.push_back(at_most("fock_physical_subspace_invariance", "fock-invariance",
                             physical_invariance_defect(U1, rep, ops), 1e-4));
  return r;
}

namespace {

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

} // namespace

void write_report(const Report &r, const RunConfig &cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out);
  {
    std::ofstream out(fs::path(cfg.out) / (r.command + ".json"));
    out << r.to_json(cfg).dump(2) << "\n";
  }
  for (const auto &t : r.tables) {
    std::ofstream out(fs::path(cfg.out) / (t.name + ".csv"));
    for (const auto &[k, v] : cfg.entries())
      out << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto &row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << csv_number(row[i]);
      out << "\n";
    }
  }
}

int run_cli(int argc, char **argv) {
  CLI::App app{"ds2: massless scalar field on two-dimensional de Sitter space"};
  std::string config_path, out, resolution, convention, kappa;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--out", out, "output directory");
  auto *seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--resolution", resolution, "grid resolution")->check(CLI::IsMember({"half", "default", "double"}));
  app.add_option("--convention", convention, "massless kernel constant")->check(CLI::IsMember({"series", "paper"}));
  app.add_option("--kappa", kappa, "current correction coefficient")->check(CLI::IsMember({"paper", "derived"}));
  const std::vector<std::string> names = {"kernel", "limit", "krein", "fock", "charge", "invariance", "all"};
  for (const auto &n : names)
    app.add_subcommand(n, n == "all" ? "run every report" : "run the " + n + " report");
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty())
      cfg = RunConfig::load(config_path);
    if (!out.empty())
      cfg.out = out;
    if (*seed_opt)
      cfg.seed = seed;
    if (!resolution.empty())
      cfg.resolution = resolution;
    if (!convention.empty())
      cfg.convention = convention;
    if (!kappa.empty())
      cfg.kappa = kappa;
    cfg.validate();
  } catch (const Error &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    std::vector<std::string> run = cmd == "all" ? std::vector<std::string>(names.begin(), names.end() - 1)
                                                : std::vector<std::string>{cmd};
    bool ok = true;
    for (const auto &c : run) {
      Report r;
      if (c == "kernel")
        r = cmd_kernel(cfg);
      else if (c == "limit")
        r = cmd_limit(cfg);
      else if (c == "krein")
        r = cmd_krein(cfg);
      else if (c == "fock")
        r = cmd_fock(cfg);
      else if (c == "charge")
        r = cmd_charge(cfg);
      else
        r = cmd_invariance(cfg);
      write_report(r, cfg);
      for (const auto &ch : r.checks)
        std::cout << (ch.pass() ? "PASS " : "FAIL ") << c << "." << ch.name << " = " << ch.value << " (" << ch.relation
                  << " " << ch.bound << ")\n";
      ok = ok && r.passed();
    }
    return ok ? 0 : 1;
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace ds2
