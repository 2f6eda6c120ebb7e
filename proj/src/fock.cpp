#include "ds2/fock.hpp"

#include <cmath>
#include <map>

#include <unsupported/Eigen/MatrixFunctions>

#include "ds2/errors.hpp"

namespace ds2 {

namespace {

double spectral_norm(const Eigen::MatrixXcd &A) {
  if (A.size() == 0)
    return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

} // namespace

OneParticleSpace::OneParticleSpace(const GramPair &gp, const KreinContext &ctx, int n_modes) : m_ctx(&ctx) {
  const int n = static_cast<int>(gp.basis.size());
  if (n_modes < 2 || n_modes > n)
    throw DomainError("one-particle dimension must lie between 2 and the basis size");
  m_basis.assign(gp.basis.begin(), gp.basis.begin() + n_modes);
  const Eigen::MatrixXcd K = gp.G_krein.topLeftCorner(n_modes, n_modes);
  const Eigen::MatrixXcd G = gp.G_indef.topLeftCorner(n_modes, n_modes);
  Eigen::LLT<Eigen::MatrixXcd> llt(0.5 * (K + K.adjoint()));
  if (llt.info() != Eigen::Success)
    throw ConditioningError("Krein Gram matrix is not positive definite on the chosen modes");
  // C = L^{-*}, so C^* K C = 1 and C is upper triangular: Gram-Schmidt in basis order.
  const Eigen::MatrixXcd L = llt.matrixL();
  m_C = L.adjoint().triangularView<Eigen::Upper>().solve(Eigen::MatrixXcd::Identity(n_modes, n_modes));
  m_eta = m_C.adjoint() * G * m_C;
  m_eta = 0.5 * (m_eta + m_eta.adjoint()).eval();
  m_h = coords(ctx.h());
  m_v0 = coords(ctx.v0());
}

Eigen::VectorXcd OneParticleSpace::coords(const TestFunction &f) const {
  const int n = static_cast<int>(m_basis.size());
  Eigen::VectorXcd b(n);
  for (int k = 0; k < n; ++k)
    b(k) = krein_product(m_basis[k], f, *m_ctx);
  return m_C.adjoint() * b;
}

cplx OneParticleSpace::indef(const Eigen::VectorXcd &f, const Eigen::VectorXcd &g) const {
  return (f.adjoint() * m_eta * g)(0, 0);
}

namespace {

void enumerate(int modes, int left, std::vector<int> &cur, std::vector<std::vector<int>> &out) {
  if (static_cast<int>(cur.size()) == modes) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= left; ++k) {
    cur.push_back(k);
    enumerate(modes, left - k, cur, out);
    cur.pop_back();
  }
}

} // namespace

FockRep::FockRep(int n_modes, int max_particles) : m_modes(n_modes), m_N(max_particles) {
  if (n_modes < 1 || max_particles < 1)
    throw DomainError("Fock space needs at least one mode and one particle");
  std::vector<int> cur;
  enumerate(n_modes, max_particles, cur, m_states);
  // Order by total occupation, then lexicographically, so the vacuum is first.
  std::stable_sort(m_states.begin(), m_states.end(), [](const auto &a, const auto &b) {
    int sa = 0, sb = 0;
    for (int x : a)
      sa += x;
    for (int x : b)
      sb += x;
    return sa < sb;
  });
  const int D = dim();
  for (int i = 0; i < n_modes; ++i) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(D, D);
    for (int s = 0; s < D; ++s) {
      if (occupation(s) >= m_N)
        continue;
      std::vector<int> t = m_states[s];
      t[i] += 1;
      A(index(t), s) = std::sqrt(double(t[i]));
    }
    m_raise.push_back(A);
  }
}

int FockRep::occupation(int s) const {
  int n = 0;
  for (int x : m_states[s])
    n += x;
  return n;
}

int FockRep::index(const std::vector<int> &occ) const {
  auto it = std::find(m_states.begin(), m_states.end(), occ);
  if (it == m_states.end())
    throw DomainError("occupation outside the truncated Fock space");
  return static_cast<int>(it - m_states.begin());
}

Eigen::MatrixXcd FockRep::sector(int level) const {
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int s = 0; s < dim(); ++s)
    if (occupation(s) <= level)
      P(s, s) = 1.0;
  return P;
}

Eigen::VectorXcd FockRep::vacuum() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
  v(0) = 1.0;
  return v;
}

Eigen::MatrixXcd FockRep::creator(const Eigen::VectorXcd &f) const {
  if (f.size() != m_modes)
    throw DomainError("coefficient vector does not match the mode count");
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int i = 0; i < m_modes; ++i)
    A += f(i) * m_raise[i];
  return A;
}

Eigen::MatrixXcd FockRep::annihilator(const Eigen::VectorXcd &f, const Eigen::MatrixXcd &eta) const {
  if (f.size() != m_modes || eta.rows() != m_modes)
    throw DomainError("coefficient vector does not match the mode count");
  const Eigen::VectorXcd g = eta * f;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int i = 0; i < m_modes; ++i)
    A += std::conj(g(i)) * m_raise[i].adjoint();
  return A;
}

Eigen::MatrixXcd FockRep::second_quantize(const Eigen::MatrixXcd &A) const {
  const int D = dim();
  std::vector<Eigen::MatrixXcd> cr;
  for (int i = 0; i < m_modes; ++i)
    cr.push_back(creator(A.col(i)));
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(D, D);
  for (int s = 0; s < D; ++s) {
    Eigen::VectorXcd v = vacuum();
    double norm = 1.0;
    for (int i = 0; i < m_modes; ++i)
      for (int k = 0; k < m_states[s][i]; ++k) {
        v = cr[i] * v;
        norm *= double(k + 1);
      }
    G.col(s) = v / std::sqrt(norm);
  }
  return G;
}

Eigen::MatrixXcd field_op(const Eigen::VectorXcd &f, const FockRep &rep, const Eigen::MatrixXcd &eta) {
  return rep.creator(f) + rep.annihilator(f, eta);
}

Eigen::MatrixXcd phi_plus(const FockRep &rep, const OneParticleSpace &ops, double normalization) {
  return normalization * rep.creator(ops.v0());
}

Eigen::MatrixXcd phi_minus(const FockRep &rep, const OneParticleSpace &ops, double normalization) {
  return normalization * rep.annihilator(ops.v0(), ops.eta());
}

Eigen::MatrixXcd charge(const FockRep &rep, const OneParticleSpace &ops, double normalization) {
  return cplx(0.0, 1.0) * (phi_plus(rep, ops, normalization) - phi_minus(rep, ops, normalization));
}

GaugeUnitary gauge_unitary(double lambda, const Eigen::MatrixXcd &Q, const FockRep &rep) {
  GaugeUnitary g;
  const Eigen::MatrixXcd X = cplx(0.0, lambda) * Q;
  g.U = X.exp();
  // Third-order term of the conjugation series is the first that feels the
  // truncation on occupation <= N - 3.
  const double q = spectral_norm(Q);
  g.error_estimate = std::pow(std::abs(lambda) * q, 3) / 6.0 * 2.0 * std::sqrt(double(rep.max_particles()));
  return g;
}

Eigen::MatrixXcd physical_projector(const FockRep &rep, const OneParticleSpace &ops) {
  // One-particle projector onto ker <v0, .> = ker (eta v0)^*.
  const Eigen::VectorXcd u = ops.eta() * ops.v0();
  const int n = ops.dim();
  const Eigen::MatrixXcd P1 = Eigen::MatrixXcd::Identity(n, n) - u * u.adjoint() / u.squaredNorm();
  return rep.second_quantize(P1);
}

Eigen::MatrixXcd one_particle_action(const GroupElement &g, const OneParticleSpace &ops) {
  const int n = ops.dim();
  Eigen::MatrixXcd T(n, n);
  for (int k = 0; k < n; ++k)
    T.col(k) = ops.coords(transport(g, ops.basis()[k]));
  return T * ops.coefficients();
}

double physical_invariance_defect(const Eigen::MatrixXcd &U1, const FockRep &rep, const OneParticleSpace &ops) {
  const Eigen::MatrixXcd P = physical_projector(rep, ops);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(P.rows(), P.cols());
  return spectral_norm((I - P) * rep.second_quantize(U1) * P);
}

double sector_norm(const Eigen::MatrixXcd &A, const FockRep &rep, int level) {
  const Eigen::MatrixXcd P = rep.sector(level);
  const Eigen::MatrixXcd B = P * A * P;
  return spectral_norm(B);
}

} // namespace ds2
