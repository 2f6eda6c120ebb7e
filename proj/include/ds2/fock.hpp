#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ds2/krein.hpp"

namespace ds2 {

// One-particle space: Krein-orthonormal combinations of a GramPair basis.
class OneParticleSpace {
public:
  OneParticleSpace(const GramPair &gp, const KreinContext &ctx, int n_modes);

  int dim() const { return static_cast<int>(m_eta.rows()); }
  // Columns: orthonormal vectors as coefficients over the GramPair basis.
  const Eigen::MatrixXcd &coefficients() const { return m_C; }
  const Eigen::MatrixXcd &eta() const { return m_eta; }
  const Eigen::VectorXcd &h() const { return m_h; }
  const Eigen::VectorXcd &v0() const { return m_v0; }
  const std::vector<TestFunction> &basis() const { return m_basis; }
  // Orthonormal coordinates (e_i, f) of the projection of f.
  Eigen::VectorXcd coords(const TestFunction &f) const;
  // Indefinite product in coordinates: f^* eta g.
  cplx indef(const Eigen::VectorXcd &f, const Eigen::VectorXcd &g) const;

private:
  std::vector<TestFunction> m_basis;
  const KreinContext *m_ctx;
  Eigen::MatrixXcd m_C;
  Eigen::MatrixXcd m_eta;
  Eigen::VectorXcd m_h, m_v0;
};

// Bosonic occupation-number space with total occupation <= max_particles.
class FockRep {
public:
  FockRep(int n_modes, int max_particles);

  int n_modes() const { return m_modes; }
  int max_particles() const { return m_N; }
  int dim() const { return static_cast<int>(m_states.size()); }
  const std::vector<std::vector<int>> &states() const { return m_states; }
  int occupation(int s) const;
  int index(const std::vector<int> &occ) const;

  const Eigen::MatrixXcd &raise(int i) const { return m_raise[i]; }
  Eigen::MatrixXcd lower(int i) const { return m_raise[i].adjoint(); }

  // Orthogonal projector onto states with total occupation <= level.
  Eigen::MatrixXcd sector(int level) const;
  Eigen::VectorXcd vacuum() const;

  Eigen::MatrixXcd creator(const Eigen::VectorXcd &f) const;
  // sum_i conj((eta f)_i) b_i
  Eigen::MatrixXcd annihilator(const Eigen::VectorXcd &f, const Eigen::MatrixXcd &eta) const;
  // Second quantization Gamma(A): creators transformed by A applied to the vacuum.
  Eigen::MatrixXcd second_quantize(const Eigen::MatrixXcd &A) const;

private:
  int m_modes, m_N;
  std::vector<std::vector<int>> m_states;
  std::vector<Eigen::MatrixXcd> m_raise;
};

Eigen::MatrixXcd field_op(const Eigen::VectorXcd &f, const FockRep &rep, const Eigen::MatrixXcd &eta);

// Q = i c (a^dag(v0) - a(v0)); c = 1/2 reproduces [Q, phi(f)] = -i int f.
inline constexpr double charge_normalization = 0.5;
Eigen::MatrixXcd charge(const FockRep &rep, const OneParticleSpace &ops, double normalization = charge_normalization);

// phi_+(v0) = c a^dag(v0), phi_-(v0) = c a(v0) with the charge normalization c.
Eigen::MatrixXcd phi_plus(const FockRep &rep, const OneParticleSpace &ops, double normalization = charge_normalization);
Eigen::MatrixXcd phi_minus(const FockRep &rep, const OneParticleSpace &ops, double normalization = charge_normalization);

struct GaugeUnitary {
  Eigen::MatrixXcd U;
  // Size of the first neglected conjugation term on the protected sector.
  double error_estimate = 0.0;
};
GaugeUnitary gauge_unitary(double lambda, const Eigen::MatrixXcd &Q, const FockRep &rep);

Eigen::MatrixXcd physical_projector(const FockRep &rep, const OneParticleSpace &ops);

// Matrix of f -> alpha_g f in orthonormal coordinates, projected onto the span.
Eigen::MatrixXcd one_particle_action(const GroupElement &g, const OneParticleSpace &ops);

// Norm of (1 - P) Gamma(U1) P for the physical projector P: zero when the
// induced action maps physical states to physical states.
double physical_invariance_defect(const Eigen::MatrixXcd &U1, const FockRep &rep, const OneParticleSpace &ops);

// Operator norm of P A P on the sector with occupation <= level.
double sector_norm(const Eigen::MatrixXcd &A, const FockRep &rep, int level);

} // namespace ds2
