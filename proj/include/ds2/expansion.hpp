#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include "ds2/bump.hpp"
#include "ds2/geometry.hpp"

namespace ds2 {

// Linear data of a test function against the massless mode functions.
//   I = int f dsigma
//   Q = int f (ln cos(tau/R) + i tau/R) dsigma
//   A[n] = int f e^{-i n theta + i |n| tau/R} dsigma   for n = +-1 .. +-M
struct Profile {
  cplx I = 0.0;
  cplx Q = 0.0;
  std::vector<cplx> A; // index n > 0 at 2(n-1), n < 0 at 2(|n|-1)+1

  int modes() const { return static_cast<int>(A.size() / 2); }
  cplx mode(int n) const { return A[n > 0 ? 2 * (n - 1) : 2 * (-n - 1) + 1]; }
  cplx &mode(int n) { return A[n > 0 ? 2 * (n - 1) : 2 * (-n - 1) + 1]; }

  static Profile zero(int M);
  Profile &axpy(cplx c, const Profile &o);
};

// Resolution knobs for the native quadrature behind profiles.
struct ProfileOptions {
  int modes = 512;
  double node_scale = 1.0;
};

// sum of T(tau/R) * B^(j)(tau) * Theta^(k)(theta), B and Theta bump profiles.
struct SeparableTerm {
  TrigPoly T;
  int j = 0;
  int k = 0;
};

struct SeparableAtom {
  double ctau = 0.0, wtau = 1.0;
  double ctheta = 0.0, wtheta = 1.0;
  std::vector<SeparableTerm> terms;

  cplx eval(double tau, double theta, double R) const;
  SeparableAtom laplacian(double R) const;
};

// A separable atom pulled back along a group element: x -> base(g^{-1} x).
class Atom {
public:
  Atom(std::shared_ptr<const SeparableAtom> base, const GroupElement &g, bool transported);

  cplx eval(double tau, double theta, double R) const;
  const SeparableAtom &base() const { return *m_base; }
  const std::shared_ptr<const SeparableAtom> &base_ptr() const { return m_base; }
  const GroupElement &group() const { return m_g; }
  bool transported() const { return m_transported; }
  // Range of tau over the support, in the final chart.
  std::pair<double, double> tau_extent(double R) const;
  const Profile &profile(double R, const ProfileOptions &opt) const;

private:
  std::shared_ptr<const SeparableAtom> m_base;
  GroupElement m_g;
  GroupElement m_ginv;
  bool m_transported;
  mutable std::mutex m_mtx;
  mutable std::shared_ptr<Profile> m_profile;
  mutable int m_profile_modes = -1;
  mutable double m_profile_R = -1.0;
  mutable double m_profile_scale = -1.0;
};

// Finite linear combination of atoms: the analytic generator of a test function.
class Expansion {
public:
  struct Entry {
    cplx c;
    std::shared_ptr<const Atom> atom;
  };

  Expansion() = default;
  static Expansion single(const SeparableAtom &a, cplx c = 1.0);

  cplx eval(double tau, double theta, double R) const;
  Expansion laplacian(double R) const;
  Expansion transported(const GroupElement &g) const;
  Profile profile(double R, const ProfileOptions &opt) const;
  std::pair<double, double> tau_extent(double R) const;

  Expansion operator+(const Expansion &o) const;
  Expansion operator*(cplx s) const;
  const std::vector<Entry> &entries() const { return m_entries; }

private:
  std::vector<Entry> m_entries;
};

} // namespace ds2
