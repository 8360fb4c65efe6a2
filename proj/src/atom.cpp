#include "cpforce/atom.hpp"

#include <cmath>
#include <string>

#include "cpforce/error.hpp"
#include "cpforce/units.hpp"

namespace cpforce {

AtomSpec::AtomSpec(std::vector<double> energies, double coupling_g)
    : energies_(std::move(energies)), coupling_g_(coupling_g) {
  if (energies_.size() < 2) throw DomainError("AtomSpec: need at least two levels");
  if (!(coupling_g_ >= 0.0) || !std::isfinite(coupling_g_))
    throw DomainError("AtomSpec: coupling g must be non-negative");
  for (std::size_t n = 0; n < energies_.size(); ++n) {
    if (!std::isfinite(energies_[n])) throw DomainError("AtomSpec: non-finite level energy");
    if (n > 0 && energies_[n] < energies_[0])
      throw DomainError("AtomSpec: level 0 must be the ground state");
  }
  dipoles_.assign(energies_.size() * energies_.size(), Vec3::Zero());
}

AtomSpec AtomSpec::two_level(double coupling_g, double omega10, double theta, double phi) {
  if (!(omega10 > 0.0)) throw DomainError("two_level: omega10 must be positive");
  AtomSpec atom({0.0, omega10}, coupling_g);
  atom.set_dipole(1, 0,
                  Vec3(std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta),
                       std::cos(theta)));
  return atom;
}

void AtomSpec::set_dipole(int m, int n, const Vec3& d) {
  const int N = size();
  if (m < 0 || n < 0 || m >= N || n >= N) throw DomainError("set_dipole: level index out of range");
  if (m == n) throw DomainError("set_dipole: permanent dipoles d_nn are not supported");
  if (!d.allFinite()) throw DomainError("set_dipole: non-finite dipole");
  dipoles_[m * N + n] = d;
  dipoles_[n * N + m] = d;
}

const Vec3& AtomSpec::dipole(int m, int n) const {
  const int N = size();
  if (m < 0 || n < 0 || m >= N || n >= N) throw DomainError("dipole: level index out of range");
  return dipoles_[m * N + n];
}

double AtomSpec::kappa() const { return dipole_coupling(coupling_g_); }

double AtomSpec::reference_C() const {
  const Vec3& d = dipole(1, 0);
  return reduced_C_over_hbar(coupling_g_, d.squaredNorm(), d.z() * d.z());
}

AtomSpec AtomSpec::with_omega10(double omega10) const {
  if (!is_two_level()) throw NotApplicableError("with_omega10: two-level atoms only");
  AtomSpec copy = *this;
  copy.energies_[1] = copy.energies_[0] + omega10;
  return copy;
}

PolarizabilityEval alpha0(const AtomSpec& atom, int l, cdouble omega) {
  PolarizabilityEval out;
  out.omega = omega;
  out.pair = {l, l};
  for (int k = 0; k < atom.size(); ++k) {
    const Vec3& d = atom.dipole(l, k);
    if (k == l || d.isZero()) continue;
    const double w = atom.omega(k, l);
    const cdouble denom = w * w - omega * omega;
    if (std::abs(denom) <= 1e-14 * w * w)
      throw PoleError("alpha0: omega hits the transition to level k = " + std::to_string(k), k);
    out.tensor += (2.0 * w / denom) * (d * d.transpose()).cast<cdouble>();
  }
  return out;
}

cdouble alpha0_scalar(const AtomSpec& atom, int l, cdouble omega) {
  cdouble sum = 0.0;
  for (int k = 0; k < atom.size(); ++k) {
    const Vec3& d = atom.dipole(l, k);
    if (k == l || d.isZero()) continue;
    const double w = atom.omega(k, l);
    const cdouble denom = w * w - omega * omega;
    if (std::abs(denom) <= 1e-14 * w * w)
      throw PoleError("alpha0_scalar: omega hits the transition to level k = " + std::to_string(k), k);
    sum += 2.0 * w * d.squaredNorm() / (3.0 * denom);
  }
  return sum;
}

PolarizabilityEval alpha_generalized(const AtomSpec& atom, const ShiftedSpectrum& spectrum,
                                     int m, int n, cdouble omega) {
  if (spectrum.size() != atom.size())
    throw DomainError("alpha_generalized: spectrum and atom sizes differ");
  const cdouble i(0.0, 1.0);
  PolarizabilityEval out;
  out.omega = omega;
  out.pair = {m, n};
  const auto& wt = spectrum.omega_tilde;
  const auto& G = spectrum.widths;
  for (int k = 0; k < atom.size(); ++k) {
    const Vec3& dmk = atom.dipole(m, k);
    const Vec3& dkn = atom.dipole(k, n);
    if (dmk.isZero() || dkn.isZero()) continue;
    const cdouble first = wt(k, n) - omega - i * (G(k) + G(m)) / 2.0;
    const cdouble second = wt(k, m) + omega + i * (G(k) + G(n)) / 2.0;
    out.tensor += (dmk * dkn.transpose()).cast<cdouble>() / first;
    out.tensor += (dkn * dmk.transpose()).cast<cdouble>() / second;
  }
  return out;
}

ShiftedSpectrum bare_spectrum(const AtomSpec& atom, double z) {
  const int N = atom.size();
  ShiftedSpectrum s;
  s.z = z;
  s.omega_tilde.resize(N, N);
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n) s.omega_tilde(m, n) = atom.omega(m, n);
  s.widths = Eigen::VectorXd::Zero(N);
  s.level_shifts = Eigen::VectorXd::Zero(N);
  s.shift_channels = Eigen::MatrixXd::Zero(N, N);
  s.width_channels = Eigen::MatrixXd::Zero(N, N);
  return s;
}

}  // namespace cpforce
