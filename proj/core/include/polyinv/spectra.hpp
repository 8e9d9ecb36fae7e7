#pragma once

#include <Eigen/Dense>

namespace polyinv {

/// Physical constants of the single-particle Hamiltonian. Every shipped
/// configuration uses atomic units, so all three are one.
struct UnitSystem {
  double hbar = 1.0;
  double mass = 1.0;
  double charge = 1.0;

  /// hbar^2 / 2m, the total oscillator strength of a one-electron system.
  double sum_rule_strength() const { return hbar * hbar / (2.0 * mass); }
};

inline constexpr UnitSystem kAtomicUnits{};

/// Truncated N-state description of a quantum system: ascending energies
/// and the real symmetric matrix of position (dipole) matrix elements.
///
/// The constructor validates every invariant and throws Error(InvalidInput)
/// naming the first violation, e.g. "dipole not symmetric at (0,2)".
class SpectralData {
 public:
  SpectralData(Eigen::VectorXd energies, Eigen::MatrixXd dipole);

  int num_states() const { return static_cast<int>(energies_.size()); }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::MatrixXd& dipole() const { return dipole_; }

  double energy(int n) const { return energies_(n); }
  double x(int i, int j) const { return dipole_(i, j); }

  /// E_n - E_l.
  double transition_energy(int n, int l) const {
    return energies_(n) - energies_(l);
  }
  double e10() const { return energies_(1) - energies_(0); }

  /// x_ij - x_00 delta_ij: dipoles measured from the ground-state position.
  Eigen::MatrixXd centered_dipole() const;

  /// hbar / sqrt(2 m E_10), the largest ground-to-first-state dipole the
  /// sum rules allow.
  double x_max(const UnitSystem& units = kAtomicUnits) const;

  /// Lowest `n` states.
  SpectralData truncated(int n) const;

  /// Width rescaling x -> lambda x, E -> E / lambda^2, followed by a rigid
  /// energy shift. Leaves every scale-free quantity unchanged.
  SpectralData rescaled(double length_scale, double energy_offset = 0.0) const;

 private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXd dipole_;
};

/// Dimensionless form of a spectrum: e_n = E_n/E_10, xi = x/x_max.
struct ScaleFreeSpectra {
  Eigen::VectorXd e;
  Eigen::MatrixXd xi;
  double x_max = 0.0;
};

ScaleFreeSpectra scale_free(const SpectralData& s,
                            const UnitSystem& units = kAtomicUnits);

/// Generalized Thomas-Reiche-Kuhn deviation matrix
///   S_pq = sum_n (E_n - (E_p + E_q)/2) x_pn x_nq - (hbar^2/2m) delta_pq.
/// Zero for a spectrally complete system; truncation shows up in the rows
/// of the highest states.
Eigen::MatrixXd trk_residual(const SpectralData& s,
                             const UnitSystem& units = kAtomicUnits);

/// Magnitude of x_{0,target} that saturates the ground-state sum rule given
/// every other ground-row element. Throws NegativeResidual when the row is
/// already over-saturated.
double complete_dipole_row(const SpectralData& s, int target_state,
                           const UnitSystem& units = kAtomicUnits);

/// Copy of `s` with x_{0,target} = x_{target,0} set to the positive root
/// returned by complete_dipole_row.
SpectralData with_completed_row(const SpectralData& s, int target_state,
                                const UnitSystem& units = kAtomicUnits);

/// Scale-free sum-of-squares discrepancy between two spectra of equal size,
/// comparing |xbar_ij|^2 / x_max^2 element by element over all N x N pairs.
double fom(const SpectralData& calc, const SpectralData& init,
           const UnitSystem& units = kAtomicUnits);

/// FOM divided by the number of compared elements, N^2.
double normalized_fom(double fom_value, int num_states);

}  // namespace polyinv
