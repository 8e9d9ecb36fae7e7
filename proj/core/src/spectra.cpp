#include "polyinv/spectra.hpp"

#include <cmath>
#include <string>

#include "polyinv/error.hpp"

namespace polyinv {

namespace {

std::string pair_label(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

SpectralData::SpectralData(Eigen::VectorXd energies, Eigen::MatrixXd dipole)
    : energies_(std::move(energies)), dipole_(std::move(dipole)) {
  const auto n = energies_.size();
  if (n < 2) {
    throw Error(ErrorKind::InvalidInput, "spectra need at least 2 states");
  }
  if (dipole_.rows() != n || dipole_.cols() != n) {
    throw Error(ErrorKind::InvalidInput,
                "dipole matrix must be " + std::to_string(n) + "x" +
                    std::to_string(n));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(energies_(i))) {
      throw Error(ErrorKind::InvalidInput,
                  "energy " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(energies_(i) > energies_(i - 1))) {
      throw Error(ErrorKind::InvalidInput,
                  "energies not strictly ascending at index " +
                      std::to_string(i));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(dipole_(i, j))) {
        throw Error(ErrorKind::InvalidInput,
                    "dipole not finite at " + pair_label(int(i), int(j)));
      }
      if (j > i && dipole_(i, j) != dipole_(j, i)) {
        throw Error(ErrorKind::InvalidInput,
                    "dipole not symmetric at " + pair_label(int(i), int(j)));
      }
    }
  }
}

Eigen::MatrixXd SpectralData::centered_dipole() const {
  Eigen::MatrixXd xbar = dipole_;
  xbar.diagonal().array() -= dipole_(0, 0);
  return xbar;
}

double SpectralData::x_max(const UnitSystem& units) const {
  return units.hbar / std::sqrt(2.0 * units.mass * e10());
}

SpectralData SpectralData::truncated(int n) const {
  if (n < 2 || n > num_states()) {
    throw Error(ErrorKind::DimensionMismatch,
                "cannot truncate " + std::to_string(num_states()) +
                    " states to " + std::to_string(n));
  }
  return SpectralData(energies_.head(n), dipole_.topLeftCorner(n, n));
}

SpectralData SpectralData::rescaled(double length_scale,
                                    double energy_offset) const {
  if (!(length_scale > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "length scale must be positive");
  }
  Eigen::VectorXd e =
      (energies_.array() / (length_scale * length_scale)) + energy_offset;
  return SpectralData(std::move(e), dipole_ * length_scale);
}

ScaleFreeSpectra scale_free(const SpectralData& s, const UnitSystem& units) {
  ScaleFreeSpectra out;
  out.x_max = s.x_max(units);
  out.e = s.energies() / s.e10();
  out.xi = s.dipole() / out.x_max;
  return out;
}

Eigen::MatrixXd trk_residual(const SpectralData& s, const UnitSystem& units) {
  const int n = s.num_states();
  const auto& x = s.dipole();
  const auto& e = s.energies();
  Eigen::MatrixXd out(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double mid = 0.5 * (e(p) + e(q));
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += (e(k) - mid) * x(p, k) * x(k, q);
      out(p, q) = sum;
    }
    out(p, p) -= units.sum_rule_strength();
  }
  return out;
}

double complete_dipole_row(const SpectralData& s, int target_state,
                           const UnitSystem& units) {
  const int n = s.num_states();
  if (target_state < 1 || target_state >= n) {
    throw Error(ErrorKind::InvalidInput,
                "completion target must be an excited state index");
  }
  const double strength = units.sum_rule_strength();
  double residual = strength;
  for (int i = 1; i < n; ++i) {
    if (i == target_state) continue;
    residual -= s.transition_energy(i, 0) * s.x(0, i) * s.x(0, i);
  }
  // Saturated rows land a few ulps either side of zero.
  if (residual < 0.0 && residual > -1e-14 * strength) residual = 0.0;
  if (residual < 0.0) {
    throw Error(ErrorKind::NegativeResidual,
                "ground-state sum rule over-saturated by " +
                    std::to_string(-residual));
  }
  return std::sqrt(residual / s.transition_energy(target_state, 0));
}

SpectralData with_completed_row(const SpectralData& s, int target_state,
                                const UnitSystem& units) {
  const double value = complete_dipole_row(s, target_state, units);
  Eigen::MatrixXd x = s.dipole();
  x(0, target_state) = value;
  x(target_state, 0) = value;
  return SpectralData(s.energies(), std::move(x));
}

double fom(const SpectralData& calc, const SpectralData& init,
           const UnitSystem& units) {
  if (calc.num_states() != init.num_states()) {
    throw Error(ErrorKind::DimensionMismatch,
                "fom compares " + std::to_string(calc.num_states()) +
                    " states against " + std::to_string(init.num_states()));
  }
  const double xm_calc = calc.x_max(units);
  const double xm_init = init.x_max(units);
  const Eigen::ArrayXXd a =
      calc.centered_dipole().array().square() / (xm_calc * xm_calc);
  const Eigen::ArrayXXd b =
      init.centered_dipole().array().square() / (xm_init * xm_init);
  return (a - b).square().sum();
}

double normalized_fom(double fom_value, int num_states) {
  if (num_states < 2) {
    throw Error(ErrorKind::InvalidInput, "normalized_fom needs N >= 2");
  }
  return fom_value / (static_cast<double>(num_states) * num_states);
}

}  // namespace polyinv
