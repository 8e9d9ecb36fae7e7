#pragma once

#include <Eigen/Dense>

#include "polyinv/potential.hpp"
#include "polyinv/spectra.hpp"

namespace polyinv {

/// Uniform grid including both endpoints.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  int num_points = 0;

  double spacing() const { return (x_max - x_min) / (num_points - 1); }
  double x(int j) const { return x_min + j * spacing(); }
};

struct EigenSolution {
  GridSpec grid;
  Eigen::VectorXd energies;       // K values, ascending
  Eigen::MatrixXd wavefunctions;  // K x num_points, trapezoid-normalized
};

/// Lowest `num_states` eigenpairs of -psi''/2 + V psi on `grid` (hbar = m = 1)
/// with Dirichlet ends. Points where V is infinite are pinned to psi = 0.
///
/// Throws InsufficientGrid if num_states > num_points/8 or fewer finite
/// interior points than states, UnresolvedStates if the top energy exceeds a
/// finite endpoint potential.
EigenSolution solve(const PotentialSpec& potential, const GridSpec& grid,
                    int num_states);

/// Energies and trapezoid dipole matrix of the lowest `num_states` states.
SpectralData extract_spectra(const EigenSolution& sol, int num_states);

/// max over (n, l) of | p_nl(grid) - (-i m / hbar) E_nl x_nl | using a
/// five-point derivative stencil. Both sides are purely imaginary; the real
/// parts are compared.
double momentum_consistency(const EigenSolution& sol, const SpectralData& s,
                            const UnitSystem& units = kAtomicUnits);

enum class GridPolicy {
  /// Endpoint potentials at least V_min + kappa (E_top - V_min).
  BoundaryRatio,
  /// Expand until the top energy is stable; no kappa requirement.
  Converged,
};

struct AutoGridOptions {
  GridPolicy policy = GridPolicy::BoundaryRatio;
  double kappa = 10.0;
  double max_width = 1e6;
  double relative_tolerance = 1e-6;
  double points_per_wavelength = 400.0;
  int min_points = 2001;
  int max_points = 400001;
};

/// Chooses a domain and resolution that confine `num_states` states.
/// Throws NoConfinement if the domain would exceed opts.max_width.
GridSpec auto_grid(const PotentialSpec& potential, int num_states,
                   const AutoGridOptions& opts = {});

/// Number of points giving `points_per_wavelength` samples per shortest de
/// Broglie wavelength for kinetic energy `kinetic`, clamped to the option
/// limits.
int resolution_for(double width, double kinetic, const AutoGridOptions& opts);

}  // namespace polyinv
