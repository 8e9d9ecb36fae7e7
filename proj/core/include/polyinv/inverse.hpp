#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polyinv/eigensolver.hpp"
#include "polyinv/potential.hpp"
#include "polyinv/response.hpp"
#include "polyinv/spectra.hpp"

namespace polyinv {

/// M = N(N+1)/2: independent (l, n) pairs of an N-state model.
int triangular_count(int num_states);

/// Row order of the linear system: (0,0),(0,1),(1,1),(0,2),(1,2),(2,2),...
/// Each entry is (l, n) with l <= n.
std::vector<std::pair<int, int>> pair_order(int num_states);

/// B(q) at row (l,n) is (Xbar^q)_{ln}, Xbar = x - x_00 I. Columns q = 0..M-1.
Eigen::MatrixXd build_b_matrix(const SpectralData& s);

/// C at row (l,n) is (m / 2 hbar^2) sum_i E_li E_in x_li x_in + delta_ln E_n.
Eigen::VectorXd build_c_vector(const SpectralData& s,
                               const UnitSystem& units = kAtomicUnits);

struct InverseSolution {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd singular_values;  // descending
  int effective_rank = 0;
  double residual_norm = 0.0;
  double cutoff = 0.0;              // relative threshold that was applied
  Eigen::VectorXd scale_free_coeffs;  // b_q = a_q x_max^q / E_10
};

/// Default relative singular-value threshold: M * machine epsilon.
double default_cutoff(int m);

/// Pseudo-inverse solution a = V S+ U^T c; singular values at or below
/// cutoff * sigma_max are dropped. Throws ZeroMatrix if sigma_max == 0.
InverseSolution svd_least_norm(const Eigen::MatrixXd& b,
                               const Eigen::VectorXd& c,
                               std::optional<double> cutoff = std::nullopt);

struct Inversion {
  PolynomialPotential potential;  // center x_00, no walls
  InverseSolution solution;
};

Inversion invert_spectra(const SpectralData& s,
                         std::optional<double> cutoff = std::nullopt,
                         const UnitSystem& units = kAtomicUnits);

/// Local minima of the polynomial on [lo, hi], found by sign changes of V'
/// over `cells` uniform cells refined by bisection. Ascending.
std::vector<double> local_minima(const PolynomialPotential& p, double lo,
                                 double hi, int cells = 10000);

enum class BoundaryMethod {
  Threshold,    // V reached V_min + kappa (E_top - V_min)
  BarrierPeak,  // a lower barrier top was crossed first
  ScanEdge,     // neither happened inside the scan interval
};

struct WellDomain {
  double minimum_x = 0.0;
  double minimum_value = 0.0;
  double x_left = 0.0;
  double x_right = 0.0;
  BoundaryMethod left_method = BoundaryMethod::Threshold;
  BoundaryMethod right_method = BoundaryMethod::Threshold;
  /// min over both walls of (V_wall - V_min) / (E_top - V_min).
  double boundary_value_ratio = 0.0;

  bool bounded() const {
    return left_method == BoundaryMethod::Threshold &&
           right_method == BoundaryMethod::Threshold;
  }
};

/// One candidate domain per local minimum in [c - 50 x_max, c + 50 x_max],
/// where x_max comes from E_10. Walls by threshold walk, falling back to the
/// barrier peak, then to the scan edge.
std::vector<WellDomain> enumerate_well_domains(const PolynomialPotential& p,
                                               const Eigen::VectorXd& energies,
                                               double kappa = 10.0,
                                               const UnitSystem& units = kAtomicUnits);

/// Domain around the minimum closest to the polynomial center (deepest on a
/// tie). Throws NoMinimum when the polynomial has no minimum in range.
WellDomain find_well_domain(const PolynomialPotential& p,
                            const Eigen::VectorXd& energies,
                            double kappa = 10.0,
                            const UnitSystem& units = kAtomicUnits);

/// `p` with Dirichlet walls at the domain edges.
PolynomialPotential bounded(const PolynomialPotential& p, const WellDomain& d);

struct RoundtripOptions {
  std::optional<double> cutoff;
  double kappa = 10.0;
  /// States used for the reconstructed potential's beta_int.
  int beta_states = 15;
  double points_per_wavelength = 400.0;
  int min_points = 2001;
  int max_points = 40001;
};

struct RoundtripResult {
  Inversion inversion;
  PolynomialPotential potential;  // with walls
  WellDomain domain;
  SpectralData calc;              // same N as the input
  double fom = 0.0;
  ResponseReport response;        // of the walled potential, beta_states states
  int candidates = 0;             // minima whose basin could be solved
};

/// Invert, try every candidate basin, keep the one whose forward spectra
/// best match the input (smallest FOM; ties by depth, then by distance to
/// x_00), and evaluate its response.
///
/// Throws NoMinimum if the polynomial has no minimum, NoConfinement if no
/// candidate basin holds N states.
RoundtripResult roundtrip(const SpectralData& init,
                          const RoundtripOptions& opts = {},
                          const UnitSystem& units = kAtomicUnits);

/// Uniform samples of the polynomial; used for plotting dumps.
std::vector<std::pair<double, double>> sample_polynomial(
    const PolynomialPotential& p, double lo, double hi, int count);

}  // namespace polyinv
