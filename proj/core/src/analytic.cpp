#include "polyinv/analytic.hpp"

#include <cmath>
#include <numbers>

#include "polyinv/error.hpp"

namespace polyinv {

namespace {

void check(double omega, int n) {
  if (!(omega > 0.0) || n < 2) {
    throw Error(ErrorKind::InvalidInput,
                "analytic spectra need omega > 0 and at least 2 states");
  }
}

// Hermite functions at the origin (omega = 1): phi_{2k}(0) and phi'_{2k+1}(0).
double even_at_origin(int n) {
  double v = std::pow(std::numbers::pi, -0.25);
  for (int j = 1; j <= n / 2; ++j) v *= -std::sqrt((2.0 * j - 1.0) / (2.0 * j));
  return v;
}

double odd_slope_at_origin(int n) {
  return std::sqrt(2.0 * n) * even_at_origin(n - 1);
}

// Half-line overlap of phi_c (c even) and phi_d (d odd): by the Wronskian
// identity it reduces to boundary values at 0.
double half_overlap(int c, int d) {
  return even_at_origin(c) * odd_slope_at_origin(d) / (2.0 * (d - c));
}

// Half-line integral of phi_a x phi_b for odd a, b, using
// x phi_a = sqrt((a+1)/2) phi_{a+1} + sqrt(a/2) phi_{a-1}.
double half_moment(int a, int b) {
  return std::sqrt((a + 1) / 2.0) * half_overlap(a + 1, b) +
         std::sqrt(a / 2.0) * half_overlap(a - 1, b);
}

}  // namespace

SpectralData qho_spectra(double omega, int num_states) {
  check(omega, num_states);
  Eigen::VectorXd e(num_states);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(num_states, num_states);
  for (int n = 0; n < num_states; ++n) {
    e(n) = omega * (n + 0.5);
    if (n + 1 < num_states) {
      x(n, n + 1) = x(n + 1, n) = std::sqrt((n + 1) / (2.0 * omega));
    }
  }
  return SpectralData(std::move(e), std::move(x));
}

SpectralData cqho_spectra(double omega, int num_states) {
  check(omega, num_states);
  const double length = 1.0 / std::sqrt(omega);
  Eigen::VectorXd e(num_states);
  Eigen::MatrixXd x(num_states, num_states);
  for (int i = 0; i < num_states; ++i) {
    e(i) = omega * (2.0 * i + 1.5);
    for (int j = 0; j <= i; ++j) {
      // Clipped states are sqrt(2) phi_{2i+1} on x > 0.
      const double v = 0.5 * (half_moment(2 * i + 1, 2 * j + 1) +
                              half_moment(2 * j + 1, 2 * i + 1));
      x(i, j) = x(j, i) = 2.0 * v * length;
    }
  }
  return SpectralData(std::move(e), std::move(x));
}

}  // namespace polyinv
