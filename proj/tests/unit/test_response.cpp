#include <cmath>

#include "doctest.h"
#include "polyinv/analytic.hpp"
#include "polyinv/eigensolver.hpp"
#include "polyinv/response.hpp"

using namespace polyinv;

TEST_CASE("three-state sum over states by hand") {
  const double a = 0.6, b = 0.2, c = -0.9;
  Eigen::Matrix3d x;
  x << 0.1, a, b,
       a, 0.4, c,
       b, c, -0.2;
  const SpectralData s(Eigen::Vector3d(-1.0, 0.0, 2.0), x);
  // E_10 = 1, E_20 = 3; xbar_11 = 0.3, xbar_22 = -0.3.
  const double want = 3.0 * (a * 0.3 * a / 1.0 + b * -0.3 * b / 9.0 +
                             2.0 * a * c * b / 3.0);
  CHECK(beta_sos(s) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("harmonic oscillator has no second-order response") {
  CHECK(std::abs(beta_sos(qho_spectra(2.0, 8))) < 1e-14);
  const auto grid = extract_spectra(solve(Harmonic{1.0}, {-12.0, 12.0, 4001}, 8), 8);
  CHECK(std::abs(beta_intrinsic(grid).beta_int) < 1e-8);
  const PolynomialPotential quartic{{0.0, 0.0, 1.0, 0.0, 0.3}, 0.0, {}};
  const auto q = extract_spectra(solve(quartic, {-8.0, 8.0, 4001}, 8), 8);
  CHECK(std::abs(beta_intrinsic(q).beta_int) < 1e-6);
}

TEST_CASE("fundamental limit values") {
  CHECK(beta_limit(1.0) == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-15));
  CHECK(beta_limit(2.0) == doctest::Approx(std::pow(3.0, 0.25) / std::pow(2.0, 3.5)));
  CHECK(beta_limit(1.0, 4) == doctest::Approx(8.0 * std::pow(3.0, 0.25)));
}

TEST_CASE("report is consistent") {
  const auto s = cqho_spectra(1.3, 10);
  const auto r = beta_intrinsic(s);
  CHECK(r.beta_max > 0.0);
  CHECK(r.beta_int == doctest::Approx(r.beta / r.beta_max).epsilon(1e-15));
  CHECK(r.num_states_used == 10);
}

TEST_CASE("intrinsic value is independent of width") {
  const auto s = cqho_spectra(1.0, 12);
  for (double lam : {0.05, 0.7, 13.0}) {
    CHECK(beta_intrinsic(s.rescaled(lam, 4.0)).beta_int ==
          doctest::Approx(beta_intrinsic(s).beta_int).epsilon(1e-12));
  }
  // Linear half potential A x: grid scaled by A^{-1/3} gives the same problem.
  const double amp = 7.0, sc = std::cbrt(1.0 / amp);
  const auto ref = extract_spectra(solve(HalfPower{1.0}, {0.0, 40.0, 4001}, 10), 10);
  const PolynomialPotential ramp{{0.0, amp}, 0.0, std::pair{0.0, 1e9}};
  const auto scaled = extract_spectra(solve(ramp, {0.0, 40.0 * sc, 4001}, 10), 10);
  CHECK(beta_intrinsic(scaled).beta_int ==
        doctest::Approx(beta_intrinsic(ref).beta_int).epsilon(1e-9));
}

TEST_CASE("clipped oscillator intrinsic value") {
  const double exact = beta_intrinsic(cqho_spectra(1.0, 15)).beta_int;
  CHECK(exact == doctest::Approx(0.57).epsilon(0.01 / 0.57));

  const auto coarse = extract_spectra(solve(ClippedHarmonic{1.0}, {0.0, 16.0, 4001}, 15), 15);
  const auto fine = extract_spectra(solve(ClippedHarmonic{1.0}, {0.0, 16.0, 40001}, 15), 15);
  const double bc = beta_intrinsic(coarse).beta_int;
  const double bf = beta_intrinsic(fine).beta_int;
  CHECK(std::abs(bc - bf) / std::abs(bf) < 5e-4);  // three significant figures
  CHECK(std::abs(bf - exact) < 1e-4);
}

TEST_CASE("clipped oscillator sum converges with the number of states") {
  double prev_step = INFINITY;
  double prev = beta_intrinsic(cqho_spectra(1.0, 8)).beta_int;
  for (int n = 9; n <= 30; ++n) {
    const double cur = beta_intrinsic(cqho_spectra(1.0, n)).beta_int;
    const double step = std::abs(cur - prev);
    CHECK(step < prev_step);
    prev_step = step;
    prev = cur;
  }
  CHECK(prev_step < 1e-3);
}
