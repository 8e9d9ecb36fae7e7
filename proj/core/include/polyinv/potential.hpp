#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace polyinv {

/// Value returned where a potential is a hard wall.
inline constexpr double kInfinitePotential =
    std::numeric_limits<double>::infinity();

/// V = m w^2 x^2 / 2 on the whole line.
struct Harmonic {
  double omega = 1.0;
};

/// Harmonic for x > 0, hard wall for x <= 0.
struct ClippedHarmonic {
  double omega = 1.0;
};

/// V = x^eta for x > 0, hard wall for x <= 0.
struct HalfPower {
  double eta = 1.0;
};

/// V = sum_q a_q (x - c)^q, optionally confined to (x_left, x_right) by
/// Dirichlet walls.
struct PolynomialPotential {
  std::vector<double> coeffs;
  double center = 0.0;
  std::optional<std::pair<double, double>> boundaries;

  /// Polynomial value ignoring the walls.
  double value(double x) const;
  /// dV/dx ignoring the walls.
  double derivative(double x) const;
  /// Highest index with a nonzero coefficient, -1 for the zero polynomial.
  int degree() const;
};

/// Potential sampled on an ascending grid; linear interpolation inside,
/// hard walls outside the sampled range. Entries may be +inf.
struct TabulatedGrid {
  std::vector<double> x;
  std::vector<double> v;
};

using PotentialSpec = std::variant<Harmonic, ClippedHarmonic, HalfPower,
                                   PolynomialPotential, TabulatedGrid>;

/// Throws Error(InvalidInput) if the parameters break the type invariants.
void validate(const PotentialSpec& p);

double evaluate_potential(const PotentialSpec& p, double x);

/// Short human label, e.g. "halfpower(eta=2)".
std::string describe(const PotentialSpec& p);

/// Two-column CSV (x, V). A header line is allowed; "inf" marks walls.
TabulatedGrid load_tabulated_csv(const std::filesystem::path& path);

}  // namespace polyinv
