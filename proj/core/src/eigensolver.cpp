#include "polyinv/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "polyinv/error.hpp"
#include "polyinv/tridiagonal.hpp"

namespace polyinv {

namespace {

void check_grid(const GridSpec& g) {
  if (!(g.x_min < g.x_max) || !std::isfinite(g.x_min) ||
      !std::isfinite(g.x_max)) {
    throw Error(ErrorKind::InvalidInput, "grid needs finite x_min < x_max");
  }
  if (g.num_points < 64) {
    throw Error(ErrorKind::InsufficientGrid, "grid needs at least 64 points");
  }
}

// First sample above 1e-6 of the peak is made positive.
void fix_sign(Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> psi) {
  const double peak = psi.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < psi.size(); ++j) {
    if (std::abs(psi(j)) > 1e-6 * peak) {
      if (psi(j) < 0.0) psi = -psi;
      return;
    }
  }
}

}  // namespace

EigenSolution solve(const PotentialSpec& potential, const GridSpec& grid,
                    int num_states) {
  check_grid(grid);
  if (num_states < 1) {
    throw Error(ErrorKind::InvalidInput, "need at least one state");
  }
  if (num_states > grid.num_points / 8) {
    throw Error(ErrorKind::InsufficientGrid,
                std::to_string(num_states) + " states need at least " +
                    std::to_string(8 * num_states) + " grid points");
  }
  const int n = grid.num_points;
  const double h = grid.spacing();
  const double kinetic_diag = 1.0 / (h * h);
  const double kinetic_off = -0.5 / (h * h);

  // Interior points with finite potential; couplings across a wall vanish.
  std::vector<int> index;
  std::vector<double> diag, off;
  index.reserve(n);
  diag.reserve(n);
  for (int j = 1; j + 1 < n; ++j) {
    const double v = evaluate_potential(potential, grid.x(j));
    if (std::isnan(v)) {
      throw Error(ErrorKind::InvalidInput,
                  "potential is NaN at x = " + std::to_string(grid.x(j)));
    }
    if (std::isinf(v)) continue;
    if (!index.empty()) {
      off.push_back(index.back() == j - 1 ? kinetic_off : 0.0);
    }
    index.push_back(j);
    diag.push_back(kinetic_diag + v);
  }
  if (static_cast<int>(index.size()) < num_states) {
    throw Error(ErrorKind::InsufficientGrid,
                "only " + std::to_string(index.size()) +
                    " finite interior points for " +
                    std::to_string(num_states) + " states");
  }

  TridiagonalEigenpairs pairs = lowest_eigenpairs(diag, off, num_states);

  double wall = std::numeric_limits<double>::infinity();
  for (double v : {evaluate_potential(potential, grid.x_min),
                   evaluate_potential(potential, grid.x_max)}) {
    if (std::isfinite(v)) wall = std::min(wall, v);
  }
  const double top = pairs.values(num_states - 1);
  if (top > wall) {
    throw Error(ErrorKind::UnresolvedStates,
                "state " + std::to_string(num_states - 1) + " at E = " +
                    std::to_string(top) +
                    " exceeds the boundary potential " + std::to_string(wall));
  }

  EigenSolution out;
  out.grid = grid;
  out.energies = pairs.values;
  out.wavefunctions = Eigen::MatrixXd::Zero(num_states, n);
  for (int k = 0; k < num_states; ++k) {
    for (std::size_t i = 0; i < index.size(); ++i) {
      out.wavefunctions(k, index[i]) = pairs.vectors(static_cast<Eigen::Index>(i), k);
    }
    // Ends are zero, so the trapezoid rule is h times the plain sum.
    const double norm = std::sqrt(h * out.wavefunctions.row(k).squaredNorm());
    out.wavefunctions.row(k) /= norm;
    fix_sign(out.wavefunctions.row(k));
  }
  return out;
}

SpectralData extract_spectra(const EigenSolution& sol, int num_states) {
  if (num_states < 2 || num_states > sol.energies.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "cannot extract " + std::to_string(num_states) +
                    " states from a solution with " +
                    std::to_string(sol.energies.size()));
  }
  const GridSpec& g = sol.grid;
  const double h = g.spacing();
  Eigen::VectorXd weights(g.num_points);
  for (int j = 0; j < g.num_points; ++j) weights(j) = h * g.x(j);
  weights(0) *= 0.5;
  weights(g.num_points - 1) *= 0.5;

  const auto psi = sol.wavefunctions.topRows(num_states);
  const Eigen::MatrixXd raw = psi * weights.asDiagonal() * psi.transpose();
  Eigen::MatrixXd x = 0.5 * (raw + raw.transpose());
  return SpectralData(sol.energies.head(num_states), std::move(x));
}

double momentum_consistency(const EigenSolution& sol, const SpectralData& s,
                            const UnitSystem& units) {
  const int n_states = s.num_states();
  const GridSpec& g = sol.grid;
  const int n = g.num_points;
  const double h = g.spacing();

  // Odd reflection about the Dirichlet ends.
  auto sample = [&](int k, int j) {
    if (j < 0) return -sol.wavefunctions(k, -j);
    if (j >= n) return -sol.wavefunctions(k, 2 * (n - 1) - j);
    return sol.wavefunctions(k, j);
  };

  Eigen::MatrixXd deriv(n_states, n);
  for (int k = 0; k < n_states; ++k) {
    for (int j = 0; j < n; ++j) {
      deriv(k, j) = (-sample(k, j + 2) + 8.0 * sample(k, j + 1) -
                     8.0 * sample(k, j - 1) + sample(k, j - 2)) /
                    (12.0 * h);
    }
  }
  const auto psi = sol.wavefunctions.topRows(n_states);
  // Trapezoid weights; both ends carry psi = 0.
  const Eigen::MatrixXd overlap = h * psi * deriv.transpose();

  double worst = 0.0;
  for (int a = 0; a < n_states; ++a) {
    for (int b = 0; b < n_states; ++b) {
      // -i hbar <a|d/dx|b> = -i (m/hbar) (E_a - E_b) x_ab
      const double grid_value = units.hbar * overlap(a, b);
      const double relation =
          units.mass / units.hbar * (s.energy(b) - s.energy(a)) * s.x(a, b);
      worst = std::max(worst, std::abs(grid_value - relation));
    }
  }
  return worst;
}

int resolution_for(double width, double kinetic, const AutoGridOptions& opts) {
  if (!(kinetic > 0.0) || !std::isfinite(kinetic)) kinetic = 1.0;
  const double wavelength = 2.0 * std::numbers::pi / std::sqrt(2.0 * kinetic);
  const double points = width / wavelength * opts.points_per_wavelength + 1.0;
  if (!(points < static_cast<double>(opts.max_points))) return opts.max_points;
  return std::max(opts.min_points, static_cast<int>(std::ceil(points)));
}

namespace {

struct Domain {
  double left = 0.0;
  double right = 1.0;
  bool left_fixed = false;
  bool right_fixed = false;
  double anchor = 0.0;  // expansion origin when both ends are free
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Domain initial_domain(const PotentialSpec& p) {
  return std::visit(
      Overloaded{
          [](const Harmonic& h) {
            const double l = 1.0 / std::sqrt(h.omega);
            return Domain{-l, l, false, false, 0.0};
          },
          [](const ClippedHarmonic& h) {
            return Domain{0.0, 1.0 / std::sqrt(h.omega), true, false, 0.0};
          },
          [](const HalfPower&) { return Domain{0.0, 1.0, true, false, 0.0}; },
          [](const PolynomialPotential& poly) {
            if (poly.boundaries) {
              return Domain{poly.boundaries->first, poly.boundaries->second,
                            true, true, poly.center};
            }
            return Domain{poly.center - 1.0, poly.center + 1.0, false, false,
                          poly.center};
          },
          [](const TabulatedGrid& t) {
            return Domain{t.x.front(), t.x.back(), true, true, t.x.front()};
          },
      },
      p);
}

void expand(Domain& d) {
  if (d.left_fixed) {
    d.right = d.left + 2.0 * (d.right - d.left);
  } else if (d.right_fixed) {
    d.left = d.right - 2.0 * (d.right - d.left);
  } else {
    d.left = d.anchor - 2.0 * (d.anchor - d.left);
    d.right = d.anchor + 2.0 * (d.right - d.anchor);
  }
}

double sampled_minimum(const PotentialSpec& p, double a, double b) {
  double vmin = std::numeric_limits<double>::infinity();
  constexpr int kSamples = 10001;
  for (int j = 0; j < kSamples; ++j) {
    const double v = evaluate_potential(p, a + (b - a) * j / (kSamples - 1));
    if (std::isfinite(v)) vmin = std::min(vmin, v);
  }
  return vmin;
}

[[noreturn]] void no_confinement(const PotentialSpec& p, int k, double width) {
  throw Error(ErrorKind::NoConfinement,
              describe(p) + ": " + std::to_string(k) +
                  " states not confined within width " + std::to_string(width));
}

}  // namespace

GridSpec auto_grid(const PotentialSpec& potential, int num_states,
                   const AutoGridOptions& opts) {
  validate(potential);
  Domain d = initial_domain(potential);
  const bool fixed = d.left_fixed && d.right_fixed;

  // A free end that falls below the well interior at the width cap can never
  // confine anything.
  if (!fixed) {
    const double v_anchor = evaluate_potential(potential, d.anchor);
    double far_left = d.left_fixed ? d.left : d.anchor - 0.5 * opts.max_width;
    double far_right = d.left_fixed ? d.left + opts.max_width
                                    : d.anchor + 0.5 * opts.max_width;
    if (d.right_fixed) far_left = d.right - opts.max_width;
    for (double xe : {far_left, far_right}) {
      const double v = evaluate_potential(potential, xe);
      if (std::isfinite(v) && std::isfinite(v_anchor) && v <= v_anchor) {
        no_confinement(potential, num_states, opts.max_width);
      }
    }
  }

  double v_min = sampled_minimum(potential, d.left, d.right);
  double prev_top = std::numeric_limits<double>::quiet_NaN();
  // Spacing; zero until a probe solve has estimated the top energy. It only
  // ever shrinks, so successive tops differ through the domain alone.
  double h = 0.0;
  GridSpec grid;
  for (;;) {
    const double width = d.right - d.left;
    if (width > opts.max_width * (1.0 + 1e-12)) {
      no_confinement(potential, num_states, width);
    }
    v_min = std::min(v_min, sampled_minimum(potential, d.left, d.right));
    int points = opts.min_points;
    if (h > 0.0) {
      const double pts = std::ceil(width / h) + 1.0;
      points = pts < opts.max_points ? static_cast<int>(pts) : opts.max_points;
    }
    grid = GridSpec{d.left, d.right, std::max(points, 8 * num_states + 1)};

    double top;
    try {
      top = solve(potential, grid, num_states).energies(num_states - 1);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnresolvedStates || fixed) throw;
      expand(d);
      continue;
    }
    const int wanted = resolution_for(width, top - v_min, opts);
    const double h_wanted = width / (wanted - 1);
    if (h == 0.0 || h_wanted < h * (1.0 - 1e-9)) {
      h = h == 0.0 ? h_wanted : std::min(h, h_wanted);
      prev_top = std::numeric_limits<double>::quiet_NaN();
      continue;  // same domain, finer spacing
    }
    if (fixed) break;
    const double scale = std::max(std::abs(top), top - v_min);
    const bool stable = std::isfinite(prev_top) &&
                        std::abs(top - prev_top) <= opts.relative_tolerance * scale;
    prev_top = top;
    if (stable) break;
    expand(d);
  }

  if (opts.policy == GridPolicy::Converged || fixed) return grid;

  // Expand until both free ends clear the kappa threshold.
  const double threshold = v_min + opts.kappa * (prev_top - v_min);
  auto end_ok = [&](double xe) {
    const double v = evaluate_potential(potential, xe);
    return std::isinf(v) || v >= threshold;
  };
  while (!(end_ok(d.left) && end_ok(d.right))) {
    expand(d);
    if (d.right - d.left > opts.max_width * (1.0 + 1e-12)) {
      no_confinement(potential, num_states, d.right - d.left);
    }
  }
  const double pts = std::ceil((d.right - d.left) / h) + 1.0;
  const int points = pts < opts.max_points ? static_cast<int>(pts) : opts.max_points;
  return GridSpec{d.left, d.right, std::max(points, 8 * num_states + 1)};
}

}  // namespace polyinv
