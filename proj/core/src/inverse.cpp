#include "polyinv/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "polyinv/error.hpp"

namespace polyinv {

int triangular_count(int num_states) {
  return num_states * (num_states + 1) / 2;
}

std::vector<std::pair<int, int>> pair_order(int num_states) {
  std::vector<std::pair<int, int>> rows;
  rows.reserve(triangular_count(num_states));
  for (int n = 0; n < num_states; ++n) {
    for (int l = 0; l <= n; ++l) rows.emplace_back(l, n);
  }
  return rows;
}

Eigen::MatrixXd build_b_matrix(const SpectralData& s) {
  const int n = s.num_states();
  const int m = triangular_count(n);
  const auto rows = pair_order(n);
  const Eigen::MatrixXd xbar = s.centered_dipole();
  Eigen::MatrixXd b(m, m);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  for (int q = 0; q < m; ++q) {
    for (int r = 0; r < m; ++r) b(r, q) = power(rows[r].first, rows[r].second);
    power = power * xbar;
  }
  return b;
}

Eigen::VectorXd build_c_vector(const SpectralData& s, const UnitSystem& units) {
  const int n = s.num_states();
  const auto rows = pair_order(n);
  const double pref = units.mass / (2.0 * units.hbar * units.hbar);
  Eigen::VectorXd c(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto [l, k] = rows[r];
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += s.transition_energy(l, i) * s.transition_energy(i, k) * s.x(l, i) *
             s.x(i, k);
    }
    c(static_cast<Eigen::Index>(r)) = pref * sum + (l == k ? s.energy(k) : 0.0);
  }
  return c;
}

double default_cutoff(int m) {
  return m * std::numeric_limits<double>::epsilon();
}

InverseSolution svd_least_norm(const Eigen::MatrixXd& b,
                               const Eigen::VectorXd& c,
                               std::optional<double> cutoff) {
  if (b.rows() != c.size() || b.rows() == 0 || b.cols() == 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "system matrix and right-hand side sizes differ");
  }
  const double rel =
      cutoff.value_or(default_cutoff(static_cast<int>(std::max(b.rows(), b.cols()))));
  if (!(rel > 0.0 && rel < 1.0)) {
    throw Error(ErrorKind::InvalidInput, "SVD cutoff must lie in (0, 1)");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullU |
                                               Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma_max = sigma.size() ? sigma(0) : 0.0;
  if (!(sigma_max > 0.0)) {
    throw Error(ErrorKind::ZeroMatrix, "system matrix is identically zero");
  }

  InverseSolution out;
  out.singular_values = sigma;
  out.cutoff = rel;
  Eigen::VectorXd projected = svd.matrixU().transpose() * c;
  Eigen::VectorXd scaled = Eigen::VectorXd::Zero(b.cols());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > rel * sigma_max) {
      scaled(i) = projected(i) / sigma(i);
      ++out.effective_rank;
    }
  }
  out.coefficients = svd.matrixV() * scaled;
  out.residual_norm = (b * out.coefficients - c).norm();
  return out;
}

Inversion invert_spectra(const SpectralData& s, std::optional<double> cutoff,
                         const UnitSystem& units) {
  Inversion inv;
  inv.solution = svd_least_norm(build_b_matrix(s), build_c_vector(s, units),
                                cutoff);
  inv.potential.coeffs.assign(inv.solution.coefficients.begin(),
                              inv.solution.coefficients.end());
  inv.potential.center = s.x(0, 0);

  const double xm = s.x_max(units);
  const double e10 = s.e10();
  Eigen::VectorXd b(inv.solution.coefficients.size());
  double power = 1.0;
  for (Eigen::Index q = 0; q < b.size(); ++q) {
    b(q) = inv.solution.coefficients(q) * power / e10;
    power *= xm;
  }
  inv.solution.scale_free_coeffs = std::move(b);
  return inv;
}

namespace {

// Bisection on the sign of g between a (g(a) has sign `sa`) and b.
template <class F>
double bisect_sign(F g, double a, double b, bool a_negative) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    if ((g(mid) < 0.0) == a_negative) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

struct Wall {
  double x;
  BoundaryMethod method;
};

// Walks away from the minimum in `dir` until V crosses `threshold` or starts
// descending; refines the stopping point.
Wall walk(const PolynomialPotential& p, double x0, double dir, double step,
          double lo, double hi, double threshold) {
  double x = x0;
  double v = p.value(x);
  for (;;) {
    const double x2 = x + dir * step;
    if (x2 < lo || x2 > hi) return {dir < 0 ? lo : hi, BoundaryMethod::ScanEdge};
    const double v2 = p.value(x2);
    if (v2 >= threshold) {
      const double xb = bisect_sign(
          [&](double t) { return p.value(t) - threshold; }, x, x2, true);
      return {xb, BoundaryMethod::Threshold};
    }
    if (v2 < v) {
      // Peak lies in [x - step, x2]: d/dt of V along dir goes + to -.
      const double a = x - dir * step;
      const double xb = bisect_sign(
          [&](double t) { return dir * p.derivative(t); }, a, x2, false);
      return {xb, BoundaryMethod::BarrierPeak};
    }
    x = x2;
    v = v2;
  }
}

}  // namespace

std::vector<double> local_minima(const PolynomialPotential& p, double lo,
                                 double hi, int cells) {
  std::vector<double> out;
  if (!(lo < hi) || cells < 1) return out;
  const double dx = (hi - lo) / cells;
  double xa = lo;
  double da = p.derivative(xa);
  for (int j = 1; j <= cells; ++j) {
    const double xb = lo + j * dx;
    const double db = p.derivative(xb);
    if (da < 0.0 && db >= 0.0) {
      out.push_back(bisect_sign([&](double t) { return p.derivative(t); }, xa,
                                xb, true));
    }
    xa = xb;
    da = db;
  }
  return out;
}

std::vector<WellDomain> enumerate_well_domains(const PolynomialPotential& p,
                                               const Eigen::VectorXd& energies,
                                               double kappa,
                                               const UnitSystem& units) {
  if (energies.size() < 2 || !(energies(1) > energies(0))) {
    throw Error(ErrorKind::InvalidInput,
                "well search needs at least two ascending energies");
  }
  if (!(kappa > 1.0)) {
    throw Error(ErrorKind::InvalidInput, "kappa must exceed 1");
  }
  constexpr int kCells = 10000;
  const double xm = units.hbar / std::sqrt(2.0 * units.mass *
                                           (energies(1) - energies(0)));
  const double lo = p.center - 50.0 * xm;
  const double hi = p.center + 50.0 * xm;
  const double step = (hi - lo) / kCells / 8.0;
  const double e_top = energies(energies.size() - 1);
  const double e_bottom = energies(0);

  std::vector<WellDomain> out;
  for (double xmin : local_minima(p, lo, hi, kCells)) {
    const double vmin = p.value(xmin);
    double depth = e_top - vmin;
    if (!(depth > 0.0)) depth = e_top - e_bottom;
    const double threshold = vmin + kappa * depth;
    const Wall left = walk(p, xmin, -1.0, step, lo, hi, threshold);
    const Wall right = walk(p, xmin, +1.0, step, lo, hi, threshold);
    WellDomain d;
    d.minimum_x = xmin;
    d.minimum_value = vmin;
    d.x_left = left.x;
    d.x_right = right.x;
    d.left_method = left.method;
    d.right_method = right.method;
    d.boundary_value_ratio =
        (std::min(p.value(left.x), p.value(right.x)) - vmin) / depth;
    if (d.x_left < d.minimum_x && d.minimum_x < d.x_right) out.push_back(d);
  }
  return out;
}

WellDomain find_well_domain(const PolynomialPotential& p,
                            const Eigen::VectorXd& energies, double kappa,
                            const UnitSystem& units) {
  const auto all = enumerate_well_domains(p, energies, kappa, units);
  if (all.empty()) {
    throw Error(ErrorKind::NoMinimum,
                "polynomial has no local minimum within 50 x_max of the center");
  }
  const auto best = std::min_element(
      all.begin(), all.end(), [&](const WellDomain& a, const WellDomain& b) {
        const double da = std::abs(a.minimum_x - p.center);
        const double db = std::abs(b.minimum_x - p.center);
        if (da != db) return da < db;
        return a.minimum_value < b.minimum_value;
      });
  return *best;
}

PolynomialPotential bounded(const PolynomialPotential& p, const WellDomain& d) {
  PolynomialPotential out = p;
  out.boundaries = std::make_pair(d.x_left, d.x_right);
  return out;
}

namespace {

int roundtrip_points(double width, double kinetic, const RoundtripOptions& o) {
  AutoGridOptions g;
  g.points_per_wavelength = o.points_per_wavelength;
  g.min_points = o.min_points;
  g.max_points = o.max_points;
  return resolution_for(width, kinetic, g);
}

}  // namespace

RoundtripResult roundtrip(const SpectralData& init,
                          const RoundtripOptions& opts,
                          const UnitSystem& units) {
  const int n = init.num_states();
  Inversion inv = invert_spectra(init, opts.cutoff, units);
  const auto domains =
      enumerate_well_domains(inv.potential, init.energies(), opts.kappa, units);
  if (domains.empty()) {
    throw Error(ErrorKind::NoMinimum,
                "reconstructed polynomial has no local minimum");
  }
  const double e_top = init.energy(n - 1);

  struct Candidate {
    const WellDomain* domain;
    double fom;
    SpectralData calc;
  };
  std::optional<Candidate> best;
  int solvable = 0;
  for (const WellDomain& d : domains) {
    const PolynomialPotential walled = bounded(inv.potential, d);
    const double kinetic = std::max(e_top - d.minimum_value, init.e10());
    GridSpec grid{d.x_left, d.x_right,
                  roundtrip_points(d.x_right - d.x_left, kinetic, opts)};
    try {
      SpectralData calc = extract_spectra(solve(walled, grid, n), n);
      const double f = fom(calc, init, units);
      ++solvable;
      const auto better = [&](const Candidate& c) {
        if (f != c.fom) return f < c.fom;
        if (d.minimum_value != c.domain->minimum_value) {
          return d.minimum_value < c.domain->minimum_value;
        }
        return std::abs(d.minimum_x - inv.potential.center) <
               std::abs(c.domain->minimum_x - inv.potential.center);
      };
      if (!best || better(*best)) best = Candidate{&d, f, std::move(calc)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnresolvedStates &&
          e.kind() != ErrorKind::InsufficientGrid) {
        throw;
      }
    }
  }
  if (!best) {
    throw Error(ErrorKind::NoConfinement,
                "no candidate basin holds " + std::to_string(n) + " states");
  }

  const WellDomain chosen = *best->domain;
  PolynomialPotential walled = bounded(inv.potential, chosen);
  const int k = std::max(n, opts.beta_states);
  // Box-like growth of the level spacing bounds the top kinetic energy.
  const double scale = static_cast<double>(k) / n;
  const double kinetic =
      std::max(e_top - chosen.minimum_value, init.e10()) * scale * scale;
  GridSpec grid{chosen.x_left, chosen.x_right,
                roundtrip_points(chosen.x_right - chosen.x_left, kinetic, opts)};
  grid.num_points = std::max(grid.num_points, 8 * k + 1);
  const SpectralData wide = extract_spectra(solve(walled, grid, k), k);

  RoundtripResult out{std::move(inv), std::move(walled), chosen,
                      std::move(best->calc), best->fom,
                      beta_intrinsic(wide, units), solvable};
  return out;
}

std::vector<std::pair<double, double>> sample_polynomial(
    const PolynomialPotential& p, double lo, double hi, int count) {
  std::vector<std::pair<double, double>> out;
  if (count < 2) return out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    const double x = lo + (hi - lo) * j / (count - 1);
    out.emplace_back(x, evaluate_potential(p, x));
  }
  return out;
}

}  // namespace polyinv
