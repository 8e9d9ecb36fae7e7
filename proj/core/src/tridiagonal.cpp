#include "polyinv/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "polyinv/error.hpp"

namespace polyinv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

int sturm_count_squared(std::span<const double> diag,
                        std::span<const double> offdiag_sq, double shift,
                        double pivmin) {
  int count = 0;
  double q = diag[0] - shift;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    if (std::abs(q) < pivmin) q = -pivmin;
    q = diag[i] - shift - offdiag_sq[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

// LU factorization with partial pivoting of a general tridiagonal matrix,
// laid out like LAPACK dgttrf: sub (dl), diag (d), super (du), second
// super (du2) and the row interchange flags.
struct TridiagonalLu {
  std::vector<double> dl, d, du, du2;
  std::vector<std::uint8_t> swapped;

  void factor(std::span<const double> diag, std::span<const double> offdiag,
              double shift, double tiny) {
    const std::size_t n = diag.size();
    d.resize(n);
    dl.assign(offdiag.begin(), offdiag.end());
    du.assign(offdiag.begin(), offdiag.end());
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped.assign(n > 0 ? n - 1 : 0, 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;

    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == 0.0) d[i] = tiny;
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        swapped[i] = 1;
      }
    }
    for (double& v : d) {
      if (std::abs(v) < tiny) v = std::copysign(tiny, v == 0.0 ? 1.0 : v);
    }
  }

  void solve(std::span<double> b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i] - dl[i] * b[i + 1];
        b[i] = b[i + 1];
        b[i + 1] = temp;
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t k = n; k-- > 2;) {
      const std::size_t i = k - 2;
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
  }
};

}  // namespace

int sturm_count(std::span<const double> diag, std::span<const double> offdiag,
                double shift) {
  std::vector<double> sq(offdiag.size());
  double emax = 1.0;
  for (std::size_t i = 0; i < offdiag.size(); ++i) {
    sq[i] = offdiag[i] * offdiag[i];
    emax = std::max(emax, sq[i]);
  }
  return sturm_count_squared(diag, sq,
                             shift, std::numeric_limits<double>::min() * emax);
}

TridiagonalEigenpairs lowest_eigenpairs(std::span<const double> diag,
                                        std::span<const double> offdiag,
                                        int count) {
  const auto n = static_cast<int>(diag.size());
  if (n == 0 || count < 1 || count > n ||
      offdiag.size() + 1 != diag.size()) {
    throw Error(ErrorKind::InvalidInput,
                "tridiagonal eigenproblem: bad dimensions");
  }

  std::vector<double> sq(offdiag.size());
  double emax = 1.0;
  for (std::size_t i = 0; i < offdiag.size(); ++i) {
    sq[i] = offdiag[i] * offdiag[i];
    emax = std::max(emax, sq[i]);
  }
  const double pivmin = std::numeric_limits<double>::min() * emax;

  // Gershgorin enclosure.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(offdiag[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double norm = std::max(std::abs(lo), std::abs(hi));
  const double pad = 2.0 * kEps * norm + 2.0 * pivmin;
  lo -= pad;
  hi += pad;

  std::vector<double> lower(count, lo), upper(count, hi);
  Eigen::VectorXd values(count);
  for (int k = 0; k < count; ++k) {
    for (int iter = 0; iter < 200; ++iter) {
      const double a = lower[k];
      const double b = upper[k];
      const double tol = 2.0 * kEps * std::max(std::abs(a), std::abs(b)) +
                         4.0 * pivmin;
      if (b - a <= tol) break;
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const int c = sturm_count_squared(diag, sq, mid, pivmin);
      for (int j = k; j < count; ++j) {
        if (j < c) {
          upper[j] = std::min(upper[j], mid);
        } else {
          lower[j] = std::max(lower[j], mid);
        }
      }
    }
    values(k) = 0.5 * (lower[k] + upper[k]);
  }

  Eigen::MatrixXd vectors(n, count);
  TridiagonalLu lu;
  std::vector<double> work(n);
  const double tiny = kEps * std::max(norm, 1.0);
  const double cluster_gap = 1e-7 * std::max(norm, 1.0);

  for (int k = 0; k < count; ++k) {
    lu.factor(diag, offdiag, values(k), tiny);

    // Deterministic, non-degenerate start vector.
    std::uint64_t state = 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(k);
    for (int i = 0; i < n; ++i) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      work[i] = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
    }

    int first_close = k;
    while (first_close > 0 &&
           values(k) - values(first_close - 1) < cluster_gap) {
      --first_close;
    }

    for (int iter = 0; iter < 4; ++iter) {
      lu.solve(work);
      Eigen::Map<Eigen::VectorXd> v(work.data(), n);
      for (int j = first_close; j < k; ++j) {
        v -= vectors.col(j).dot(v) * vectors.col(j);
      }
      const double len = v.norm();
      if (!(len > 0.0) || !std::isfinite(len)) {
        throw Error(ErrorKind::InvalidInput,
                    "inverse iteration failed for eigenvalue " +
                        std::to_string(k));
      }
      v /= len;
    }
    vectors.col(k) = Eigen::Map<Eigen::VectorXd>(work.data(), n);
  }

  return {std::move(values), std::move(vectors)};
}

}  // namespace polyinv
