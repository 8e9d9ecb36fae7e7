#pragma once

#include <span>

#include <Eigen/Dense>

namespace polyinv {

/// Lowest eigenpairs of a real symmetric tridiagonal matrix.
struct TridiagonalEigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // one unit-norm column per eigenvalue
};

/// Number of eigenvalues strictly below `shift` (Sturm sequence count).
int sturm_count(std::span<const double> diag, std::span<const double> offdiag,
                double shift);

/// Computes the `count` smallest eigenvalues by bisection on the Sturm count
/// and their eigenvectors by inverse iteration. Vectors of close eigenvalues
/// are re-orthogonalized against each other.
///
/// `offdiag` has diag.size() - 1 entries. Work is O(n * count).
TridiagonalEigenpairs lowest_eigenpairs(std::span<const double> diag,
                                        std::span<const double> offdiag,
                                        int count);

}  // namespace polyinv
