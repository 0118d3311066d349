#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gratinguq {

struct SymmetricEigen
{
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // column i pairs with values(i)
    int sweeps = 0;
};

/*!
 * Cyclic Jacobi eigen-decomposition of a small dense symmetric matrix.
 *
 * Sweeps plane rotations over every off-diagonal pair until the off-diagonal
 * Frobenius norm falls below rel_tol * ||C||_F. Throws std::invalid_argument
 * for non-square or non-symmetric input.
 */
SymmetricEigen jacobi_eigen(Eigen::MatrixXd const& C, double rel_tol = 1e-12,
                            int max_sweeps = 100);

//! Eigenvalues only, sorted descending
std::vector<double> symmetric_eigenvalues(Eigen::MatrixXd const& C);

}  // namespace gratinguq
