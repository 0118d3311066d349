#include "gratinguq/symmetric_eigen.hpp"

#include <gtest/gtest.h>
#include <random>

namespace gratinguq {
namespace {

TEST(Jacobi, Identity)
{
    auto const v = symmetric_eigenvalues(Eigen::MatrixXd::Identity(3, 3));
    EXPECT_EQ(v, (std::vector<double>{1, 1, 1}));
}

TEST(Jacobi, DiagonalSorted)
{
    Eigen::MatrixXd C = Eigen::Vector3d(3, 1, 2).asDiagonal();
    EXPECT_EQ(symmetric_eigenvalues(C), (std::vector<double>{3, 2, 1}));
}

TEST(Jacobi, TwoByTwoClosedForm)
{
    Eigen::MatrixXd C(2, 2);
    C << 2, 1, 1, 2;
    auto const v = symmetric_eigenvalues(C);
    EXPECT_NEAR(v[0], 3.0, 1e-14);
    EXPECT_NEAR(v[1], 1.0, 1e-14);
}

TEST(Jacobi, ReconstructsRandomMatrices)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int n : {1, 4, 8, 13, 40})
    {
        Eigen::MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                A(i, j) = N(rng);
        Eigen::MatrixXd const C = A + A.transpose();
        SymmetricEigen const e = jacobi_eigen(C);
        Eigen::MatrixXd const R = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
        EXPECT_LT((C - R).norm() / C.norm(), 1e-10) << "n=" << n;
        Eigen::MatrixXd const I = e.vectors.transpose() * e.vectors;
        EXPECT_LT((I - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-10);
        for (int i = 1; i < n; ++i)
            EXPECT_GE(e.values(i - 1), e.values(i));
        // Cross-check against Eigen's own solver
        Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(C).eigenvalues();
        std::sort(ref.data(), ref.data() + n, std::greater<>());
        EXPECT_LT((ref - e.values).norm(), 1e-10 * C.norm());
    }
}

TEST(Jacobi, ZeroMatrix)
{
    auto const e = jacobi_eigen(Eigen::MatrixXd::Zero(5, 5));
    EXPECT_EQ(e.values.norm(), 0.0);
    EXPECT_EQ(e.sweeps, 0);
}

TEST(Jacobi, RejectsNonSymmetric)
{
    Eigen::MatrixXd C(2, 2);
    C << 1, 2, 0, 1;
    EXPECT_THROW(jacobi_eigen(C), std::invalid_argument);
    EXPECT_THROW(jacobi_eigen(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

}  // namespace
}  // namespace gratinguq
