#include "gratinguq/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gratinguq/error.hpp"

namespace gratinguq {
namespace {

double off_diagonal_norm(Eigen::MatrixXd const& A)
{
    double s = 0.0;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (i != j)
                s += A(i, j) * A(i, j);
    return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(Eigen::MatrixXd const& C, double rel_tol, int max_sweeps)
{
    if (C.rows() != C.cols())
        throw std::invalid_argument("jacobi_eigen: matrix is not square");
    Eigen::Index const n = C.rows();
    double const scale = C.norm();
    if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300)
        && n > 0)
        throw std::invalid_argument("jacobi_eigen: matrix is not symmetric");

    Eigen::MatrixXd A = 0.5 * (C + C.transpose());
    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
    double const target = rel_tol * scale;

    SymmetricEigen out;
    while (off_diagonal_norm(A) > target)
    {
        if (out.sweeps == max_sweeps)
            throw NumericalError("jacobi_eigen: no convergence");
        ++out.sweeps;
        for (Eigen::Index p = 0; p < n - 1; ++p)
        {
            for (Eigen::Index q = p + 1; q < n; ++q)
            {
                double const apq = A(p, q);
                if (apq == 0.0)
                    continue;
                // Rotation angle zeroing A(p, q)
                double const theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                double const t = std::copysign(1.0, theta)
                                 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double const c = 1.0 / std::sqrt(t * t + 1.0);
                double const s = t * c;

                for (Eigen::Index k = 0; k < n; ++k)
                {
                    double const akp = A(k, p);
                    double const akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k)
                {
                    double const apk = A(p, k);
                    double const aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k)
                {
                    double const vkp = V(k, p);
                    double const vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return A(a, a) > A(b, b); });
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        out.values(i) = A(order[i], order[i]);
        out.vectors.col(i) = V.col(order[i]);
    }
    return out;
}

std::vector<double> symmetric_eigenvalues(Eigen::MatrixXd const& C)
{
    SymmetricEigen const e = jacobi_eigen(C);
    return {e.values.data(), e.values.data() + e.values.size()};
}

}  // namespace gratinguq
