#pragma once

#include <Eigen/Dense>

#include <limits>
#include <optional>

#include "slm/types.hpp"

namespace slm {

/// Diagnostics from a pseudoinverse solve: numerical rank of the regressor
/// and the extreme retained singular values (for condition reporting).
template <typename Scalar>
struct SolveInfo {
    Index rank = 0;
    Scalar sigma_max = Scalar(0);
    Scalar sigma_min_retained = Scalar(0);
};

/// Conventional SVD truncation threshold: max(rows, cols) * machine epsilon,
/// relative to the largest singular value.
template <typename Scalar>
Scalar default_rank_tol(Index rows, Index cols) {
    return static_cast<Scalar>(std::max(rows, cols)) * std::numeric_limits<Scalar>::epsilon();
}

/// Minimum-norm least-squares solve X = a^+ t.
///
/// Singular values at or below rank_tol * sigma_max are treated as zero, so
/// X minimizes ||aX - t||_F and, among all minimizers, has the smallest
/// Frobenius norm. rank_tol defaults to default_rank_tol for a's shape.
/// Degenerate shapes (zero rows or columns) yield a zero matrix of the
/// correct shape.
template <typename DerivedA, typename DerivedT>
Mat<typename DerivedA::Scalar> pseudoinverse_solve(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedT>& t,
    std::optional<typename DerivedA::Scalar> rank_tol = std::nullopt,
    SolveInfo<typename DerivedA::Scalar>* info = nullptr) {
    using S = typename DerivedA::Scalar;
    if (a.rows() != t.rows())
        throw ContractViolation("pseudoinverse_solve: a and t must have equal row counts");
    if (rank_tol && !(*rank_tol >= S(0)))
        throw ContractViolation("pseudoinverse_solve: rank_tol must be nonnegative");
    if (info) *info = SolveInfo<S>{};
    if (a.rows() == 0 || a.cols() == 0 || t.cols() == 0)
        return Mat<S>::Zero(a.cols(), t.cols());
    if (!a.allFinite() || !t.allFinite())
        throw InputError("pseudoinverse_solve: non-finite entries");

    Eigen::BDCSVD<Mat<S>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(rank_tol ? *rank_tol : default_rank_tol<S>(a.rows(), a.cols()));
    Mat<S> x = svd.solve(t.derived());
    if (info) {
        info->rank = svd.rank();
        info->sigma_max = svd.singularValues()(0);
        info->sigma_min_retained =
            info->rank > 0 ? svd.singularValues()(info->rank - 1) : S(0);
    }
    return x;
}

/// Number of singular values above rank_tol * sigma_max; 0 for the zero or
/// empty matrix.
template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& a,
                     std::optional<typename Derived::Scalar> rank_tol = std::nullopt) {
    using S = typename Derived::Scalar;
    if (a.size() == 0) return 0;
    if (rank_tol && !(*rank_tol >= S(0)))
        throw ContractViolation("numerical_rank: rank_tol must be nonnegative");
    if (!a.allFinite()) throw InputError("numerical_rank: non-finite entries");
    Eigen::BDCSVD<Mat<S>> svd(a);
    svd.setThreshold(rank_tol ? *rank_tol : default_rank_tol<S>(a.rows(), a.cols()));
    return svd.rank();
}

/// Squared Frobenius norm: the sum-of-squared-errors functional when applied
/// to a residual matrix.
template <typename Derived>
typename Derived::Scalar frobenius_sq(const Eigen::MatrixBase<Derived>& a) {
    return a.squaredNorm();
}

}  // namespace slm
