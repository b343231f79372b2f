#pragma once

#include <cmath>

#include "slm/rbf.hpp"
#include "slm/types.hpp"

namespace slm {

/// Affine map x -> alpha x + beta with alpha m x n and beta in R^m.
template <typename Scalar = double>
struct LinearModelParams {
    Mat<Scalar> alpha;
    Vec<Scalar> beta;
};

/// Shuffled linear model: h local affine maps blended by the bank's Gaussian
/// validity weights. gamma is (n+1)h x m; block i occupies rows
/// i(n+1) .. i(n+1)+n, the first n of them alpha_i^T, the last beta_i^T,
/// matching the augmented input z = [x; 1].
template <typename Scalar = double>
struct SlmParams {
    RbfBank<Scalar> bank;
    Mat<Scalar> gamma;

    Index dim_in() const { return bank.dim_in; }
    Index dim_out() const { return gamma.cols(); }
    Index count_models() const { return bank.count_models(); }
};

/// RBF extreme learning machine: output weights b_matrix (h x m), row i the
/// weight vector of hidden unit i.
template <typename Scalar = double>
struct ElmParams {
    RbfBank<Scalar> bank;
    Mat<Scalar> b_matrix;

    Index dim_in() const { return bank.dim_in; }
    Index dim_out() const { return b_matrix.cols(); }
    Index count_models() const { return bank.count_models(); }
};

using SlmParamsd = SlmParams<double>;
using ElmParamsd = ElmParams<double>;

template <typename Scalar, typename Derived>
Vec<Scalar> eval_lm(const LinearModelParams<Scalar>& lm, const Eigen::MatrixBase<Derived>& x) {
    if (x.size() != lm.alpha.cols())
        throw ContractViolation("eval_lm: input dimension mismatch");
    if (lm.beta.size() != lm.alpha.rows())
        throw ContractViolation("eval_lm: alpha/beta row mismatch");
    return lm.alpha * x + lm.beta;
}

/// The local model of block i, copied out of gamma.
template <typename Scalar>
LinearModelParams<Scalar> local_model(const SlmParams<Scalar>& p, Index i) {
    if (i < 0 || i >= p.count_models())
        throw ContractViolation("local_model: index out of range");
    const Index n = p.dim_in();
    LinearModelParams<Scalar> lm;
    lm.alpha = p.gamma.block(i * (n + 1), 0, n, p.dim_out()).transpose();
    lm.beta = p.gamma.row(i * (n + 1) + n).transpose();
    return lm;
}

/// Canonical SLM evaluation: y = Gamma^T [g_1(x) z; ...; g_h(x) z] with
/// z = [x; 1]. Training assembles exactly these stacked regressor rows, so
/// inference and fitting share one formulation.
template <typename Scalar, typename Derived>
Vec<Scalar> eval_slm(const SlmParams<Scalar>& p, const Eigen::MatrixBase<Derived>& x) {
    const Index n = p.dim_in();
    const Index h = p.count_models();
    if (x.size() != n) throw ContractViolation("eval_slm: input dimension mismatch");
    if (p.gamma.rows() != (n + 1) * h)
        throw ContractViolation("eval_slm: gamma rows must be (n+1)h");
    Vec<Scalar> z(n + 1);
    z.head(n) = x;
    z(n) = Scalar(1);
    Vec<Scalar> stacked((n + 1) * h);
    for (Index i = 0; i < h; ++i)
        stacked.segment(i * (n + 1), n + 1) = activation(p.bank, i, x) * z;
    return p.gamma.transpose() * stacked;
}

/// Term-by-term form: sum_i g_i(x) (alpha_i x + beta_i). Mathematically equal
/// to eval_slm; kept as the independent second route for equivalence checks.
template <typename Scalar, typename Derived>
Vec<Scalar> eval_slm_sum(const SlmParams<Scalar>& p, const Eigen::MatrixBase<Derived>& x) {
    const Index n = p.dim_in();
    if (x.size() != n) throw ContractViolation("eval_slm_sum: input dimension mismatch");
    Vec<Scalar> y = Vec<Scalar>::Zero(p.dim_out());
    for (Index i = 0; i < p.count_models(); ++i)
        y += activation(p.bank, i, x) * eval_lm(local_model(p, i), x);
    return y;
}

template <typename Scalar, typename Derived>
Vec<Scalar> eval_elm(const ElmParams<Scalar>& p, const Eigen::MatrixBase<Derived>& x) {
    if (x.size() != p.dim_in()) throw ContractViolation("eval_elm: input dimension mismatch");
    if (p.b_matrix.rows() != p.count_models())
        throw ContractViolation("eval_elm: b_matrix rows must equal model count");
    return p.b_matrix.transpose() * activations(p.bank, x);
}

/// Takagi-Sugeno product form: each rule fires with the product of
/// per-coordinate Gaussian memberships sharing one width,
/// prod_k exp(-b_i (x_k - a_ik)^2), then the fired affine consequents are
/// summed. Collapses algebraically to the SLM.
template <typename Scalar, typename Derived>
Vec<Scalar> eval_tsm_product(const SlmParams<Scalar>& p, const Eigen::MatrixBase<Derived>& x) {
    const Index n = p.dim_in();
    if (x.size() != n) throw ContractViolation("eval_tsm_product: input dimension mismatch");
    Vec<Scalar> y = Vec<Scalar>::Zero(p.dim_out());
    for (Index i = 0; i < p.count_models(); ++i) {
        Scalar fired = Scalar(1);
        for (Index k = 0; k < n; ++k) {
            const Scalar diff = x(k) - p.bank.centers(i, k);
            fired *= std::exp(-p.bank.widths(i) * diff * diff);
        }
        y += fired * eval_lm(local_model(p, i), x);
    }
    return y;
}

/// Free parameters fitted by regression: h·m·(n+1) for the SLM (full affine
/// blocks) versus h·m for the ELM (constant output weights).
inline Index slm_param_count(Index h, Index n, Index m) { return h * m * (n + 1); }
inline Index elm_param_count(Index h, Index m) { return h * m; }

template <typename Scalar>
Index param_count(const SlmParams<Scalar>& p) {
    return slm_param_count(p.count_models(), p.dim_in(), p.dim_out());
}
template <typename Scalar>
Index param_count(const ElmParams<Scalar>& p) {
    return elm_param_count(p.count_models(), p.dim_out());
}

}  // namespace slm
