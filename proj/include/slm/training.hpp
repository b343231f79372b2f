#pragma once

#include <chrono>
#include <optional>
#include <utility>

#include "slm/linalg.hpp"
#include "slm/models.hpp"
#include "slm/rbf.hpp"
#include "slm/types.hpp"

namespace slm {

/// N input/target pairs as matrix rows: inputs N x n, targets N x m.
template <typename Scalar = double>
struct Dataset {
    Mat<Scalar> inputs;
    Mat<Scalar> targets;

    Dataset() = default;
    Dataset(Mat<Scalar> in, Mat<Scalar> tg) : inputs(std::move(in)), targets(std::move(tg)) {
        if (inputs.rows() != targets.rows())
            throw ContractViolation("Dataset: inputs and targets must have equal row counts");
        if (inputs.rows() < 1) throw ContractViolation("Dataset: at least one sample required");
        if (!inputs.allFinite() || !targets.allFinite())
            throw InputError("Dataset: non-finite entries");
    }

    Index size() const { return inputs.rows(); }
    Index dim_in() const { return inputs.cols(); }
    Index dim_out() const { return targets.cols(); }
};

using Datasetd = Dataset<double>;

/// No two identical rows. The interpolation and rank statements assume
/// distinct samples; fitting itself does not.
template <typename Scalar>
bool distinct_rows(const Mat<Scalar>& m) {
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = i + 1; j < m.rows(); ++j)
            if (m.row(i) == m.row(j)) return false;
    return true;
}

/// What a closed-form fit measured: residual error under both conventions
/// (mean over samples and raw sum), wall-clock split between regressor
/// assembly and the pseudoinverse solve, and the solve's rank diagnostics.
template <typename Scalar = double>
struct FitReport {
    Scalar train_mse = Scalar(0);  // (1/N) sum_j ||model(x_j) - t_j||^2
    Scalar train_sse = Scalar(0);  // raw sum of squared errors
    double build_seconds = 0.0;
    double solve_seconds = 0.0;
    Index regressor_rank = 0;
    Scalar sigma_max = Scalar(0);
    Scalar sigma_min_retained = Scalar(0);
    Index n = 0, m = 0, h = 0, num_samples = 0;
};

using FitReportd = FitReport<double>;

/// Augmented input z = [x; 1]; the trailing coordinate is exactly 1.
template <typename Derived>
Vec<typename Derived::Scalar> build_z(const Eigen::MatrixBase<Derived>& x) {
    using S = typename Derived::Scalar;
    Vec<S> z(x.size() + 1);
    z.head(x.size()) = x;
    z(x.size()) = S(1);
    return z;
}

/// Hidden layer output matrix: entry (j, i) = g_i(x_j), N x h.
template <typename Scalar>
Mat<Scalar> build_h_matrix(const RbfBank<Scalar>& bank, const Dataset<Scalar>& data) {
    if (data.dim_in() != bank.dim_in)
        throw ContractViolation("build_h_matrix: bank/data dimension mismatch");
    const Index n_samples = data.size();
    const Index h = bank.count_models();
    Mat<Scalar> out(n_samples, h);
    for (Index j = 0; j < n_samples; ++j) {
        const auto x = data.inputs.row(j).transpose();
        for (Index i = 0; i < h; ++i) out(j, i) = activation(bank, i, x);
    }
    return out;
}

/// Stacked SLM regressor, N x (n+1)h: row j concatenates g_i(x_j) z_j^T over
/// all models. Assembled block-wise: the h activations and z_j are computed
/// once per row, and each (n+1)-wide block is a scalar multiple of z_j^T.
template <typename Scalar>
Mat<Scalar> build_k_matrix(const RbfBank<Scalar>& bank, const Dataset<Scalar>& data) {
    if (data.dim_in() != bank.dim_in)
        throw ContractViolation("build_k_matrix: bank/data dimension mismatch");
    const Index n_samples = data.size();
    const Index n = bank.dim_in;
    const Index h = bank.count_models();
    Mat<Scalar> hmat = build_h_matrix(bank, data);
    Mat<Scalar> k(n_samples, (n + 1) * h);
    RowVec<Scalar> z(n + 1);
    for (Index j = 0; j < n_samples; ++j) {
        z.head(n) = data.inputs.row(j);
        z(n) = Scalar(1);
        for (Index i = 0; i < h; ++i) k.block(j, i * (n + 1), 1, n + 1) = hmat(j, i) * z;
    }
    return k;
}

/// Entry-at-a-time reference assembly of the same matrix; recomputes the
/// activation for every single entry. Kept as the baseline the block-wise
/// builder is benchmarked against.
template <typename Scalar>
Mat<Scalar> build_k_matrix_naive(const RbfBank<Scalar>& bank, const Dataset<Scalar>& data) {
    if (data.dim_in() != bank.dim_in)
        throw ContractViolation("build_k_matrix_naive: bank/data dimension mismatch");
    const Index n_samples = data.size();
    const Index n = bank.dim_in;
    const Index h = bank.count_models();
    Mat<Scalar> k(n_samples, (n + 1) * h);
    for (Index j = 0; j < n_samples; ++j) {
        for (Index i = 0; i < h; ++i) {
            for (Index c = 0; c <= n; ++c) {
                const Scalar g = activation(bank, i, data.inputs.row(j).transpose());
                const Scalar zc = c < n ? data.inputs(j, c) : Scalar(1);
                k(j, i * (n + 1) + c) = g * zc;
            }
        }
    }
    return k;
}

namespace detail {
inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace detail

/// Closed-form SLM fit: Gamma = K^+ T by minimum-norm least squares.
/// Assembly and solve are timed separately; the training error is evaluated
/// through the same stacked regressor used for the fit.
template <typename Scalar>
std::pair<SlmParams<Scalar>, FitReport<Scalar>> fit_slm(
    const RbfBank<Scalar>& bank, const Dataset<Scalar>& data,
    std::optional<Scalar> rank_tol = std::nullopt) {
    FitReport<Scalar> report;
    report.n = data.dim_in();
    report.m = data.dim_out();
    report.h = bank.count_models();
    report.num_samples = data.size();

    auto t0 = std::chrono::steady_clock::now();
    Mat<Scalar> k = build_k_matrix(bank, data);
    report.build_seconds = detail::seconds_since(t0);

    SolveInfo<Scalar> info;
    t0 = std::chrono::steady_clock::now();
    Mat<Scalar> gamma = pseudoinverse_solve(k, data.targets, rank_tol, &info);
    report.solve_seconds = detail::seconds_since(t0);
    report.regressor_rank = info.rank;
    report.sigma_max = info.sigma_max;
    report.sigma_min_retained = info.sigma_min_retained;

    report.train_sse = frobenius_sq((k * gamma - data.targets).eval());
    report.train_mse = report.train_sse / static_cast<Scalar>(data.size());
    return {SlmParams<Scalar>{bank, std::move(gamma)}, report};
}

/// Closed-form ELM fit: B = H^+ T.
template <typename Scalar>
std::pair<ElmParams<Scalar>, FitReport<Scalar>> fit_elm(
    const RbfBank<Scalar>& bank, const Dataset<Scalar>& data,
    std::optional<Scalar> rank_tol = std::nullopt) {
    FitReport<Scalar> report;
    report.n = data.dim_in();
    report.m = data.dim_out();
    report.h = bank.count_models();
    report.num_samples = data.size();

    auto t0 = std::chrono::steady_clock::now();
    Mat<Scalar> hmat = build_h_matrix(bank, data);
    report.build_seconds = detail::seconds_since(t0);

    SolveInfo<Scalar> info;
    t0 = std::chrono::steady_clock::now();
    Mat<Scalar> b = pseudoinverse_solve(hmat, data.targets, rank_tol, &info);
    report.solve_seconds = detail::seconds_since(t0);
    report.regressor_rank = info.rank;
    report.sigma_max = info.sigma_max;
    report.sigma_min_retained = info.sigma_min_retained;

    report.train_sse = frobenius_sq((hmat * b - data.targets).eval());
    report.train_mse = report.train_sse / static_cast<Scalar>(data.size());
    return {ElmParams<Scalar>{bank, std::move(b)}, report};
}

/// Numerical rank of the stacked regressor K. Full rank means
/// min(N, (n+1)h); callers compare against that.
template <typename Scalar>
Index check_k_rank(const RbfBank<Scalar>& bank, const Dataset<Scalar>& data,
                   std::optional<Scalar> rank_tol = std::nullopt) {
    return numerical_rank(build_k_matrix(bank, data), rank_tol);
}

}  // namespace slm
