#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "slm/random.hpp"
#include "slm/types.hpp"

namespace slm {

/// Widths below this are resampled; a width this small makes the Gaussian
/// numerically constant 1 over any bounded input region.
inline constexpr double kWidthFloor = 1e-12;

/// How the hidden parameters are drawn: per-coordinate i.i.d. centers,
/// strictly positive widths.
struct RandomSpec {
    CenterDist center_dist = NormalDist{0.0, 2.0};
    WidthDist width_dist = UniformDist{0.0, 1.0};
    std::uint64_t seed = 0;
};

/// Fixed random hidden layer: h Gaussian units g_i(x) = exp(-b_i ||x - a_i||^2)
/// with centers a_i (rows of `centers`) and widths b_i > 0. Immutable after
/// generation; evaluation is pure.
template <typename Scalar = double>
struct RbfBank {
    Index dim_in = 0;
    Mat<Scalar> centers;  // h x n, row i = a_i
    Vec<Scalar> widths;   // h, all > 0
    std::uint64_t seed = 0;

    Index count_models() const { return widths.size(); }
};

using RbfBankd = RbfBank<double>;

/// Draws a bank from spec: all center coordinates first (model-major), then
/// all widths. Deterministic in (spec, dim_in, count_models).
template <typename Scalar = double>
RbfBank<Scalar> generate_bank(const RandomSpec& spec, Index dim_in, Index count_models) {
    validate(spec.center_dist);
    validate(spec.width_dist);
    if (dim_in < 1) throw ConfigError("generate_bank: dim_in must be >= 1");
    if (count_models < 1) throw ConfigError("generate_bank: count_models must be >= 1");

    RbfBank<Scalar> bank;
    bank.dim_in = dim_in;
    bank.seed = spec.seed;
    bank.centers.resize(count_models, dim_in);
    bank.widths.resize(count_models);

    Rng rng(spec.seed);
    for (Index i = 0; i < count_models; ++i)
        for (Index k = 0; k < dim_in; ++k)
            bank.centers(i, k) = static_cast<Scalar>(rng.draw(spec.center_dist));
    for (Index i = 0; i < count_models; ++i) {
        double w = rng.draw(spec.width_dist);
        int attempts = 0;
        while (w < kWidthFloor) {
            if (++attempts > 100)
                throw ConfigError("generate_bank: width distribution mass sits below the floor");
            w = rng.draw(spec.width_dist);
        }
        bank.widths(i) = static_cast<Scalar>(w);
    }
    return bank;
}

/// g_i(x) = exp(-b_i ||x - a_i||^2), in (0, 1]; equals 1 iff x = a_i.
/// The squared distance is accumulated coordinate by coordinate so the value
/// is reproducible entry for entry.
template <typename Scalar, typename Derived>
Scalar activation(const RbfBank<Scalar>& bank, Index i, const Eigen::MatrixBase<Derived>& x) {
    if (i < 0 || i >= bank.count_models())
        throw ContractViolation("activation: model index out of range");
    if (x.size() != bank.dim_in)
        throw ContractViolation("activation: input dimension mismatch");
    Scalar d2 = Scalar(0);
    for (Index k = 0; k < bank.dim_in; ++k) {
        const Scalar diff = x(k) - bank.centers(i, k);
        d2 += diff * diff;
    }
    return std::exp(-bank.widths(i) * d2);
}

/// All h activations at one input.
template <typename Scalar, typename Derived>
Vec<Scalar> activations(const RbfBank<Scalar>& bank, const Eigen::MatrixBase<Derived>& x) {
    Vec<Scalar> g(bank.count_models());
    for (Index i = 0; i < bank.count_models(); ++i) g(i) = activation(bank, i, x);
    return g;
}

/// True iff the distances ||x_j - a|| are pairwise distinct beyond a 1e-12
/// relative tolerance. Rows of `points` are the x_j. A randomly drawn `a`
/// lands on some mid-hyperplane of the sample set only with probability zero;
/// this is the testable face of that statement.
template <typename Scalar>
bool check_distinct_norms(const Mat<Scalar>& points, const Vec<Scalar>& a) {
    if (points.rows() < 2)
        throw ContractViolation("check_distinct_norms: need at least two points");
    if (points.cols() != a.size())
        throw ContractViolation("check_distinct_norms: dimension mismatch");
    Vec<Scalar> dist(points.rows());
    for (Index j = 0; j < points.rows(); ++j)
        dist(j) = (points.row(j).transpose() - a).norm();
    std::sort(dist.data(), dist.data() + dist.size());
    constexpr Scalar rel = Scalar(1e-12);
    for (Index j = 0; j + 1 < dist.size(); ++j) {
        const Scalar gap = dist(j + 1) - dist(j);
        if (gap <= rel * std::max(Scalar(1), dist(j + 1))) return false;
    }
    return true;
}

}  // namespace slm
