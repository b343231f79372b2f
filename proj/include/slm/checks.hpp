#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slm/random.hpp"
#include "slm/rbf.hpp"
#include "slm/types.hpp"

namespace slm {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// A square-regressor instance (N = (n+1)h) built so the interpolation
/// property is testable in double precision: validity regions tile a coarse
/// grid, each holding one cluster of n+1 affinely independent samples, and
/// widths match the grid pitch. Free draws of centers, widths, and samples
/// at these sizes routinely reach condition numbers past 1e14, where any
/// solver loses the exact fit to rounding.
struct InterpolationInstance {
    RbfBankd bank;
    Matd inputs;
};

InterpolationInstance make_interpolation_instance(Rng& rng, Index dim_in, Index count_models);

/// Same construction with a free sample count: samples cycle through the
/// cells and cluster slots, so any N keeps rank(K) = min(N, (n+1)h)
/// observable at the default truncation threshold.
InterpolationInstance make_rank_instance(Rng& rng, Index dim_in, Index count_models,
                                         Index n_samples);

/// Randomized validation suites for the model-theoretic claims. Each one is
/// deterministic in its seed and returns counts in `detail`; callers that
/// want per-instance diagnostics pass a vector to fill.

struct RankDiag {
    Index dim_in = 0, count_models = 0, n_samples = 0;
    Index expected = 0, got = 0;
};

struct InterpolationDiag {
    Index dim_in = 0, count_models = 0, n_samples = 0, rank = 0;
    double rel_residual = 0.0, cond = 0.0;
};

/// rank(K) == min(N, (n+1)h) across random well-separated instances.
CheckResult check_rank(std::uint64_t seed, int instances,
                       std::vector<RankDiag>* diags = nullptr);

/// With N == (n+1)h the fit interpolates: relative squared residual at
/// machine scale. Ill-conditioned draws are flagged, not failed; a
/// well-conditioned miss fails the suite. pin_dim_in/pin_samples fix the
/// instance shape (pin_samples must be a positive multiple of dim_in + 1);
/// zero leaves the shape random.
CheckResult check_interpolation(std::uint64_t seed, int instances, Index pin_dim_in = 0,
                                Index pin_samples = 0,
                                std::vector<InterpolationDiag>* diags = nullptr);

/// Product-form fuzzy evaluation and alpha-zeroed SLMs agree with the
/// canonical evaluation to relative 1e-12; the observed maximum relative
/// deviation is part of the detail line.
CheckResult check_equivalence(std::uint64_t seed, int instances);

/// Random centers yield pairwise-distinct squared distances to a fixed
/// point set; a symmetric counterexample must be rejected.
CheckResult check_distinct_norms_suite(std::uint64_t seed, int instances);

/// All four suites at standard instance counts (reduced when quick).
std::vector<CheckResult> run_all_checks(std::uint64_t seed, bool quick);

}  // namespace slm
