#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slm/models.hpp"
#include "slm/random.hpp"

using namespace slm;

namespace {

Matd random_matrix(Rng& rng, Index rows, Index cols) {
    Matd out(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) out(r, c) = rng.normal(0.0, 1.0);
    return out;
}

SlmParamsd random_slm(std::uint64_t seed, Index n, Index h, Index m) {
    RandomSpec spec;
    spec.seed = seed;
    SlmParamsd p{generate_bank(spec, n, h), Matd()};
    Rng rng(mix_seed(seed, 0xABC));
    p.gamma = random_matrix(rng, (n + 1) * h, m);
    return p;
}

}  // namespace

TEST_CASE("affine local model evaluates alpha x + beta") {
    LinearModelParams<double> lm;
    lm.alpha = (Matd(2, 2) << 2, 0, 0, 3).finished();
    lm.beta = (Vecd(2) << 1, -1).finished();
    Vecd x(2);
    x << 1, 1;
    const Vecd y = eval_lm(lm, x);
    CHECK(y(0) == 3.0);
    CHECK(y(1) == 2.0);
    CHECK_THROWS_AS(eval_lm(lm, Vecd::Zero(3).eval()), ContractViolation);
}

TEST_CASE("local_model reads the documented gamma block layout") {
    // h = 2, n = 2, m = 2. Block i spans rows i(n+1)..i(n+1)+n; the first n
    // rows are alpha_i^T, the last is beta_i^T.
    const Index n = 2, m = 2, h = 2;
    Matd alpha0 = (Matd(2, 2) << 1, 2, 3, 4).finished();
    Vecd beta0 = (Vecd(2) << 5, 6).finished();
    Matd alpha1 = (Matd(2, 2) << -1, 0, 0, -2).finished();
    Vecd beta1 = (Vecd(2) << 7, 8).finished();

    Matd gamma((n + 1) * h, m);
    gamma.block(0, 0, n, m) = alpha0.transpose();
    gamma.row(n) = beta0.transpose();
    gamma.block(n + 1, 0, n, m) = alpha1.transpose();
    gamma.row(2 * n + 1) = beta1.transpose();

    RandomSpec spec;
    spec.seed = 1;
    SlmParamsd p{generate_bank(spec, n, h), gamma};
    CHECK(local_model(p, 0).alpha == alpha0);
    CHECK(local_model(p, 0).beta == beta0);
    CHECK(local_model(p, 1).alpha == alpha1);
    CHECK(local_model(p, 1).beta == beta1);
    CHECK_THROWS_AS(local_model(p, 2), ContractViolation);
    CHECK_THROWS_AS(local_model(p, -1), ContractViolation);
}

TEST_CASE("slm evaluation matches a hand-computed instance") {
    // n = 1, m = 1, h = 2: slm(x) = g0 (2x + 1) + g1 (-x + 3).
    RbfBankd bank;
    bank.dim_in = 1;
    bank.centers = (Matd(2, 1) << 0.0, 2.0).finished();
    bank.widths = (Vecd(2) << 1.0, 0.5).finished();
    Matd gamma(4, 1);
    gamma << 2.0, 1.0, -1.0, 3.0;
    SlmParamsd p{bank, gamma};

    Vecd x(1);
    x << 1.0;
    const double g0 = std::exp(-1.0), g1 = std::exp(-0.5);
    const double expected = g0 * 3.0 + g1 * 2.0;
    CHECK(eval_slm(p, x)(0) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(eval_slm_sum(p, x)(0) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(eval_tsm_product(p, x)(0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("elm evaluation is the weighted activation sum") {
    RbfBankd bank;
    bank.dim_in = 1;
    bank.centers = (Matd(2, 1) << 0.0, 1.0).finished();
    bank.widths = (Vecd(2) << 1.0, 1.0).finished();
    ElmParamsd p{bank, (Matd(2, 1) << 3.0, -2.0).finished()};
    Vecd x(1);
    x << 1.0;
    const double expected = 3.0 * std::exp(-1.0) - 2.0 * 1.0;
    CHECK(eval_elm(p, x)(0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("canonical, summed, and product evaluations agree everywhere") {
    int agree = 0;
    const int instances = 50, points = 20;
    for (int s = 0; s < instances; ++s) {
        const SlmParamsd p = random_slm(1000 + static_cast<std::uint64_t>(s), 2, 8, 2);
        Rng rng(mix_seed(2000, static_cast<std::uint64_t>(s)));
        for (int k = 0; k < points; ++k) {
            Vecd x(2);
            x << rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0);
            const Vecd canonical = eval_slm(p, x);
            const double scale = std::max(1.0, canonical.norm());
            const bool ok = (eval_slm_sum(p, x) - canonical).norm() <= 1e-12 * scale &&
                            (eval_tsm_product(p, x) - canonical).norm() <= 1e-12 * scale;
            if (ok) ++agree;
        }
    }
    CHECK(agree == instances * points);
}

TEST_CASE("an slm with zero slopes reproduces the elm on the same bank") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomSpec spec;
        spec.seed = 3000 + seed;
        const Index n = 2, h = 10, m = 2;
        const RbfBankd bank = generate_bank(spec, n, h);
        Rng rng(mix_seed(4000, seed));
        ElmParamsd elm{bank, random_matrix(rng, h, m)};

        SlmParamsd slm{bank, Matd::Zero((n + 1) * h, m)};
        for (Index i = 0; i < h; ++i) slm.gamma.row(i * (n + 1) + n) = elm.b_matrix.row(i);

        for (int k = 0; k < 100; ++k) {
            Vecd x(2);
            x << rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0);
            const Vecd ye = eval_elm(elm, x);
            const Vecd ys = eval_slm(slm, x);
            CHECK((ye - ys).norm() <= 1e-12 * std::max(1.0, ye.norm()));
        }
    }
}

TEST_CASE("takagi-sugeno product with a shared width collapses to one gaussian") {
    // One rule: exp(-b (x1-a1)^2) exp(-b (x2-a2)^2) = exp(-b ||x-a||^2).
    RbfBankd bank;
    bank.dim_in = 2;
    bank.centers = (Matd(1, 2) << 0.5, -0.25).finished();
    bank.widths = Vecd::Constant(1, 0.8);
    Matd gamma(3, 1);
    gamma << 0.0, 0.0, 1.0;  // constant consequent 1: output is the firing strength
    SlmParamsd p{bank, gamma};

    Rng rng(5);
    for (int k = 0; k < 100; ++k) {
        Vecd x(2);
        x << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
        const double fired = eval_tsm_product(p, x)(0);
        const double gaussian = activation(bank, 0, x);
        CHECK(fired == doctest::Approx(gaussian).epsilon(1e-13));
    }
}

TEST_CASE("parameter counts follow h m (n+1) versus h m") {
    CHECK(slm_param_count(100, 2, 2) == 600);
    CHECK(elm_param_count(300, 2) == 600);  // the paper's parity pairing
    CHECK(slm_param_count(1, 1, 1) == 2);
    CHECK(elm_param_count(1, 1) == 1);

    const SlmParamsd p = random_slm(1, 2, 100, 2);
    CHECK(param_count(p) == 600);
    RandomSpec spec;
    spec.seed = 2;
    ElmParamsd e{generate_bank(spec, 2, 300), Matd::Zero(300, 2)};
    CHECK(param_count(e) == 600);
}

TEST_CASE("slm output moves continuously with its input") {
    const SlmParamsd p = random_slm(123, 2, 16, 2);
    Rng rng(124);
    for (int k = 0; k < 50; ++k) {
        Vecd x(2);
        x << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
        const Vecd y0 = eval_slm(p, x);
        for (Index c = 0; c < 2; ++c) {
            Vecd xs = x;
            xs(c) += 1e-6;
            CHECK((eval_slm(p, xs) - y0).norm() <= 1e-3);
        }
    }
}

TEST_CASE("evaluation rejects shape misuse") {
    const SlmParamsd p = random_slm(9, 2, 4, 1);
    CHECK_THROWS_AS(eval_slm(p, Vecd::Zero(3).eval()), ContractViolation);
    CHECK_THROWS_AS(eval_slm_sum(p, Vecd::Zero(3).eval()), ContractViolation);
    CHECK_THROWS_AS(eval_tsm_product(p, Vecd::Zero(3).eval()), ContractViolation);

    SlmParamsd broken = p;
    broken.gamma = Matd::Zero(7, 1);  // not (n+1)h rows
    CHECK_THROWS_AS(eval_slm(broken, Vecd::Zero(2).eval()), ContractViolation);

    RandomSpec spec;
    spec.seed = 10;
    ElmParamsd e{generate_bank(spec, 2, 4), Matd::Zero(3, 1)};  // wrong row count
    CHECK_THROWS_AS(eval_elm(e, Vecd::Zero(2).eval()), ContractViolation);
    CHECK_THROWS_AS(eval_elm(e, Vecd::Zero(5).eval()), ContractViolation);
}
