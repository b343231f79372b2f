#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <variant>

#include "slm/types.hpp"

namespace slm {

// Scalar distributions used for hidden parameters and initial conditions.
// `variance`, not standard deviation, parameterizes the normal.
struct NormalDist {
    double mean = 0.0;
    double variance = 1.0;
};
struct UniformDist {
    double lo = 0.0;
    double hi = 1.0;
};
struct ExponentialDist {
    double rate = 1.0;
};

using CenterDist = std::variant<NormalDist, UniformDist>;
using WidthDist = std::variant<UniformDist, ExponentialDist>;

inline void validate(const NormalDist& d) {
    if (!(d.variance >= 0.0) || !std::isfinite(d.mean) || !std::isfinite(d.variance))
        throw ConfigError("normal distribution requires finite mean and variance >= 0");
}
inline void validate(const UniformDist& d) {
    if (!(d.hi > d.lo) || !std::isfinite(d.lo) || !std::isfinite(d.hi))
        throw ConfigError("uniform distribution requires finite lo < hi");
}
inline void validate(const ExponentialDist& d) {
    if (!(d.rate > 0.0) || !std::isfinite(d.rate))
        throw ConfigError("exponential distribution requires finite rate > 0");
}
inline void validate(const CenterDist& d) {
    std::visit([](const auto& v) { validate(v); }, d);
}
inline void validate(const WidthDist& d) {
    std::visit([](const auto& v) { validate(v); }, d);
    if (const auto* u = std::get_if<UniformDist>(&d); u && u->lo < 0.0)
        throw ConfigError("uniform width distribution requires lo >= 0");
}

/// Derives an independent substream seed from a base seed and a stream tag
/// (splitmix64 finalizer). Identical inputs give identical outputs on every
/// platform.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seedable generator with fixed, implementation-independent mappings from
// engine output to floating point. The engine is std::mt19937_64, whose
// integer stream is pinned by the standard; the standard library's
// distribution adaptors are not, so the mappings live here instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log argument.
    double uniform01_open0() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Box-Muller without spare caching: every call consumes exactly two
    /// engine outputs, keeping the stream position independent of call mix.
    double normal(double mean, double stddev) {
        const double u1 = uniform01_open0();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * (r * std::cos(6.283185307179586476925286766559 * u2));
    }

    double exponential(double rate) { return -std::log(uniform01_open0()) / rate; }

    double draw(const CenterDist& d) {
        return std::visit(
            [this](const auto& v) { return this->draw_one(v); }, d);
    }
    double draw(const WidthDist& d) {
        return std::visit(
            [this](const auto& v) { return this->draw_one(v); }, d);
    }

    std::uint64_t raw() { return engine_(); }

private:
    double draw_one(const NormalDist& d) { return normal(d.mean, std::sqrt(d.variance)); }
    double draw_one(const UniformDist& d) { return uniform(d.lo, d.hi); }
    double draw_one(const ExponentialDist& d) { return exponential(d.rate); }

    std::mt19937_64 engine_;
};

/// Name of the generator scheme, echoed into reports and model files.
inline const char* prng_name() { return "mt19937_64+splitmix64-substreams"; }

}  // namespace slm
