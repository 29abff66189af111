#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "bstlab/coin.hpp"

namespace bstlab {

// Reflected random walk Y_i = max(0, Y_{i-1} + X_i) with steps X in
// {-1, 0, +1}. Models the depth of the insertion point, which rotations
// can push both up and down during a run of insertions.

class ProcessError : public std::invalid_argument {
public:
    explicit ProcessError(const std::string& what) : std::invalid_argument(what) {}
};

struct ProcessParams {
    double p_minus = 0.0;  // probability of -1
    double p_zero = 0.0;   // probability of 0
    double p_plus = 0.0;   // probability of +1

    void validate() const {
        if (p_minus < 0 || p_zero < 0 || p_plus < 0)
            throw ProcessError("process probabilities must be non-negative");
        if (std::abs(p_minus + p_zero + p_plus - 1.0) > 1e-12)
            throw ProcessError("process probabilities must sum to 1");
    }
};

struct ProcessRun {
    std::size_t steps = 0;
    std::int64_t final_y = 0;
    std::vector<std::int64_t> trajectory_sample;  // thinned Y samples, optional
};

/// Runs the walk for n steps from Y_0 = 0. A step draws one uniform u and
/// maps u < p_minus to -1, u < p_minus + p_zero to 0, else +1 (fixed order
/// for reproducibility). If sample_points > 0, roughly that many evenly
/// thinned Y values are kept.
inline ProcessRun simulate(const ProcessParams& params, std::size_t n, std::uint64_t seed,
                           std::size_t sample_points = 0) {
    params.validate();
    std::mt19937_64 rng(seed);
    const double lo = params.p_minus;
    const double mid = params.p_minus + params.p_zero;

    ProcessRun run;
    run.steps = n;
    const std::size_t stride = sample_points > 0 ? std::max<std::size_t>(1, n / sample_points) : 0;

    std::int64_t y = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double u = unit_double(rng);
        if (u < lo) {
            if (y > 0) --y;  // reflection pins the walk at zero
        } else if (u >= mid) {
            ++y;
        }
        if (stride != 0 && i % stride == 0) run.trajectory_sample.push_back(y);
    }
    run.final_y = y;
    return run;
}

struct EnsembleStats {
    double mean_final_y = 0.0;
    double std_err = 0.0;
    std::size_t trials = 0;
};

/// Mean and standard error of Y_n over independently seeded trials (trial
/// t uses seed_base + t).
inline EnsembleStats run_ensemble(const ProcessParams& params, std::size_t n, std::size_t trials,
                                  std::uint64_t seed_base) {
    if (trials == 0) throw ProcessError("run_ensemble: trials must be positive");
    params.validate();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto y = static_cast<double>(simulate(params, n, seed_base + t).final_y);
        sum += y;
        sum_sq += y * y;
    }
    EnsembleStats s;
    s.trials = trials;
    s.mean_final_y = sum / static_cast<double>(trials);
    if (trials > 1) {
        const double var =
            (sum_sq - sum * sum / static_cast<double>(trials)) / static_cast<double>(trials - 1);
        s.std_err = std::sqrt(std::max(0.0, var) / static_cast<double>(trials));
    }
    return s;
}

/// Growth exponent estimate lg(mean Y_n) / lg(n), the mean taken over
/// trials before the logarithm. A zero mean yields -infinity, which
/// callers report distinctly.
inline double estimate_exponent(const ProcessParams& params, std::size_t n, std::size_t trials,
                                std::uint64_t seed_base) {
    if (n < 2) throw ProcessError("estimate_exponent: n must be at least 2");
    const EnsembleStats s = run_ensemble(params, n, trials, seed_base);
    if (s.mean_final_y <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log2(s.mean_final_y) / std::log2(static_cast<double>(n));
}

/// Upper bound a(1-a)/(1-2a)^2 on E[Y_n] (for every n) in the negative-
/// drift regime, where a = p_plus / (p_plus + p_minus). Requires
/// p_minus > p_plus; the bound diverges otherwise.
inline double negative_drift_mean_bound(const ProcessParams& params) {
    params.validate();
    if (!(params.p_minus > params.p_plus))
        throw ProcessError("negative_drift_mean_bound requires p_minus > p_plus");
    const double a = params.p_plus / (params.p_plus + params.p_minus);
    return a * (1.0 - a) / ((1.0 - 2.0 * a) * (1.0 - 2.0 * a));
}

}  // namespace bstlab
