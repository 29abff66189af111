#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bstlab/exact_oracle.hpp"
#include "bstlab/experiments.hpp"
#include "bstlab/metrics.hpp"
#include "bstlab/random_process.hpp"
#include "bstlab/rebalance.hpp"
#include "bstlab/sequences.hpp"
#include "bstlab/tree.hpp"

namespace bstlab {

// End-to-end verification suite: every check pins a quantitative claim
// about the schemes, the oracle, or the reflected walk, at a fixed
// tolerance. One pass/fail line per criterion; criterion 13 is
// informational only.

struct CriterionResult {
    int index = 0;
    std::string name;
    bool gating = true;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace acceptance_detail {

inline std::size_t right_height_of(const NodeStore& t) {
    if (t.empty()) return 0;
    std::size_t h = 0;
    for (NodeId cur = t.root(); t.right(cur) != null_node; cur = t.right(cur)) ++h;
    return h;
}

// Expected shapes for pairs sequences rebalanced with p = 0, built
// directly from the generalized shape law (verified at n = 6 against the
// literal reference shapes).
inline std::string zig_pairs_p0_shape(std::size_t n) {
    // Root 1; right child n; keys n-1, ..., 2 on a left chain below n.
    std::string chain;
    if (n >= 4) {
        chain = "(2 · ·)";
        for (std::size_t k = 3; k <= n - 1; ++k)
            chain = "(" + std::to_string(k) + " " + chain + " ·)";
    } else {
        chain = "·";
    }
    return "(1 · (" + std::to_string(n) + " " + chain + " ·))";
}

inline std::string zigzag_pairs_p0_shape(std::size_t n) {
    // Root n-1 with n as right child and n-2, ..., 1 on a left chain;
    // n = 2 degenerates to 2 over 1 (no grandparent, so no rotation ever
    // fires).
    if (n == 2) return "(2 (1 · ·) ·)";
    std::string chain = "(1 · ·)";
    for (std::size_t k = 2; k <= n - 2; ++k)
        chain = "(" + std::to_string(k) + " " + chain + " ·)";
    return "(" + std::to_string(n - 1) + " " + chain + " (" + std::to_string(n) + " · ·))";
}

inline NodeStore build_tree(Scheme scheme, std::span<const std::int64_t> seq, double p,
                            std::uint64_t coin_seed) {
    NodeStore t(seq.size());
    CoinSource coin(p, coin_seed);
    for (const std::int64_t key : seq) insert_rebalanced(t, key, scheme, coin);
    return t;
}

inline std::string fmt(double v) { return fmt_double(v); }

}  // namespace acceptance_detail

inline CriterionResult criterion_fig4_exactness() {
    using namespace acceptance_detail;
    CriterionResult r{1, "exact distribution of inserting 1,3,2 (zig, p=1/2)", true, false, "", 0};
    const std::vector<std::int64_t> seq{1, 3, 2};
    const RationalDistribution dist = enumerate_distribution(seq, Scheme::Zig, Rational(1, 2));
    const Rational quarter(1, 4);
    const std::array<const char*, 4> expected = {
        "(1 · (2 · (3 · ·)))",
        "(1 · (3 (2 · ·) ·))",
        "(3 (1 · (2 · ·)) ·)",
        "(3 (2 (1 · ·) ·) ·)",
    };
    bool ok = dist.entries.size() == 4;
    for (const char* shape : expected) {
        const auto it = dist.entries.find(shape);
        if (it == dist.entries.end() || it->second != quarter) ok = false;
    }
    r.pass = ok;
    r.detail = std::to_string(dist.entries.size()) + " shapes, all probabilities exactly 1/4: " +
               (ok ? "yes" : "no");
    return r;
}

inline CriterionResult criterion_degenerate_determinism(std::uint64_t seed_base) {
    using namespace acceptance_detail;
    CriterionResult r{2, "p=0 gives a path (zig), p=1 matches the unbalanced baseline", true,
                      false, "", 0};
    std::size_t checked = 0;
    for (const SequenceKind kind : all_sequence_kinds) {
        for (std::size_t n = 2; n <= 256; n += 2) {
            const auto seq = generate(kind, n, mix_seed(seed_base + n));
            const std::string baseline =
                build_tree(Scheme::None, seq, 1.0, seed_base).canonical_shape();
            const NodeStore zig0 = build_tree(Scheme::Zig, seq, 0.0, seed_base + 1);
            if (!is_path(zig0)) {
                r.detail = "zig at p=0 did not produce a path (" +
                           std::string(sequence_name(kind)) + ", n=" + std::to_string(n) + ")";
                return r;
            }
            for (const Scheme s : {Scheme::Zig, Scheme::ZigZag, Scheme::ZigZig}) {
                if (build_tree(s, seq, 1.0, seed_base + 2).canonical_shape() != baseline) {
                    r.detail = std::string(scheme_name(s)) + " at p=1 differs from baseline (" +
                               std::string(sequence_name(kind)) + ", n=" + std::to_string(n) + ")";
                    return r;
                }
            }
            ++checked;
        }
    }
    r.pass = true;
    r.detail = std::to_string(checked) + " (sequence, n) cells, all exact";
    return r;
}

inline CriterionResult criterion_pairs_p0_shapes(std::uint64_t seed_base) {
    using namespace acceptance_detail;
    CriterionResult r{3, "pairs at p=0: exact final shapes for zig and zigzag", true, false, "", 0};
    const char* zig6 = "(1 · (6 (5 (4 (3 (2 · ·) ·) ·) ·) ·))";
    const char* zigzag6 = "(5 (4 (3 (2 (1 · ·) ·) ·) ·) (6 · ·))";
    if (zig_pairs_p0_shape(6) != zig6 || zigzag_pairs_p0_shape(6) != zigzag6) {
        r.detail = "shape law disagrees with the n=6 reference shapes";
        return r;
    }
    for (std::size_t n = 2; n <= 256; n += 2) {
        const auto seq = generate(SequenceKind::Pairs, n);
        const std::string zig =
            build_tree(Scheme::Zig, seq, 0.0, seed_base).canonical_shape();
        const std::string zigzag =
            build_tree(Scheme::ZigZag, seq, 0.0, seed_base).canonical_shape();
        if (zig != zig_pairs_p0_shape(n)) {
            r.detail = "zig shape mismatch at n=" + std::to_string(n);
            return r;
        }
        if (zigzag != zigzag_pairs_p0_shape(n)) {
            r.detail = "zigzag shape mismatch at n=" + std::to_string(n);
            return r;
        }
    }
    r.pass = true;
    r.detail = "exact at n=6 and for all even n <= 256";
    return r;
}

inline CriterionResult criterion_pair_height_identity() {
    using namespace acceptance_detail;
    CriterionResult r{4, "pair-insertion height change: ten-case sum equals closed form", true,
                      false, "", 0};
    double worst_diff = 0.0;
    double worst_sum = 0.0;
    for (int i = 1; i <= 19; ++i) {
        const double p = 0.05 * i;
        for (int d = 0; d <= 20; ++d) {
            const PairHeightChange change = expected_pair_height_change(p, d);
            worst_diff = std::max(worst_diff, std::abs(change.raw_sum - change.reduced));
            const auto probs = pair_case_probabilities(p, d);
            double total = 0.0;
            for (const double q : probs) total += q;
            worst_sum = std::max(worst_sum, std::abs(total - 1.0));
        }
    }
    r.pass = worst_diff < 1e-12 && worst_sum < 1e-12;
    r.detail = "max |raw-reduced| = " + fmt(worst_diff) + ", max |sum(cases)-1| = " +
               fmt(worst_sum);
    return r;
}

inline CriterionResult criterion_rotation_distance_bounds(std::uint64_t seed_base) {
    using namespace acceptance_detail;
    CriterionResult r{5, "zig walk: mean rotation distance <= p/(1-p), mean flips <= 1/(1-p)",
                      true, false, "", 0};
    constexpr std::size_t n = 1024;
    constexpr std::size_t trials = 10;  // 10240 insert events per p
    std::string detail;
    bool ok = true;
    for (const double p : {0.25, 0.5, 0.75}) {
        std::vector<double> distances, flips;
        distances.reserve(n * trials);
        flips.reserve(n * trials);
        for (std::size_t t = 0; t < trials; ++t) {
            NodeStore tree(n);
            CoinSource coin(p, seed_base + t);
            for (std::size_t k = 1; k <= n; ++k) {
                const RebalanceOutcome out =
                    insert_rebalanced(tree, static_cast<std::int64_t>(k), Scheme::Zig, coin);
                distances.push_back(static_cast<double>(out.walk_distance()));
                flips.push_back(static_cast<double>(out.flips));
            }
        }
        const Aggregate ad = aggregate(distances);
        const Aggregate af = aggregate(flips);
        const double dist_bound = p / (1 - p);
        const double flip_bound = 1 / (1 - p);
        const bool here = ad.mean <= dist_bound + 3 * ad.std_err &&
                          af.mean <= flip_bound + 3 * af.std_err;
        ok = ok && here;
        detail += "p=" + fmt(p) + ": dist " + fmt(ad.mean) + "<=" + fmt(dist_bound) + "+3se, flips " +
                  fmt(af.mean) + "<=" + fmt(flip_bound) + "+3se; ";
    }
    r.pass = ok;
    r.detail = detail;
    return r;
}

inline CriterionResult criterion_height_increase_rate(std::uint64_t seed_base) {
    using namespace acceptance_detail;
    CriterionResult r{6, "zig on increasing keys: P(right height d -> d+1) = p^(d+1)", true,
                      false, "", 0};
    constexpr double p = 0.5;
    constexpr std::size_t min_events = 100000;
    std::array<std::uint64_t, 7> events{};
    std::array<std::uint64_t, 7> increases{};

    const auto buckets_full = [&] {
        for (int d = 2; d <= 6; ++d)
            if (events[d] < min_events) return false;
        return true;
    };

    std::uint64_t tree_index = 0;
    while (!buckets_full()) {
        NodeStore t;
        CoinSource coin(p, seed_base + tree_index);
        std::size_t rh = 0;
        std::int64_t key = 0;
        // Right height never decreases on increasing insertions, so a tree
        // stops yielding d <= 6 events once its right height reaches 7.
        while (rh < 7 && key < 1'000'000) {
            ++key;
            insert_rebalanced(t, key, Scheme::Zig, coin);
            const std::size_t after = right_height_of(t);
            if (rh >= 2 && rh <= 6) {
                ++events[rh];
                if (after == rh + 1) ++increases[rh];
            }
            rh = after;
        }
        ++tree_index;
    }

    bool ok = true;
    std::string detail = std::to_string(tree_index) + " trees; ";
    for (int d = 2; d <= 6; ++d) {
        const double q = std::pow(p, d + 1);
        const double n_events = static_cast<double>(events[d]);
        const double observed = static_cast<double>(increases[d]) / n_events;
        const double sigma = std::sqrt(q * (1 - q) / n_events);
        const bool here = std::abs(observed - q) <= 4 * sigma;
        ok = ok && here;
        detail += "d=" + std::to_string(d) + ": " + fmt(observed) + " vs " + fmt(q) + " (" +
                  fmt(std::abs(observed - q) / sigma) + " sigma); ";
    }
    r.pass = ok;
    r.detail = detail;
    return r;
}

inline CriterionResult criterion_converging_insertion_depth(std::uint64_t seed_base) {
    using namespace acceptance_detail;
    CriterionResult r{7, "zig on converging keys: final insertion-point depth >= p(1-p)/2 * n",
                      true, false, "", 0};
    constexpr std::size_t n = 1024;
    constexpr double p = 0.5;
    constexpr std::size_t trials = 25;
    std::vector<double> depths(trials);
    for_each_trial(trials, [&](std::size_t t) {
        const DepthStats s = run_single(Scheme::Zig, SequenceKind::Converging, n, p,
                                        coin_seed_for(seed_base, t), 0);
        depths[t] = static_cast<double>(*s.insertion_point_depth);
    });
    const Aggregate a = aggregate(depths);
    const double bound = p * (1 - p) / 2 * static_cast<double>(n);  // = 128
    r.pass = a.mean >= bound - 3 * a.std_err;
    r.detail = "mean " + fmt(a.mean) + " vs bound " + fmt(bound) + " - 3*" + fmt(a.std_err);
    return r;
}

inline CriterionResult criterion_logarithmic_growth(std::uint64_t seed_base) {
    using namespace acceptance_detail;
    CriterionResult r{8, "zig/zigzag on increasing keys: avg depth grows <= 4 per doubling", true,
                      false, "", 0};
    constexpr double p = 0.5;
    constexpr std::size_t trials = 25;
    bool ok = true;
    std::string detail;
    for (const Scheme scheme : {Scheme::Zig, Scheme::ZigZag}) {
        std::map<std::size_t, double> mean_at;
        for (std::size_t n = 512; n <= 16384; n *= 2) {
            std::vector<double> avg(trials);
            for_each_trial(trials, [&](std::size_t t) {
                avg[t] = run_single(scheme, SequenceKind::Increasing, n, p,
                                    coin_seed_for(seed_base, t), 0)
                             .avg_depth;
            });
            mean_at[n] = aggregate(avg).mean;
        }
        double worst = 0.0;
        for (std::size_t n = 512; n <= 8192; n *= 2)
            worst = std::max(worst, mean_at[2 * n] - mean_at[n]);
        ok = ok && worst <= 4.0;
        detail += std::string(scheme_name(scheme)) + ": max increment " + fmt(worst) + "; ";
    }
    r.pass = ok;
    r.detail = detail + "(tolerance 4)";
    return r;
}

inline CriterionResult criterion_pairs_linear_growth(std::uint64_t seed_base) {
    using namespace acceptance_detail;
    CriterionResult r{9, "zigzag on pairs: avg depth / n is scale-invariant (linear growth)",
                      true, false, "", 0};
    constexpr std::size_t trials = 25;
    bool ok = true;
    std::string detail;
    for (const double p : {0.25, 0.5, 0.75}) {
        std::array<double, 2> per_n{};
        const std::size_t ns[2] = {2048, 8192};
        for (int i = 0; i < 2; ++i) {
            std::vector<double> avg(trials);
            const std::size_t n = ns[i];
            for_each_trial(trials, [&](std::size_t t) {
                avg[t] = run_single(Scheme::ZigZag, SequenceKind::Pairs, n, p,
                                    coin_seed_for(seed_base, t), 0)
                             .avg_depth;
            });
            per_n[i] = aggregate(avg).mean / static_cast<double>(n);
        }
        const double ratio = per_n[1] / per_n[0];
        const bool here = std::abs(ratio - 1.0) <= 0.3;
        ok = ok && here;
        detail += "p=" + fmt(p) + ": ratio " + fmt(ratio) + "; ";
    }
    r.pass = ok;
    r.detail = detail + "(tolerance +-30%)";
    return r;
}

inline CriterionResult criterion_pairs_asymmetry(std::uint64_t seed_base) {
    using namespace acceptance_detail;
    CriterionResult r{10, "zig on pairs: linear right path at p=1/4, linear left path at p=3/4",
                      true, false, "", 0};
    constexpr std::size_t n = 4096;
    constexpr std::size_t trials = 25;
    const auto heights = [&](double p) {
        std::vector<double> rh(trials), lh(trials);
        for_each_trial(trials, [&](std::size_t t) {
            const DepthStats s = run_single(Scheme::Zig, SequenceKind::Pairs, n, p,
                                            coin_seed_for(seed_base, t), 0);
            rh[t] = static_cast<double>(s.right_height);
            lh[t] = static_cast<double>(s.left_height);
        });
        return std::pair{aggregate(rh).mean, aggregate(lh).mean};
    };
    const auto [rh_low, lh_low] = heights(0.25);
    const auto [rh_high, lh_high] = heights(0.75);
    const double dn = static_cast<double>(n);
    const bool low_ok = rh_low / dn >= 0.05;
    const bool high_ok = lh_high / dn >= 0.05 && rh_high <= 30.0;
    r.pass = low_ok && high_ok;
    r.detail = "p=1/4: right/n " + fmt(rh_low / dn) + " (left " + fmt(lh_low) + "); p=3/4: left/n " +
               fmt(lh_high / dn) + ", right " + fmt(rh_high);
    return r;
}

inline CriterionResult criterion_reflected_walk(std::uint64_t seed_base,
                                                double* exponent_out = nullptr) {
    using namespace acceptance_detail;
    CriterionResult r{11, "reflected walk: sqrt(n) exponent, drift lower bound, stationary bound",
                      true, false, "", 0};
    constexpr std::size_t n = 1'000'000;
    constexpr std::size_t counters = 1000;

    const double exponent =
        estimate_exponent(ProcessParams{0.5, 0.0, 0.5}, n, counters, seed_base);
    if (exponent_out != nullptr) *exponent_out = exponent;
    const bool a_ok = exponent >= 0.45 && exponent <= 0.55;

    const EnsembleStats drift = run_ensemble(ProcessParams{0.3, 0.0, 0.7}, n, counters, seed_base);
    const double rate = drift.mean_final_y / static_cast<double>(n);
    const double rate_se = drift.std_err / static_cast<double>(n);
    const bool b_ok = std::abs(rate - 0.4) <= 3 * rate_se;

    const EnsembleStats low = run_ensemble(ProcessParams{0.75, 0.0, 0.25}, n, counters, seed_base);
    const double bound = negative_drift_mean_bound(ProcessParams{0.75, 0.0, 0.25});  // = 0.75
    const bool c_ok = low.mean_final_y <= bound + 3 * low.std_err;

    r.pass = a_ok && b_ok && c_ok;
    r.detail = "exponent " + fmt(exponent) + " in [0.45,0.55]: " + (a_ok ? "yes" : "no") +
               "; mean/n " + fmt(rate) + " vs 0.4: " + (b_ok ? "yes" : "no") + "; mean " +
               fmt(low.mean_final_y) + " <= " + fmt(bound) + "+3se: " + (c_ok ? "yes" : "no");
    return r;
}

inline CriterionResult criterion_oracle_simulation_equivalence(std::uint64_t seed_base) {
    using namespace acceptance_detail;
    CriterionResult r{12, "shape frequencies over 1e5 trials match the exact distribution (n=5)",
                      true, false, "", 0};
    constexpr std::size_t n = 5;
    constexpr std::size_t trials = 100000;
    // n = 5 is odd, so of the seven families only these three are defined.
    const SequenceKind kinds[] = {SequenceKind::Increasing, SequenceKind::Decreasing,
                                  SequenceKind::Permutation};
    const Rational ps[] = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
    double worst_sigma = 0.0;
    std::size_t combos = 0;
    for (const Scheme scheme : all_schemes) {
        for (const SequenceKind kind : kinds) {
            const auto seq = generate(kind, n, mix_seed(seed_base + 5));
            for (const Rational& p : ps) {
                const RationalDistribution dist = enumerate_distribution(seq, scheme, p);
                const double pd = to_double(p);
                std::map<std::string, std::uint64_t> freq;
                for (std::size_t t = 0; t < trials; ++t)
                    ++freq[build_tree(scheme, seq, pd, seed_base + t).canonical_shape()];
                for (const auto& [shape, count] : freq) {
                    if (dist.entries.find(shape) == dist.entries.end()) {
                        r.detail = "observed shape absent from the exact distribution (" +
                                   std::string(scheme_name(scheme)) + ", " +
                                   std::string(sequence_name(kind)) + ")";
                        return r;
                    }
                }
                for (const auto& [shape, prob] : dist.entries) {
                    const double q = to_double(prob);
                    const double observed =
                        static_cast<double>(freq.count(shape) ? freq.at(shape) : 0) /
                        static_cast<double>(trials);
                    const double sigma = std::sqrt(q * (1 - q) / static_cast<double>(trials));
                    if (sigma == 0.0) continue;  // q == 1: exact match enforced above
                    const double dev = std::abs(observed - q) / sigma;
                    worst_sigma = std::max(worst_sigma, dev);
                    if (dev > 4.0) {
                        r.detail = std::string(scheme_name(scheme)) + "/" +
                                   std::string(sequence_name(kind)) + "/p=" + fmt(pd) + " shape " +
                                   shape + ": " + fmt(dev) + " sigma";
                        return r;
                    }
                }
                ++combos;
            }
        }
    }
    r.pass = true;
    r.detail = std::to_string(combos) + " (scheme, sequence, p) combos, worst deviation " +
               fmt(worst_sigma) + " sigma";
    return r;
}

inline CriterionResult criterion_pairs_halfp_exponent_report(std::uint64_t seed_base,
                                                             double process_exponent) {
    using namespace acceptance_detail;
    CriterionResult r{13, "report: zig-on-pairs depth exponent at p=1/2 vs walk exponent", false,
                      true, "", 0};
    constexpr std::size_t trials = 25;
    std::string detail;
    for (const std::size_t n : {1024UL, 4096UL, 16384UL, 65536UL}) {
        std::vector<double> avg(trials);
        for_each_trial(trials, [&](std::size_t t) {
            avg[t] = run_single(Scheme::Zig, SequenceKind::Pairs, n, 0.5,
                                coin_seed_for(seed_base, t), 0)
                         .avg_depth;
        });
        const double mean = aggregate(avg).mean;
        detail += "n=" + std::to_string(n) + ": " +
                  fmt(std::log2(mean) / std::log2(static_cast<double>(n))) + "; ";
    }
    detail += "reflected-walk exponent " + fmt(process_exponent) + " (no pass/fail)";
    r.detail = detail;
    return r;
}

/// Runs all criteria with fixed default seeds. Every gating criterion must
/// pass on a fresh checkout.
inline std::vector<CriterionResult> run_acceptance(std::uint64_t seed_base = 1) {
    std::vector<CriterionResult> results;
    double walk_exponent = 0.0;
    const auto timed = [&](auto&& fn) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult res = fn();
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(res));
    };
    timed([&] { return criterion_fig4_exactness(); });
    timed([&] { return criterion_degenerate_determinism(seed_base); });
    timed([&] { return criterion_pairs_p0_shapes(seed_base); });
    timed([&] { return criterion_pair_height_identity(); });
    timed([&] { return criterion_rotation_distance_bounds(seed_base); });
    timed([&] { return criterion_height_increase_rate(seed_base); });
    timed([&] { return criterion_converging_insertion_depth(seed_base); });
    timed([&] { return criterion_logarithmic_growth(seed_base); });
    timed([&] { return criterion_pairs_linear_growth(seed_base); });
    timed([&] { return criterion_pairs_asymmetry(seed_base); });
    timed([&] { return criterion_reflected_walk(seed_base, &walk_exponent); });
    timed([&] { return criterion_oracle_simulation_equivalence(seed_base); });
    timed([&] { return criterion_pairs_halfp_exponent_report(seed_base, walk_exponent); });
    return results;
}

}  // namespace bstlab
