#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "bstlab/metrics.hpp"
#include "bstlab/rebalance.hpp"
#include "bstlab/tree.hpp"

namespace bstlab {

// Exhaustive enumeration of all coin-outcome branches for a fixed insertion
// sequence and scheme, producing the exact distribution over resulting tree
// shapes. Probabilities are carried as exact rationals when the coin
// parameter is rational, else as doubles with compensated summation.

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

class BranchBudgetError : public std::runtime_error {
public:
    BranchBudgetError(double estimate, std::uint64_t budget)
        : std::runtime_error("enumeration rejected: estimated branch count " +
                             std::to_string(estimate) + " exceeds budget " +
                             std::to_string(budget)),
          estimated_branches(estimate) {}
    double estimated_branches;
};

class RationalParseError : public std::invalid_argument {
public:
    explicit RationalParseError(const std::string& text)
        : std::invalid_argument("not a rational a/b or integer: " + text) {}
};

// Parses "a/b" or a bare integer into an exact rational.
inline Rational parse_rational(std::string_view text) {
    const auto is_int = [](std::string_view s) {
        if (s.empty()) return false;
        std::size_t i = s[0] == '-' ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    const std::size_t slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!is_int(text)) throw RationalParseError(std::string(text));
        return Rational(BigInt(std::string(text)), BigInt(1));
    }
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw RationalParseError(std::string(text));
    const BigInt d{std::string(den)};
    if (d == 0) throw RationalParseError(std::string(text));
    return Rational(BigInt(std::string(num)), d);
}

template <typename P>
struct OutcomeDistribution {
    P p_tail{};
    Scheme scheme = Scheme::None;
    std::vector<std::int64_t> sequence;
    std::map<std::string, P> entries;  // canonical shape -> probability, key-sorted
};

using RationalDistribution = OutcomeDistribution<Rational>;
using FloatDistribution = OutcomeDistribution<double>;

namespace detail {

// Accumulation policies: exact addition for rationals, Kahan-compensated
// addition for doubles.
struct RationalProbPolicy {
    using Value = Rational;
    struct Acc {
        Rational sum{0};
        void add(const Rational& v) { sum += v; }
        Rational final() const { return sum; }
    };
    static bool is_zero(const Value& v) { return v.numerator() == 0; }
    static Value one() { return Rational(1); }
};

struct FloatProbPolicy {
    using Value = double;
    struct Acc {
        double sum = 0.0;
        double carry = 0.0;
        void add(double v) {
            const double y = v - carry;
            const double t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        double final() const { return sum; }
    };
    static bool is_zero(double v) { return v == 0.0; }
    static double one() { return 1.0; }
};

// Conservative upper bound on the number of branches a naive depth-first
// enumeration would visit: the i-th insertion can fan out into at most i
// outcomes (leaf depth at most i-1, plus the reach-the-root branch).
inline double estimated_branch_count(std::size_t n) {
    double est = 1.0;
    for (std::size_t i = 2; i <= n; ++i) est *= static_cast<double>(i);
    return est;
}

template <typename Policy>
OutcomeDistribution<typename Policy::Value> enumerate_impl(std::span<const std::int64_t> seq,
                                                           Scheme scheme,
                                                           const typename Policy::Value& p_tail,
                                                           std::uint64_t branch_budget) {
    using Value = typename Policy::Value;
    using Acc = typename Policy::Acc;

    const double estimate = estimated_branch_count(seq.size());
    if (estimate > static_cast<double>(branch_budget))
        throw BranchBudgetError(estimate, branch_budget);

    const Value head = Policy::one() - p_tail;

    // Level maps collapse identical shapes after each insertion, keyed by
    // the canonical encoding; probabilities merge by (commutative) sums.
    std::map<std::string, Acc> level;
    {
        Acc start;
        start.add(Policy::one());
        level.emplace(NodeStore().canonical_shape(), std::move(start));
    }

    for (const std::int64_t key : seq) {
        std::map<std::string, Acc> next;
        for (const auto& [shape, acc] : level) {
            const Value reach = acc.final();
            NodeStore base = parse_canonical_shape(shape);
            const NodeId leaf = base.insert_leaf(key);
            const std::size_t d = base.depth(leaf);

            if (scheme == Scheme::None) {
                next[base.canonical_shape()].add(reach);
                continue;
            }

            // The walk flips a coin at the nodes of depth d, d-1, ..., 1:
            // a head after k tails stops at the k-th ancestor with
            // probability (1-p)p^k, and d straight tails reach the root
            // with probability p^d.
            Value tail_pow = Policy::one();
            NodeId stop = leaf;
            for (std::size_t k = 0; k < d; ++k) {
                const Value prob = reach * tail_pow * head;
                if (!Policy::is_zero(prob)) {
                    NodeStore branch = base;  // ids are stable across the copy
                    apply_scheme(branch, scheme, stop);
                    next[branch.canonical_shape()].add(prob);
                }
                tail_pow = tail_pow * p_tail;
                stop = base.parent(stop);
            }
            const Value root_prob = reach * tail_pow;
            if (!Policy::is_zero(root_prob)) next[base.canonical_shape()].add(root_prob);
        }
        level = std::move(next);
    }

    OutcomeDistribution<Value> out;
    out.p_tail = p_tail;
    out.scheme = scheme;
    out.sequence.assign(seq.begin(), seq.end());
    for (const auto& [shape, acc] : level) out.entries.emplace(shape, acc.final());
    return out;
}

}  // namespace detail

/// Exact-rational enumeration. Rejects sequences whose worst-case branch
/// count exceeds the budget (default 10^7).
inline RationalDistribution enumerate_distribution(std::span<const std::int64_t> seq,
                                                   Scheme scheme, const Rational& p_tail,
                                                   std::uint64_t branch_budget = 10'000'000) {
    if (p_tail < Rational(0) || p_tail > Rational(1))
        throw std::invalid_argument("enumerate_distribution: p_tail must lie in [0,1]");
    return detail::enumerate_impl<detail::RationalProbPolicy>(seq, scheme, p_tail, branch_budget);
}

/// Float-mode enumeration with compensated per-shape sums.
inline FloatDistribution enumerate_distribution(std::span<const std::int64_t> seq, Scheme scheme,
                                                double p_tail,
                                                std::uint64_t branch_budget = 10'000'000) {
    if (!(p_tail >= 0.0 && p_tail <= 1.0))
        throw std::invalid_argument("enumerate_distribution: p_tail must lie in [0,1]");
    return detail::enumerate_impl<detail::FloatProbPolicy>(seq, scheme, p_tail, branch_budget);
}

enum class ShapeStat { AvgDepth, RightHeight, LeftHeight };

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }
inline double to_double(double v) { return v; }

/// Probability-weighted expectation of a per-shape statistic.
template <typename P>
double expected_stat(const OutcomeDistribution<P>& dist, ShapeStat stat) {
    double total = 0.0;
    for (const auto& [shape, prob] : dist.entries) {
        const NodeStore t = parse_canonical_shape(shape);
        const DepthStats s = compute_stats(t);
        double value = 0.0;
        switch (stat) {
            case ShapeStat::AvgDepth: value = s.avg_depth; break;
            case ShapeStat::RightHeight: value = static_cast<double>(s.right_height); break;
            case ShapeStat::LeftHeight: value = static_cast<double>(s.left_height); break;
        }
        total += to_double(prob) * value;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Pair insertions on the rightmost path: the ten-case split for the change
// in right height when a pair (2i, 2i-1) is inserted with the single-
// rotation scheme into a tree of right height d, and its reduced closed
// form. The two routes must agree; tests hold them to 1e-12.

// Per-case probabilities, in case order. The rows partition the outcome
// space, so they sum to 1 for every p and d.
inline std::array<double, 10> pair_case_probabilities(double p, int d) {
    const double q = 1.0 - p;
    const double pd = std::pow(p, d);
    const double pd1 = pd * p;   // p^(d+1)
    const double pd2 = pd1 * p;  // p^(d+2)
    return {
        pd1 * pd2,            // 1: no rotation, then no rotation
        pd1 * q,              // 2: no rotation, then the low key rotated up
        pd1 * p * (1 - pd1),  // 3: no rotation, then a rightmost-path rotation
        q * pd2,              // 4: high key rotated up, then no rotation
        q * q,                // 5: high key rotated up, then the low key rotated up
        q * p * q,            // 6: high key rotated up, then its old left child rotated back
        q * p * p * (1 - pd),     // 7: high key rotated up, then a rightmost-path rotation
        p * (1 - pd) * pd1,       // 8: ancestor rotation, then no rotation
        p * (1 - pd) * q,         // 9: ancestor rotation, then the low key rotated up
        p * (1 - pd) * p * (1 - pd),  // 10: ancestor rotations on both insertions
    };
}

// Right-height deltas for the ten cases above.
inline constexpr std::array<int, 10> pair_case_height_deltas = {+1, +2, 0, 0, 0,
                                                                +1, -1, 0, +1, -1};

struct PairHeightChange {
    double raw_sum;   // ten-case probability-weighted sum
    double reduced;   // closed form
};

/// Expected change in right height from inserting one pair, computed by
/// both routes.
inline PairHeightChange expected_pair_height_change(double p, int d) {
    const auto probs = pair_case_probabilities(p, d);
    double raw = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i)
        raw += static_cast<double>(pair_case_height_deltas[i]) * probs[i];

    const double pd1 = std::pow(p, d + 1);
    const double reduced =
        2 * p * p * p - 5 * p * p + 2 * p + pd1 * (1 + 2 * p - p * p + (p - 1) * pd1);
    return {raw, reduced};
}

}  // namespace bstlab
