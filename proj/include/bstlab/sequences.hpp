#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bstlab/coin.hpp"

namespace bstlab {

// The structured insertion families, plus uniform random permutations.
// Every generator output is a permutation of 1..n.
enum class SequenceKind { Permutation, Increasing, Decreasing, Converging, Pairs, Bitonic, Runs };

inline constexpr SequenceKind all_sequence_kinds[] = {
    SequenceKind::Permutation, SequenceKind::Increasing, SequenceKind::Decreasing,
    SequenceKind::Converging,  SequenceKind::Pairs,      SequenceKind::Bitonic,
    SequenceKind::Runs};

constexpr std::string_view sequence_name(SequenceKind k) {
    switch (k) {
        case SequenceKind::Permutation: return "permutation";
        case SequenceKind::Increasing: return "increasing";
        case SequenceKind::Decreasing: return "decreasing";
        case SequenceKind::Converging: return "converging";
        case SequenceKind::Pairs: return "pairs";
        case SequenceKind::Bitonic: return "bitonic";
        case SequenceKind::Runs: return "runs";
    }
    return "?";
}

constexpr std::optional<SequenceKind> parse_sequence_kind(std::string_view name) {
    for (const SequenceKind k : all_sequence_kinds)
        if (name == sequence_name(k)) return k;
    return std::nullopt;
}

// Converging, pairs, bitonic and runs interleave the two halves of 1..n
// and are only defined for even lengths.
constexpr bool requires_even_length(SequenceKind k) {
    return k == SequenceKind::Converging || k == SequenceKind::Pairs ||
           k == SequenceKind::Bitonic || k == SequenceKind::Runs;
}

class SequenceError : public std::invalid_argument {
public:
    explicit SequenceError(const std::string& what) : std::invalid_argument(what) {}
};

/// Generates the insertion sequence of the given kind and length. Pure in
/// (kind, n, seed); `seed` only matters for Permutation, which draws a
/// uniform permutation by Fisher–Yates on a seeded generator.
inline std::vector<std::int64_t> generate(SequenceKind kind, std::size_t n,
                                          std::uint64_t seed = 0) {
    if (n == 0) throw SequenceError("sequence length must be positive");
    if (requires_even_length(kind) && n % 2 != 0)
        throw SequenceError(std::string(sequence_name(kind)) +
                            " sequences require an even length, got " + std::to_string(n));

    std::vector<std::int64_t> out;
    out.reserve(n);
    const auto N = static_cast<std::int64_t>(n);
    switch (kind) {
        case SequenceKind::Permutation: {
            for (std::int64_t k = 1; k <= N; ++k) out.push_back(k);
            std::mt19937_64 rng(seed);
            for (std::size_t i = n - 1; i > 0; --i) {
                const auto j = static_cast<std::size_t>(uniform_below(rng, i + 1));
                std::swap(out[i], out[j]);
            }
            break;
        }
        case SequenceKind::Increasing:
            for (std::int64_t k = 1; k <= N; ++k) out.push_back(k);
            break;
        case SequenceKind::Decreasing:
            for (std::int64_t k = N; k >= 1; --k) out.push_back(k);
            break;
        case SequenceKind::Converging:
            // 1, n, 2, n-1, ..., n/2, n/2+1
            for (std::int64_t k = 1; k <= N / 2; ++k) {
                out.push_back(k);
                out.push_back(N + 1 - k);
            }
            break;
        case SequenceKind::Pairs:
            // 2, 1, 4, 3, ..., n, n-1
            for (std::int64_t k = 2; k <= N; k += 2) {
                out.push_back(k);
                out.push_back(k - 1);
            }
            break;
        case SequenceKind::Bitonic:
            // evens ascending, then odds descending
            for (std::int64_t k = 2; k <= N; k += 2) out.push_back(k);
            for (std::int64_t k = N - 1; k >= 1; k -= 2) out.push_back(k);
            break;
        case SequenceKind::Runs:
            // evens ascending, then odds ascending
            for (std::int64_t k = 2; k <= N; k += 2) out.push_back(k);
            for (std::int64_t k = 1; k <= N - 1; k += 2) out.push_back(k);
            break;
    }
    return out;
}

/// True iff each element (from the second on) becomes the immediate
/// predecessor or successor, among the elements inserted so far, of the
/// previously inserted element. Throws SequenceError if `seq` is not a
/// permutation of 1..n.
inline bool is_finger_sequence(std::span<const std::int64_t> seq) {
    const std::size_t n = seq.size();
    std::vector<bool> present(n, false);
    for (const std::int64_t k : seq) {
        if (k < 1 || k > static_cast<std::int64_t>(n) || present[static_cast<std::size_t>(k - 1)])
            throw SequenceError("input is not a permutation of 1..n");
        present[static_cast<std::size_t>(k - 1)] = true;
    }

    std::set<std::int64_t> inserted;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t cur = seq[i];
        if (i > 0) {
            const std::int64_t prev = seq[i - 1];
            // cur must be adjacent to prev relative to the inserted set:
            // no already-inserted element lies strictly between them.
            if (cur > prev) {
                const auto it = inserted.upper_bound(prev);
                if (it != inserted.end() && *it < cur) return false;
            } else {
                const auto it = inserted.upper_bound(cur);
                if (it == inserted.end() || *it != prev) return false;
            }
        }
        inserted.insert(cur);
    }
    return true;
}

}  // namespace bstlab
