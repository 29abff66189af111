#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bstlab/coin.hpp"
#include "bstlab/metrics.hpp"
#include "bstlab/random_process.hpp"
#include "bstlab/rebalance.hpp"
#include "bstlab/sequences.hpp"
#include "bstlab/tree.hpp"

namespace bstlab {

// Seeded experiment sweeps over (scheme, sequence, n, p) grids, emitting
// CSV rows. Identical (config, seed_base) produce byte-identical output.

class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct ExperimentConfig {
    std::vector<Scheme> schemes{Scheme::Zig};
    std::vector<SequenceKind> sequences{all_sequence_kinds,
                                        all_sequence_kinds + std::size(all_sequence_kinds)};
    std::vector<std::size_t> lengths{1024};
    std::vector<double> tail_probs{0.5};
    std::size_t trials = 25;
    std::uint64_t seed_base = 1;

    void validate() const {
        if (schemes.empty() || sequences.empty() || lengths.empty() || tail_probs.empty())
            throw ConfigError("config lists must be non-empty");
        if (trials == 0) throw ConfigError("trials must be positive");
        for (const double p : tail_probs)
            if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0,1]");
        for (const std::size_t n : lengths) {
            if (n == 0) throw ConfigError("n must be positive");
            for (const SequenceKind k : sequences)
                if (requires_even_length(k) && n % 2 != 0)
                    throw ConfigError(std::string(sequence_name(k)) +
                                      " requires even n, got " + std::to_string(n));
        }
    }
};

struct ResultRow {
    Scheme scheme{};
    SequenceKind sequence{};
    std::size_t n = 0;
    double p = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed_base = 0;
    double avg_depth_mean = 0.0;
    double avg_depth_stderr = 0.0;
    double right_height_mean = 0.0;
    double left_height_mean = 0.0;
    double rotations_mean = 0.0;  // mean per-run rotation total
    double flips_mean = 0.0;      // mean per-run flip total
    std::optional<double> insertion_point_depth_mean;  // finger sequences only
};

struct Aggregate {
    double mean = 0.0;
    double std_err = 0.0;
};

inline Aggregate aggregate(std::span<const double> xs) {
    Aggregate a;
    if (xs.empty()) return a;
    double sum = 0.0;
    for (const double x : xs) sum += x;
    a.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (const double x : xs) ss += (x - a.mean) * (x - a.mean);
        a.std_err = std::sqrt(ss / static_cast<double>(xs.size() - 1) /
                              static_cast<double>(xs.size()));
    }
    return a;
}

// Runs body(trial) for every trial index. Trials are self-contained (own
// store, own coin), so they may execute on several threads; results must
// be written to per-trial slots to stay deterministic.
template <typename F>
void for_each_trial(std::size_t count, F&& body) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Where the next finger insertion would land after the full sequence:
// above the maximum for increasing, below the minimum for decreasing, in
// the middle gap the converging sequence closes in on.
inline std::optional<double> next_finger_query(SequenceKind kind, std::size_t n) {
    switch (kind) {
        case SequenceKind::Increasing: return static_cast<double>(n) + 0.5;
        case SequenceKind::Decreasing: return 0.5;
        case SequenceKind::Converging: return static_cast<double>(n / 2) + 0.5;
        default: return std::nullopt;
    }
}

// Trial seeds: the coin stream is seeded seed_base + trial directly; the
// permutation stream goes through the mixer so the two never share state.
inline std::uint64_t coin_seed_for(std::uint64_t seed_base, std::size_t trial) {
    return seed_base + trial;
}
inline std::uint64_t sequence_seed_for(std::uint64_t seed_base, std::size_t trial) {
    return mix_seed(seed_base + trial);
}

/// One full build: generate the sequence, insert every key under the
/// scheme, and report the tree's depth statistics together with the run's
/// rotation/flip totals and (for finger sequences) the depth of the final
/// insertion point.
inline DepthStats run_single(Scheme scheme, SequenceKind kind, std::size_t n, double p,
                             std::uint64_t coin_seed, std::uint64_t perm_seed) {
    const std::vector<std::int64_t> seq = generate(kind, n, perm_seed);
    NodeStore t(n);
    CoinSource coin(p, coin_seed);
    std::uint64_t rotations = 0;
    for (const std::int64_t key : seq)
        rotations += static_cast<std::uint64_t>(insert_rebalanced(t, key, scheme, coin).rotations_performed);
    DepthStats s = compute_stats(t);
    s.rotations_total = rotations;
    s.flips_total = coin.flips_drawn();
    if (const auto q = next_finger_query(kind, n)) s.insertion_point_depth = t.slot_depth(*q);
    return s;
}

/// Full sweep over the config grid; each cell aggregates `trials`
/// independent seeded builds. Deterministic given seed_base.
inline std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<ResultRow> rows;
    for (const Scheme scheme : cfg.schemes) {
        for (const SequenceKind kind : cfg.sequences) {
            for (const std::size_t n : cfg.lengths) {
                for (const double p : cfg.tail_probs) {
                    std::vector<DepthStats> per_trial(cfg.trials);
                    for_each_trial(cfg.trials, [&](std::size_t t) {
                        per_trial[t] = run_single(scheme, kind, n, p,
                                                  coin_seed_for(cfg.seed_base, t),
                                                  sequence_seed_for(cfg.seed_base, t));
                    });
                    std::vector<double> avg, rh, lh, rot, flip, slot;
                    for (const DepthStats& s : per_trial) {
                        avg.push_back(s.avg_depth);
                        rh.push_back(static_cast<double>(s.right_height));
                        lh.push_back(static_cast<double>(s.left_height));
                        rot.push_back(static_cast<double>(s.rotations_total));
                        flip.push_back(static_cast<double>(s.flips_total));
                        if (s.insertion_point_depth)
                            slot.push_back(static_cast<double>(*s.insertion_point_depth));
                    }
                    ResultRow row;
                    row.scheme = scheme;
                    row.sequence = kind;
                    row.n = n;
                    row.p = p;
                    row.trials = cfg.trials;
                    row.seed_base = cfg.seed_base;
                    const Aggregate a = aggregate(avg);
                    row.avg_depth_mean = a.mean;
                    row.avg_depth_stderr = a.std_err;
                    row.right_height_mean = aggregate(rh).mean;
                    row.left_height_mean = aggregate(lh).mean;
                    row.rotations_mean = aggregate(rot).mean;
                    row.flips_mean = aggregate(flip).mean;
                    if (!slot.empty()) row.insertion_point_depth_mean = aggregate(slot).mean;
                    rows.push_back(row);
                }
            }
        }
    }
    return rows;
}

/// Summed per-depth node counts over `trees` independent builds.
inline DepthHistogram run_profile(Scheme scheme, SequenceKind kind, std::size_t n, double p,
                                  std::size_t trees, std::uint64_t seed_base) {
    if (n == 0 || trees == 0) throw ConfigError("profile: n and trees must be positive");
    if (requires_even_length(kind) && n % 2 != 0)
        throw ConfigError(std::string(sequence_name(kind)) + " requires even n");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0,1]");
    DepthHistogram acc;
    for (std::size_t t = 0; t < trees; ++t) {
        const std::vector<std::int64_t> seq =
            generate(kind, n, sequence_seed_for(seed_base, t));
        NodeStore tree(n);
        CoinSource coin(p, coin_seed_for(seed_base, t));
        for (const std::int64_t key : seq) insert_rebalanced(tree, key, scheme, coin);
        depth_profile_accumulate(acc, tree);
    }
    return acc;
}

struct ProcessRow {
    double p_plus = 0.0;
    double p_minus = 0.0;
    double p_zero = 0.0;
    std::size_t n = 0;
    std::size_t trials = 0;
    double mean_final_y = 0.0;
    double std_err = 0.0;
    double exponent = 0.0;
};

/// Reflected-walk ensemble per p_plus value, with p_minus = 1 - p_plus and
/// p_zero = 0.
inline std::vector<ProcessRow> run_process_figure(std::span<const double> p_plus_values,
                                                  std::size_t n, std::size_t counters,
                                                  std::uint64_t seed_base) {
    if (n < 2 || counters == 0) throw ConfigError("process: need n >= 2 and counters >= 1");
    std::vector<ProcessRow> rows;
    for (const double pp : p_plus_values) {
        if (!(pp >= 0.0 && pp <= 1.0)) throw ConfigError("p_plus must lie in [0,1]");
        const ProcessParams params{1.0 - pp, 0.0, pp};
        std::vector<double> finals(counters);
        for_each_trial(counters, [&](std::size_t t) {
            finals[t] = static_cast<double>(simulate(params, n, seed_base + t).final_y);
        });
        const Aggregate a = aggregate(finals);
        ProcessRow row;
        row.p_plus = pp;
        row.p_minus = 1.0 - pp;
        row.p_zero = 0.0;
        row.n = n;
        row.trials = counters;
        row.mean_final_y = a.mean;
        row.std_err = a.std_err;
        row.exponent = a.mean > 0.0 ? std::log2(a.mean) / std::log2(static_cast<double>(n))
                                    : -std::numeric_limits<double>::infinity();
        rows.push_back(row);
    }
    return rows;
}

struct PairsStudyRow {
    double p = 0.0;
    std::size_t n = 0;
    std::size_t trials = 0;
    double avg_depth_mean = 0.0;
    double avg_depth_stderr = 0.0;
    double left_height_mean = 0.0;
    double right_height_mean = 0.0;
    double depth_exponent = 0.0;  // lg(avg_depth_mean) / lg(n)
};

/// The single-rotation scheme on pairs sequences for p in {1/4, 1/2, 3/4}:
/// average depth, left and right heights, and the depth-growth exponent.
inline std::vector<PairsStudyRow> run_zig_pairs_study(std::span<const std::size_t> lengths,
                                                      std::size_t trials,
                                                      std::uint64_t seed_base) {
    if (trials == 0) throw ConfigError("pairs-study: trials must be positive");
    static constexpr double study_ps[] = {0.25, 0.5, 0.75};
    std::vector<PairsStudyRow> rows;
    for (const double p : study_ps) {
        for (const std::size_t n : lengths) {
            if (n == 0 || n % 2 != 0) throw ConfigError("pairs-study: n must be even");
            std::vector<DepthStats> per_trial(trials);
            for_each_trial(trials, [&](std::size_t t) {
                per_trial[t] = run_single(Scheme::Zig, SequenceKind::Pairs, n, p,
                                          coin_seed_for(seed_base, t),
                                          sequence_seed_for(seed_base, t));
            });
            std::vector<double> avg, lh, rh;
            for (const DepthStats& s : per_trial) {
                avg.push_back(s.avg_depth);
                lh.push_back(static_cast<double>(s.left_height));
                rh.push_back(static_cast<double>(s.right_height));
            }
            PairsStudyRow row;
            row.p = p;
            row.n = n;
            row.trials = trials;
            const Aggregate a = aggregate(avg);
            row.avg_depth_mean = a.mean;
            row.avg_depth_stderr = a.std_err;
            row.left_height_mean = aggregate(lh).mean;
            row.right_height_mean = aggregate(rh).mean;
            row.depth_exponent = a.mean > 0.0
                                     ? std::log2(a.mean) / std::log2(static_cast<double>(n))
                                     : -std::numeric_limits<double>::infinity();
            rows.push_back(row);
        }
    }
    return rows;
}

// --------------------------------------------------------------------------
// CSV serialization. Column orders are fixed, the header row is mandatory,
// lines end with LF.

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string to_csv(std::span<const ResultRow> rows) {
    std::string out =
        "scheme,sequence,n,p,trials,seed_base,avg_depth_mean,avg_depth_stderr,"
        "right_height_mean,left_height_mean,rotations_mean,flips_mean,"
        "insertion_point_depth_mean\n";
    for (const ResultRow& r : rows) {
        out += std::string(scheme_name(r.scheme)) + ',' + std::string(sequence_name(r.sequence)) +
               ',' + std::to_string(r.n) + ',' + fmt_double(r.p) + ',' + std::to_string(r.trials) +
               ',' + std::to_string(r.seed_base) + ',' + fmt_double(r.avg_depth_mean) + ',' +
               fmt_double(r.avg_depth_stderr) + ',' + fmt_double(r.right_height_mean) + ',' +
               fmt_double(r.left_height_mean) + ',' + fmt_double(r.rotations_mean) + ',' +
               fmt_double(r.flips_mean) + ',';
        if (r.insertion_point_depth_mean) out += fmt_double(*r.insertion_point_depth_mean);
        out += '\n';
    }
    return out;
}

inline std::string to_csv(const DepthHistogram& histogram) {
    std::string out = "depth,count\n";
    for (std::size_t d = 0; d < histogram.size(); ++d)
        out += std::to_string(d) + ',' + std::to_string(histogram[d]) + '\n';
    return out;
}

inline std::string to_csv(std::span<const ProcessRow> rows) {
    std::string out = "p_plus,p_minus,p_zero,n,trials,mean_final_y,std_err,exponent\n";
    for (const ProcessRow& r : rows) {
        out += fmt_double(r.p_plus) + ',' + fmt_double(r.p_minus) + ',' + fmt_double(r.p_zero) +
               ',' + std::to_string(r.n) + ',' + std::to_string(r.trials) + ',' +
               fmt_double(r.mean_final_y) + ',' + fmt_double(r.std_err) + ',' +
               fmt_double(r.exponent) + '\n';
    }
    return out;
}

inline std::string to_csv(std::span<const PairsStudyRow> rows) {
    std::string out =
        "p,n,trials,avg_depth_mean,avg_depth_stderr,left_height_mean,right_height_mean,"
        "depth_exponent\n";
    for (const PairsStudyRow& r : rows) {
        out += fmt_double(r.p) + ',' + std::to_string(r.n) + ',' + std::to_string(r.trials) + ',' +
               fmt_double(r.avg_depth_mean) + ',' + fmt_double(r.avg_depth_stderr) + ',' +
               fmt_double(r.left_height_mean) + ',' + fmt_double(r.right_height_mean) + ',' +
               fmt_double(r.depth_exponent) + '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace bstlab
