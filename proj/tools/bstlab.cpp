// Command-line driver for the rebalancing laboratory: seeded experiment
// sweeps, depth profiles, the reflected-walk study, exact shape
// distributions, and the acceptance suite. All outputs are CSV; a small
// matplotlib script is emitted next to each CSV written with --out.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bstlab/acceptance.hpp"
#include "bstlab/exact_oracle.hpp"
#include "bstlab/experiments.hpp"

namespace {

using namespace bstlab;

std::vector<Scheme> parse_schemes(const std::vector<std::string>& names) {
    std::vector<Scheme> out;
    for (const std::string& name : names) {
        const auto s = parse_scheme(name);
        if (!s) throw CLI::ValidationError("--scheme", "unknown scheme: " + name);
        out.push_back(*s);
    }
    return out;
}

std::vector<SequenceKind> parse_sequences(const std::vector<std::string>& names) {
    std::vector<SequenceKind> out;
    for (const std::string& name : names) {
        const auto k = parse_sequence_kind(name);
        if (!k) throw CLI::ValidationError("--sequence", "unknown sequence: " + name);
        out.push_back(*k);
    }
    return out;
}

void deliver(const std::string& csv, const std::string& out_path, const std::string& plot_script) {
    if (out_path.empty()) {
        std::cout << csv;
        return;
    }
    write_text_file(out_path, csv);
    if (!plot_script.empty()) write_text_file(out_path + ".plot.py", plot_script);
    std::cerr << "wrote " << out_path << "\n";
}

std::string plot_header(const std::string& csv_path) {
    return "#!/usr/bin/env python3\n"
           "import pandas as pd\n"
           "import matplotlib\n"
           "matplotlib.use(\"Agg\")\n"
           "import matplotlib.pyplot as plt\n\n"
           "df = pd.read_csv(\"" + csv_path + "\")\n"
           "fig, ax = plt.subplots(figsize=(7, 5))\n";
}

std::string plot_footer(const std::string& csv_path) {
    return "ax.legend(fontsize=7)\n"
           "fig.savefig(\"" + csv_path + ".png\", dpi=150, bbox_inches=\"tight\")\n"
           "print(\"" + csv_path + ".png\")\n";
}

std::string sweep_plot_script(const std::string& csv_path) {
    return plot_header(csv_path) +
           "x = \"p\" if df[\"p\"].nunique() > 1 else \"n\"\n"
           "for (scheme, seq), g in df.groupby([\"scheme\", \"sequence\"]):\n"
           "    g = g.sort_values(x)\n"
           "    ax.plot(g[x], g[\"avg_depth_mean\"], marker=\"o\", label=f\"{scheme}/{seq}\")\n"
           "if x == \"n\":\n"
           "    ax.set_xscale(\"log\", base=2)\n"
           "ax.set_xlabel(x)\n"
           "ax.set_ylabel(\"average node depth\")\n" +
           plot_footer(csv_path);
}

std::string profile_plot_script(const std::string& csv_path) {
    return plot_header(csv_path) +
           "ax.plot(df[\"depth\"], df[\"count\"], label=\"nodes per depth\")\n"
           "ax.set_xlabel(\"depth\")\n"
           "ax.set_ylabel(\"node count\")\n" +
           plot_footer(csv_path);
}

std::string process_plot_script(const std::string& csv_path) {
    return plot_header(csv_path) +
           "ax.plot(df[\"p_plus\"], df[\"exponent\"], marker=\"o\", label=\"lg(mean)/lg(n)\")\n"
           "ax.set_xlabel(\"p_plus\")\n"
           "ax.set_ylabel(\"growth exponent\")\n" +
           plot_footer(csv_path);
}

std::string pairs_plot_script(const std::string& csv_path) {
    return plot_header(csv_path) +
           "for p, g in df.groupby(\"p\"):\n"
           "    g = g.sort_values(\"n\")\n"
           "    ax.plot(g[\"n\"], g[\"avg_depth_mean\"], marker=\"o\", label=f\"avg depth, p={p}\")\n"
           "    ax.plot(g[\"n\"], g[\"left_height_mean\"], ls=\"--\", label=f\"left height, p={p}\")\n"
           "    ax.plot(g[\"n\"], g[\"right_height_mean\"], ls=\":\", label=f\"right height, p={p}\")\n"
           "ax.set_xscale(\"log\", base=2)\n"
           "ax.set_yscale(\"log\", base=2)\n"
           "ax.set_xlabel(\"n\")\n" +
           plot_footer(csv_path);
}

int run_accept(std::uint64_t seed) {
    const std::vector<CriterionResult> results = run_acceptance(seed);
    bool all_pass = true;
    for (const CriterionResult& r : results) {
        const char* status = r.gating ? (r.pass ? "PASS" : "FAIL") : "INFO";
        if (r.gating && !r.pass) all_pass = false;
        std::printf("[%2d/13] %s  %s  (%.2fs)\n        %s\n", r.index, status, r.name.c_str(),
                    r.seconds, r.detail.c_str());
    }
    std::printf(all_pass ? "acceptance: all gating criteria passed\n"
                         : "acceptance: FAILURES present\n");
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bstlab -- randomized bottom-up BST rebalancing laboratory"};
    app.set_config("--config", "", "read options from an INI/TOML file (flags override)");
    app.require_subcommand(1);

    // Shared option state; each subcommand binds the flags it uses.
    std::vector<std::string> scheme_names{"zig"};
    std::vector<std::string> sequence_names{"permutation", "increasing", "decreasing",
                                            "converging",  "pairs",      "bitonic",
                                            "runs"};
    std::vector<std::size_t> lengths{1024};
    std::vector<double> tail_probs;
    std::size_t trials = 25;
    std::uint64_t seed = 1;
    std::string out_path;

    auto* sweep = app.add_subcommand("sweep", "average-depth sweep over (scheme, sequence, n, p)");
    sweep->add_option("--scheme", scheme_names, "schemes (comma list)")->delimiter(',');
    sweep->add_option("--sequence", sequence_names, "sequence kinds (comma list)")->delimiter(',');
    sweep->add_option("--n", lengths, "sequence lengths (comma list)")->delimiter(',');
    sweep->add_option("--p", tail_probs, "tail probabilities (comma list)")->delimiter(',');
    sweep->add_option("--trials", trials, "independent runs per cell");
    sweep->add_option("--seed", seed, "seed base");
    sweep->add_option("--out", out_path, "output CSV path (default: stdout)");

    std::string profile_scheme = "zig";
    std::string profile_sequence = "permutation";
    std::size_t profile_n = 1000;
    double profile_p = 0.5;
    std::size_t profile_trees = 100;
    auto* profile = app.add_subcommand("profile", "summed depth histogram over many trees");
    profile->add_option("--scheme", profile_scheme, "scheme");
    profile->add_option("--sequence", profile_sequence, "sequence kind");
    profile->add_option("--n", profile_n, "sequence length");
    profile->add_option("--p", profile_p, "tail probability");
    profile->add_option("--trees", profile_trees, "number of trees to sum");
    profile->add_option("--seed", seed, "seed base");
    profile->add_option("--out", out_path, "output CSV path (default: stdout)");

    std::vector<double> p_plus_values{0.40, 0.45, 0.48, 0.50, 0.52, 0.55, 0.60};
    std::size_t process_n = 1'000'000;
    std::size_t counters = 1000;
    auto* process = app.add_subcommand("process", "reflected random walk exponent study");
    process->add_option("--p-plus", p_plus_values, "+1 probabilities (comma list)")->delimiter(',');
    process->add_option("--n", process_n, "steps per counter");
    process->add_option("--counters", counters, "independent counters");
    process->add_option("--seed", seed, "seed base");
    process->add_option("--out", out_path, "output CSV path (default: stdout)");

    std::vector<std::size_t> pairs_lengths{16,  32,   64,   128,  256, 512,
                                           1024, 2048, 4096, 8192};
    auto* pairs_study = app.add_subcommand(
        "pairs-study", "zig on pairs sequences at p = 1/4, 1/2, 3/4: depths and heights");
    pairs_study->add_option("--n", pairs_lengths, "sequence lengths (comma list)")->delimiter(',');
    pairs_study->add_option("--trials", trials, "independent runs per cell");
    pairs_study->add_option("--seed", seed, "seed base");
    pairs_study->add_option("--out", out_path, "output CSV path (default: stdout)");

    std::string dist_scheme = "zig";
    std::string dist_sequence = "increasing";
    std::size_t dist_n = 3;
    std::string dist_p = "1/2";
    auto* distribution = app.add_subcommand(
        "distribution", "exact shape distribution by coin-branch enumeration");
    distribution->add_option("--scheme", dist_scheme, "scheme");
    distribution->add_option("--sequence", dist_sequence, "sequence kind");
    distribution->add_option("--n", dist_n, "sequence length");
    distribution->add_option("--p", dist_p,
                             "tail probability: a/b for exact rationals, decimal for floats");
    distribution->add_option("--seed", seed, "seed (permutation sequences)");
    distribution->add_option("--out", out_path, "output CSV path (default: stdout)");

    auto* accept = app.add_subcommand("accept", "run the acceptance suite");
    accept->add_option("--seed", seed, "seed base");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            ExperimentConfig cfg;
            cfg.schemes = parse_schemes(scheme_names);
            cfg.sequences = parse_sequences(sequence_names);
            cfg.lengths = lengths;
            if (tail_probs.empty())
                for (int i = 0; i <= 20; ++i) tail_probs.push_back(0.05 * i);
            cfg.tail_probs = tail_probs;
            cfg.trials = trials;
            cfg.seed_base = seed;
            const auto rows = run_sweep(cfg);
            deliver(to_csv(rows), out_path, sweep_plot_script(out_path));
        } else if (profile->parsed()) {
            const auto scheme = parse_scheme(profile_scheme);
            const auto kind = parse_sequence_kind(profile_sequence);
            if (!scheme) throw CLI::ValidationError("--scheme", "unknown scheme");
            if (!kind) throw CLI::ValidationError("--sequence", "unknown sequence");
            const auto histogram =
                run_profile(*scheme, *kind, profile_n, profile_p, profile_trees, seed);
            deliver(to_csv(histogram), out_path, profile_plot_script(out_path));
        } else if (process->parsed()) {
            const auto rows = run_process_figure(p_plus_values, process_n, counters, seed);
            deliver(to_csv(rows), out_path, process_plot_script(out_path));
        } else if (pairs_study->parsed()) {
            const auto rows = run_zig_pairs_study(pairs_lengths, trials, seed);
            deliver(to_csv(rows), out_path, pairs_plot_script(out_path));
        } else if (distribution->parsed()) {
            const auto scheme = parse_scheme(dist_scheme);
            const auto kind = parse_sequence_kind(dist_sequence);
            if (!scheme) throw CLI::ValidationError("--scheme", "unknown scheme");
            if (!kind) throw CLI::ValidationError("--sequence", "unknown sequence");
            const auto seq = generate(*kind, dist_n, seed);
            std::string csv;
            if (dist_p.find('.') == std::string::npos) {
                const auto dist = enumerate_distribution(seq, *scheme, parse_rational(dist_p));
                csv = "shape,probability_numerator,probability_denominator\n";
                for (const auto& [shape, prob] : dist.entries)
                    csv += shape + ',' + prob.numerator().str() + ',' + prob.denominator().str() +
                           '\n';
            } else {
                const auto dist = enumerate_distribution(seq, *scheme, std::stod(dist_p));
                csv = "shape,probability\n";
                for (const auto& [shape, prob] : dist.entries)
                    csv += shape + ',' + fmt_double(prob) + '\n';
            }
            deliver(csv, out_path, "");
        } else if (accept->parsed()) {
            return run_accept(seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
