#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bstlab/tree.hpp"

namespace bstlab {

// Node count per depth; index = depth.
using DepthHistogram = std::vector<std::uint64_t>;

class EmptyTreeError : public std::invalid_argument {
public:
    EmptyTreeError() : std::invalid_argument("compute_stats: tree is empty") {}
};

struct DepthStats {
    std::size_t node_count = 0;
    std::uint64_t depth_total = 0;  // exact sum of all node depths
    double avg_depth = 0.0;         // depth_total / node_count, divided once
    std::size_t height = 0;
    std::size_t right_height = 0;   // depth of the maximum-key node
    std::size_t left_height = 0;    // depth of the minimum-key node
    DepthHistogram histogram;

    // Filled by the experiment drivers, not by compute_stats: the walk
    // counters are per-run accumulations, and the insertion point is a
    // property of the evolving finger, not of a static tree.
    std::uint64_t rotations_total = 0;
    std::uint64_t flips_total = 0;
    std::optional<std::size_t> insertion_point_depth;
};

/// All depth statistics in one traversal. Throws EmptyTreeError on an
/// empty tree.
inline DepthStats compute_stats(const NodeStore& t) {
    if (t.empty()) throw EmptyTreeError();
    DepthStats s;
    s.node_count = t.size();

    struct Item {
        NodeId id;
        std::size_t depth;
    };
    std::vector<Item> stack{{t.root(), 0}};
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        if (it.depth >= s.histogram.size()) s.histogram.resize(it.depth + 1, 0);
        ++s.histogram[it.depth];
        s.depth_total += it.depth;
        if (it.depth > s.height) s.height = it.depth;
        if (t.left(it.id) != null_node) stack.push_back({t.left(it.id), it.depth + 1});
        if (t.right(it.id) != null_node) stack.push_back({t.right(it.id), it.depth + 1});
    }
    s.avg_depth = static_cast<double>(s.depth_total) / static_cast<double>(s.node_count);

    for (NodeId cur = t.root(); t.right(cur) != null_node; cur = t.right(cur)) ++s.right_height;
    for (NodeId cur = t.root(); t.left(cur) != null_node; cur = t.left(cur)) ++s.left_height;
    return s;
}

// Sum of the depths of the d internal nodes on a path to an external leaf
// of depth d: 0 + 1 + ... + (d-1). Converts insertion-point depth bounds
// into average-depth lower bounds.
constexpr std::uint64_t external_leaf_path_depth_sum(std::uint64_t d) {
    return d * (d - 1) / 2;
}

/// Adds this tree's per-depth node counts into the accumulator.
inline void depth_profile_accumulate(DepthHistogram& acc, const NodeStore& t) {
    if (t.empty()) return;
    struct Item {
        NodeId id;
        std::size_t depth;
    };
    std::vector<Item> stack{{t.root(), 0}};
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        if (it.depth >= acc.size()) acc.resize(it.depth + 1, 0);
        ++acc[it.depth];
        if (t.left(it.id) != null_node) stack.push_back({t.left(it.id), it.depth + 1});
        if (t.right(it.id) != null_node) stack.push_back({t.right(it.id), it.depth + 1});
    }
}

}  // namespace bstlab
