#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "bstlab/coin.hpp"
#include "bstlab/tree.hpp"

namespace bstlab {

// The bottom-up rebalancing schemes. All three share the same upward coin
// walk from the freshly inserted leaf and differ only in what they rotate
// at the stop node:
//   Zig    — rotate the stop node up once (no-op at the root).
//   ZigZag — splay-style: same-side (zig-zig/zag-zag) stop rotates the
//            parent up once, direction-change (zig-zag/zag-zig) rotates the
//            stop node up twice. Requires a grandparent, else no-op.
//   ZigZig — like ZigZag, but the same-side case rotates parent then node
//            (two rotations). Direction-change case identical to ZigZag.
//   None   — unbalanced baseline, no walk and no rotations.
enum class Scheme { None, Zig, ZigZag, ZigZig };

inline constexpr Scheme all_schemes[] = {Scheme::None, Scheme::Zig, Scheme::ZigZag,
                                         Scheme::ZigZig};

constexpr std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::None: return "none";
        case Scheme::Zig: return "zig";
        case Scheme::ZigZag: return "zigzag";
        case Scheme::ZigZig: return "zigzig";
    }
    return "?";
}

constexpr std::optional<Scheme> parse_scheme(std::string_view name) {
    for (const Scheme s : all_schemes)
        if (name == scheme_name(s)) return s;
    return std::nullopt;
}

struct RebalanceOutcome {
    int rotations_performed = 0;          // at most 2; at most 1 for Zig
    std::size_t stop_depth = 0;           // depth of the walk's stop node, pre-rotation
    std::uint64_t flips = 0;              // coin draws made by this walk
    bool reached_root = false;            // walk ran out of parents (no head seen)

    // Parent steps taken by the walk (distance from the inserted leaf to
    // the stop node).
    std::uint64_t walk_distance() const {
        if (reached_root) return flips;
        return flips == 0 ? 0 : flips - 1;
    }
};

// The shared upward walk: while v has a parent and the coin shows tail,
// move to the parent. A head stops the walk at a non-root node; running
// out of parents stops it at the root without a final flip.
inline NodeId coin_walk(const NodeStore& t, NodeId v, CoinSource& coin, std::uint64_t& flips) {
    while (t.parent(v) != null_node) {
        ++flips;
        if (!coin.tail()) break;
        v = t.parent(v);
    }
    return v;
}

// Rotation rules, applied at the walk's stop node. These are shared
// between the coin-driven schemes and the exact branch enumerator, so a
// rule change propagates to both consistently. Each returns the number of
// rotations performed.

inline int apply_zig(NodeStore& t, NodeId stop) {
    if (t.parent(stop) == null_node) return 0;
    t.rotate_up(stop);
    return 1;
}

inline int apply_zigzag(NodeStore& t, NodeId stop) {
    const NodeId p = t.parent(stop);
    if (p == null_node) return 0;
    const NodeId g = t.parent(p);
    if (g == null_node) return 0;
    const bool same_side = (t.left(p) == stop) == (t.left(g) == p);
    if (same_side) {
        t.rotate_up(p);
        return 1;
    }
    t.rotate_up(stop);
    t.rotate_up(stop);
    return 2;
}

inline int apply_zigzig(NodeStore& t, NodeId stop) {
    const NodeId p = t.parent(stop);
    if (p == null_node) return 0;
    const NodeId g = t.parent(p);
    if (g == null_node) return 0;
    const bool same_side = (t.left(p) == stop) == (t.left(g) == p);
    if (same_side) {
        t.rotate_up(p);
        t.rotate_up(stop);
        return 2;
    }
    t.rotate_up(stop);
    t.rotate_up(stop);
    return 2;
}

inline int apply_scheme(NodeStore& t, Scheme scheme, NodeId stop) {
    switch (scheme) {
        case Scheme::None: return 0;
        case Scheme::Zig: return apply_zig(t, stop);
        case Scheme::ZigZag: return apply_zigzag(t, stop);
        case Scheme::ZigZig: return apply_zigzig(t, stop);
    }
    return 0;
}

namespace detail {
inline RebalanceOutcome rebalance_with(NodeStore& t, Scheme scheme, NodeId v, CoinSource& coin) {
    RebalanceOutcome out;
    const NodeId stop = coin_walk(t, v, coin, out.flips);
    out.stop_depth = t.depth(stop);
    out.reached_root = t.parent(stop) == null_node;
    out.rotations_performed = apply_scheme(t, scheme, stop);
    return out;
}
}  // namespace detail

/// Walk up from the just-inserted leaf `v` while the coin shows tail, then
/// rotate the stop node up once (stopping at the root is a legal no-op).
inline RebalanceOutcome rebalance_zig(NodeStore& t, NodeId v, CoinSource& coin) {
    return detail::rebalance_with(t, Scheme::Zig, v, coin);
}

/// Same walk; at the stop node apply the splay-inspired case split (one
/// rotation of the parent in the same-side case, a double rotation of the
/// stop node on a direction change). No grandparent, no rotation.
inline RebalanceOutcome rebalance_zigzag(NodeStore& t, NodeId v, CoinSource& coin) {
    return detail::rebalance_with(t, Scheme::ZigZag, v, coin);
}

/// Variant of the above whose same-side case performs two rotations
/// (parent up, then the stop node itself).
inline RebalanceOutcome rebalance_zigzig(NodeStore& t, NodeId v, CoinSource& coin) {
    return detail::rebalance_with(t, Scheme::ZigZig, v, coin);
}

/// Leaf insertion composed with the chosen scheme; None gives the
/// unbalanced baseline. Propagates DuplicateKeyError.
inline RebalanceOutcome insert_rebalanced(NodeStore& t, std::int64_t key, Scheme scheme,
                                          CoinSource& coin) {
    const NodeId v = t.insert_leaf(key);
    if (scheme == Scheme::None) {
        RebalanceOutcome out;
        out.stop_depth = t.depth(v);
        out.reached_root = out.stop_depth == 0;
        return out;
    }
    return detail::rebalance_with(t, scheme, v, coin);
}

}  // namespace bstlab
