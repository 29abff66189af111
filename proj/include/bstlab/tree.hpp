#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bstlab {

// Nodes live in a dense index-addressed arena. Ids are stable for the
// lifetime of the tree: rotations relink children/parents but never move
// nodes, so callers may hold on to ids across arbitrary restructuring.
using NodeId = std::uint32_t;
inline constexpr NodeId null_node = std::numeric_limits<NodeId>::max();

struct Node {
    std::int64_t key = 0;
    NodeId left = null_node;
    NodeId right = null_node;
    NodeId parent = null_node;
};

class DuplicateKeyError : public std::invalid_argument {
public:
    explicit DuplicateKeyError(std::int64_t key)
        : std::invalid_argument("duplicate key: " + std::to_string(key)) {}
};

class RootRotationError : public std::logic_error {
public:
    RootRotationError() : std::logic_error("rotate_up: node is the root") {}
};

class TreeInvariantError : public std::logic_error {
public:
    explicit TreeInvariantError(const std::string& what) : std::logic_error(what) {}
};

class ShapeParseError : public std::invalid_argument {
public:
    explicit ShapeParseError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parent-linked binary search tree over distinct integer keys.
///
/// Supports exactly the operations the rebalancing schemes need: leaf
/// insertion, the rotate-up primitive, depth queries, and a canonical
/// string encoding used to compare and count tree shapes.
class NodeStore {
public:
    NodeStore() = default;
    explicit NodeStore(std::size_t reserve_hint) { nodes_.reserve(reserve_hint); }

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    NodeId root() const { return root_; }

    const Node& node(NodeId id) const { return nodes_[id]; }
    std::int64_t key(NodeId id) const { return nodes_[id].key; }
    NodeId left(NodeId id) const { return nodes_[id].left; }
    NodeId right(NodeId id) const { return nodes_[id].right; }
    NodeId parent(NodeId id) const { return nodes_[id].parent; }

    // Direct mutable access, for tests that need to corrupt links and for
    // the canonical-shape parser. Regular callers go through insert_leaf
    // and rotate_up.
    Node& raw_node(NodeId id) { return nodes_[id]; }

    // Assembles a store from pre-linked nodes without validation.
    static NodeStore from_raw(std::vector<Node> nodes, NodeId root) {
        NodeStore s;
        s.nodes_ = std::move(nodes);
        s.root_ = root;
        return s;
    }

    /// Standard BST leaf insertion, no rebalancing. Returns the id of the
    /// new node so rebalancers can start their upward walk without a
    /// re-search. Throws DuplicateKeyError if the key is present.
    NodeId insert_leaf(std::int64_t key) {
        const NodeId id = static_cast<NodeId>(nodes_.size());
        if (root_ == null_node) {
            nodes_.push_back(Node{key, null_node, null_node, null_node});
            root_ = id;
            return id;
        }
        NodeId cur = root_;
        for (;;) {
            Node& c = nodes_[cur];
            if (key < c.key) {
                if (c.left == null_node) {
                    c.left = id;
                    break;
                }
                cur = c.left;
            } else if (key > c.key) {
                if (c.right == null_node) {
                    c.right = id;
                    break;
                }
                cur = c.right;
            } else {
                throw DuplicateKeyError(key);
            }
        }
        nodes_.push_back(Node{key, null_node, null_node, cur});
        return id;
    }

    /// Rotates `v` one level up, demoting its parent. The inner subtree of
    /// `v` changes sides but keeps its depth; BST order is preserved.
    /// Throws RootRotationError if `v` has no parent.
    void rotate_up(NodeId v) {
        const NodeId u = nodes_[v].parent;
        if (u == null_node) throw RootRotationError();
        const NodeId g = nodes_[u].parent;
        const bool v_is_left = nodes_[u].left == v;
        const NodeId inner = v_is_left ? nodes_[v].right : nodes_[v].left;

        // v takes u's place under g (or becomes the root).
        nodes_[v].parent = g;
        if (g == null_node) {
            root_ = v;
        } else if (nodes_[g].left == u) {
            nodes_[g].left = v;
        } else {
            nodes_[g].right = v;
        }

        // u descends below v; v's former inner subtree re-hangs off u.
        if (v_is_left) {
            nodes_[v].right = u;
            nodes_[u].left = inner;
        } else {
            nodes_[v].left = u;
            nodes_[u].right = inner;
        }
        nodes_[u].parent = v;
        if (inner != null_node) nodes_[inner].parent = u;
    }

    // Number of parent links followed to reach the root; the root has
    // depth zero.
    std::size_t depth(NodeId v) const {
        std::size_t d = 0;
        for (NodeId cur = nodes_[v].parent; cur != null_node; cur = nodes_[cur].parent) ++d;
        return d;
    }

    // Depth of the external slot a search for `query` falls off at (the
    // number of internal nodes on the search path). `query` must not equal
    // any stored key; half-integer queries address the gap between two
    // neighboring keys.
    std::size_t slot_depth(double query) const {
        std::size_t steps = 0;
        NodeId cur = root_;
        while (cur != null_node) {
            ++steps;
            cur = query < static_cast<double>(nodes_[cur].key) ? nodes_[cur].left : nodes_[cur].right;
        }
        return steps;
    }

    std::vector<std::int64_t> keys_in_order() const {
        std::vector<std::int64_t> out;
        out.reserve(nodes_.size());
        NodeId cur = root_;
        std::vector<NodeId> stack;
        while (cur != null_node || !stack.empty()) {
            while (cur != null_node) {
                stack.push_back(cur);
                cur = nodes_[cur].left;
            }
            cur = stack.back();
            stack.pop_back();
            out.push_back(nodes_[cur].key);
            cur = nodes_[cur].right;
        }
        return out;
    }

    /// Checks every structural invariant (single root, link symmetry,
    /// reachability, strict BST order) and throws TreeInvariantError
    /// describing the first violation.
    void validate() const {
        if (nodes_.empty()) {
            if (root_ != null_node) throw TreeInvariantError("empty store has a root id");
            return;
        }
        if (root_ == null_node || root_ >= nodes_.size())
            throw TreeInvariantError("root id out of range");
        if (nodes_[root_].parent != null_node)
            throw TreeInvariantError("root has a parent link");

        // Link symmetry plus reachability from the root.
        std::vector<bool> seen(nodes_.size(), false);
        std::vector<NodeId> stack{root_};
        std::size_t reached = 0;
        while (!stack.empty()) {
            const NodeId id = stack.back();
            stack.pop_back();
            if (id >= nodes_.size()) throw TreeInvariantError("child id out of range");
            if (seen[id]) throw TreeInvariantError("node reachable twice (cycle or shared child)");
            seen[id] = true;
            ++reached;
            const Node& n = nodes_[id];
            for (const NodeId c : {n.left, n.right}) {
                if (c == null_node) continue;
                if (c >= nodes_.size()) throw TreeInvariantError("child id out of range");
                if (nodes_[c].parent != id)
                    throw TreeInvariantError("link symmetry violated at node with key " +
                                             std::to_string(nodes_[c].key));
                stack.push_back(c);
            }
            if (n.left != null_node && n.left == n.right)
                throw TreeInvariantError("node has the same child on both sides");
        }
        if (reached != nodes_.size())
            throw TreeInvariantError("store size " + std::to_string(nodes_.size()) +
                                     " != reachable node count " + std::to_string(reached));

        // Strict BST order (also guarantees distinct keys).
        const std::vector<std::int64_t> keys = keys_in_order();
        for (std::size_t i = 1; i < keys.size(); ++i) {
            if (keys[i - 1] >= keys[i])
                throw TreeInvariantError("in-order keys not strictly increasing at " +
                                         std::to_string(keys[i]));
        }
    }

    /// Deterministic preorder encoding "(key left right)" with "·" for an
    /// absent child; equal strings iff identical keyed shapes. The empty
    /// tree encodes as "·".
    std::string canonical_shape() const {
        std::string out;
        out.reserve(nodes_.size() * 8 + 2);
        // Work stack mixes node visits with literal emissions.
        struct Tok {
            NodeId id;
            char lit;  // 0 = visit id, otherwise emit this character
        };
        std::vector<Tok> stack{{root_, 0}};
        while (!stack.empty()) {
            const Tok t = stack.back();
            stack.pop_back();
            if (t.lit != 0) {
                out.push_back(t.lit);
                continue;
            }
            if (t.id == null_node) {
                out += "\xC2\xB7";  // U+00B7 middle dot
                continue;
            }
            const Node& n = nodes_[t.id];
            out.push_back('(');
            out += std::to_string(n.key);
            out.push_back(' ');
            stack.push_back({0, ')'});
            stack.push_back({n.right, 0});
            stack.push_back({0, ' '});
            stack.push_back({n.left, 0});
        }
        return out;
    }

private:
    std::vector<Node> nodes_;
    NodeId root_ = null_node;
};

// True iff every node has at most one child (the tree is a single path).
inline bool is_path(const NodeStore& t) {
    for (NodeId id = 0; id < t.size(); ++id) {
        if (t.left(id) != null_node && t.right(id) != null_node) return false;
    }
    return true;
}

/// Inverse of NodeStore::canonical_shape. Throws ShapeParseError on
/// malformed input; the result carries consistent links by construction
/// but BST order is the caller's concern (see validate()).
inline NodeStore parse_canonical_shape(std::string_view text) {
    std::vector<Node> nodes;
    std::size_t pos = 0;
    const auto fail = [&](const char* why) {
        throw ShapeParseError(std::string("shape parse error at offset ") + std::to_string(pos) +
                              ": " + why);
    };
    const auto at_dot = [&]() {
        return pos + 1 < text.size() && static_cast<unsigned char>(text[pos]) == 0xC2 &&
               static_cast<unsigned char>(text[pos + 1]) == 0xB7;
    };

    // Frames track a node whose children are still being parsed.
    struct Frame {
        NodeId id;
        int children_done;
    };
    std::vector<Frame> stack;
    NodeId root = null_node;
    bool have_root = false;

    // Attaches a completed subtree (possibly absent) to the innermost frame.
    const auto deliver = [&](NodeId child) {
        if (stack.empty()) {
            if (have_root) fail("trailing content after complete shape");
            root = child;
            have_root = true;
            return;
        }
        Frame& f = stack.back();
        if (f.children_done == 0) {
            if (pos >= text.size() || text[pos] != ' ') fail("expected space between children");
            ++pos;
            nodes[f.id].left = child;
        } else {
            if (pos >= text.size() || text[pos] != ')') fail("expected closing parenthesis");
            ++pos;
            nodes[f.id].right = child;
        }
        if (child != null_node) nodes[child].parent = f.id;
        ++f.children_done;
    };

    while (!have_root || !stack.empty()) {
        // Pop frames whose both children are complete.
        if (!stack.empty() && stack.back().children_done == 2) {
            const NodeId done = stack.back().id;
            stack.pop_back();
            deliver(done);
            continue;
        }
        if (pos >= text.size()) fail("unexpected end of input");
        if (at_dot()) {
            pos += 2;
            deliver(null_node);
            continue;
        }
        if (text[pos] != '(') fail("expected '(' or absent-child marker");
        ++pos;
        std::size_t end = pos;
        if (end < text.size() && text[end] == '-') ++end;
        while (end < text.size() && text[end] >= '0' && text[end] <= '9') ++end;
        if (end == pos) fail("expected integer key");
        const std::int64_t key = std::stoll(std::string(text.substr(pos, end - pos)));
        pos = end;
        if (pos >= text.size() || text[pos] != ' ') fail("expected space after key");
        ++pos;
        const NodeId id = static_cast<NodeId>(nodes.size());
        nodes.push_back(Node{key, null_node, null_node, null_node});
        stack.push_back(Frame{id, 0});
    }
    if (pos != text.size()) fail("trailing content after complete shape");
    return NodeStore::from_raw(std::move(nodes), root);
}

}  // namespace bstlab
