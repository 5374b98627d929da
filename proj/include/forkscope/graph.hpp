#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "forkscope/artifact_id.hpp"

namespace forkscope {

using NodeIndex = std::uint32_t;

/// Node kinds of the flattened history graph. The numeric order is also the
/// order in which kinds are laid out in a HistoryGraph.
enum class NodeKind : std::uint8_t { Origin = 0, Revision = 1, RootDirectory = 2 };

const char* to_string(NodeKind kind);

/// Set of node kinds, used as a traversal output filter.
class KindMask {
  public:
    constexpr KindMask() = default;
    constexpr KindMask(NodeKind kind) : bits_(bit(kind)) {}

    static constexpr KindMask all() { return KindMask(0b111); }

    constexpr bool contains(NodeKind kind) const { return (bits_ & bit(kind)) != 0; }
    friend constexpr KindMask operator|(KindMask a, KindMask b) {
        return KindMask(static_cast<std::uint8_t>(a.bits_ | b.bits_));
    }

  private:
    constexpr explicit KindMask(std::uint8_t bits) : bits_(bits) {}
    static constexpr std::uint8_t bit(NodeKind k) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k));
    }
    std::uint8_t bits_ = 0;
};

enum class Direction { Forward, Transposed };

/// Immutable, deduplicated development-history DAG over origins, revisions
/// and root directories.
///
/// Nodes are densely indexed by kind: origins occupy [0, origin_count()) in
/// id order, revisions follow, and root directories come last. Origin node
/// index doubles as the origin ordinal used by the forge-fork graph and by
/// every cluster type. Revisions are numbered in depth-first order along
/// parent edges from the origins and root directories by first use, so a
/// walk down a history touches memory mostly sequentially. The numbering
/// depends only on the graph contents, never on input order.
///
/// Forward edges: origin -> head revisions, revision -> parent revisions,
/// revision -> its single root directory. The transposed adjacency is the
/// exact reversal. Neighbor lists are sorted by node index.
class HistoryGraph {
  public:
    HistoryGraph() = default;

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return forward_targets_.size(); }
    std::size_t origin_count() const { return revisions_begin_; }
    std::size_t revision_count() const { return rootdirs_begin_ - revisions_begin_; }
    std::size_t rootdir_count() const { return ids_.size() - rootdirs_begin_; }

    NodeKind kind(NodeIndex n) const {
        if (n < revisions_begin_) return NodeKind::Origin;
        if (n < rootdirs_begin_) return NodeKind::Revision;
        return NodeKind::RootDirectory;
    }
    const ArtifactId& id(NodeIndex n) const { return ids_[n]; }

    bool valid(NodeIndex n) const { return n < ids_.size(); }

    std::span<const NodeIndex> successors(NodeIndex n) const {
        return {forward_targets_.data() + forward_offsets_[n],
                forward_targets_.data() + forward_offsets_[n + 1]};
    }
    std::span<const NodeIndex> predecessors(NodeIndex n) const {
        return {transposed_targets_.data() + transposed_offsets_[n],
                transposed_targets_.data() + transposed_offsets_[n + 1]};
    }
    std::span<const NodeIndex> neighbors(NodeIndex n, Direction d) const {
        return d == Direction::Forward ? successors(n) : predecessors(n);
    }

    /// Parent revisions of a revision (its successors minus the root directory).
    std::span<const NodeIndex> parent_revisions(NodeIndex revision) const;
    /// The single root directory of a revision.
    NodeIndex root_directory(NodeIndex revision) const;

    /// Index range of all nodes of one kind.
    std::pair<NodeIndex, NodeIndex> kind_range(NodeKind kind) const;

    /// Lookup by kind and id; nullopt when absent.
    std::optional<NodeIndex> find(NodeKind kind, const ArtifactId& id) const;
    /// Lookup an origin by id; nullopt when absent.
    std::optional<NodeIndex> find_origin(const ArtifactId& id) const {
        return find(NodeKind::Origin, id);
    }

  private:
    friend class GraphBuilder;

    void relabel_for_locality();

    std::vector<ArtifactId> ids_;
    /// Node indices sorted by (kind, id), for lookups.
    std::vector<NodeIndex> by_id_;
    NodeIndex revisions_begin_ = 0;
    NodeIndex rootdirs_begin_ = 0;
    std::vector<std::uint64_t> forward_offsets_{0};
    std::vector<NodeIndex> forward_targets_;
    std::vector<std::uint64_t> transposed_offsets_{0};
    std::vector<NodeIndex> transposed_targets_;
};

/// Accumulates nodes and edges and produces a validated HistoryGraph.
///
/// Nodes are referred to by the handle returned from add_node, which avoids
/// id lookups while streaming large inputs. Adding the same (kind, id) twice
/// returns distinct handles that collapse into one node at build time;
/// duplicate edges collapse likewise.
class GraphBuilder {
  public:
    using Handle = std::uint32_t;

    void reserve(std::size_t nodes, std::size_t edges);

    Handle add_node(const ArtifactId& id, NodeKind kind);
    void add_edge(Handle from, Handle to);

    std::size_t pending_nodes() const { return nodes_.size(); }

    /// Throws GraphError on: dangling handle, edge kinds outside
    /// origin->revision / revision->revision / revision->root directory,
    /// a revision without exactly one root directory, a revision cycle, an
    /// origin without revisions, or one id declared with two kinds.
    /// The builder is left empty afterwards.
    HistoryGraph build();

  private:
    struct PendingNode {
        ArtifactId id;
        NodeKind kind;
        Handle handle;
    };
    std::vector<PendingNode> nodes_;
    std::vector<std::pair<Handle, Handle>> edges_;
};

struct NodeSpec {
    ArtifactId id;
    NodeKind kind;
};

struct EdgeSpec {
    ArtifactId from;
    ArtifactId to;
};

/// Builds a graph from id-addressed nodes and edges. Edge endpoints are
/// resolved by id; an id missing from the node list is a dangling-reference
/// GraphError. The result depends only on the multiset of inputs.
HistoryGraph build_graph(std::span<const NodeSpec> nodes, std::span<const EdgeSpec> edges);

/// Reusable visited-set storage for traversals. One per thread; cheap to
/// reset between traversals of the same graph.
class TraversalScratch {
  public:
    TraversalScratch() = default;
    ~TraversalScratch();
    TraversalScratch(TraversalScratch&& other) noexcept;
    TraversalScratch& operator=(TraversalScratch&& other) noexcept;
    TraversalScratch(const TraversalScratch&) = delete;
    TraversalScratch& operator=(const TraversalScratch&) = delete;

    void prepare(std::size_t node_count);
    bool test_and_set(NodeIndex n) {
        if (stamps_[n] == epoch_) return true;
        stamps_[n] = epoch_;
        return false;
    }
    bool visited(NodeIndex n) const { return stamps_[n] == epoch_; }

  private:
    void release();

    // Zero-initialized; large buffers come straight from the kernel so that
    // they need neither a memset nor one page fault per 4 KiB.
    std::uint32_t* stamps_ = nullptr;
    std::size_t size_ = 0;
    bool mapped_ = false;
    std::uint32_t epoch_ = 0;
};

/// Iterative depth-first walk. Visits every node reachable from `start`
/// along the chosen direction exactly once, in preorder with neighbors taken
/// in ascending index order, and yields those whose kind is in `filter`.
/// The walk passes through nodes of every kind regardless of the filter.
class DepthFirstWalk {
  public:
    /// Throws InvalidArgument when start is not a node of g.
    DepthFirstWalk(const HistoryGraph& g, NodeIndex start, Direction direction, KindMask filter,
                   TraversalScratch& scratch);

    std::optional<NodeIndex> next();

  private:
    const HistoryGraph* graph_;
    Direction direction_;
    KindMask filter_;
    TraversalScratch* scratch_;
    std::vector<NodeIndex> stack_;
};

/// Convenience wrapper collecting a DepthFirstWalk into a vector.
std::vector<NodeIndex> traverse(const HistoryGraph& g, NodeIndex start, Direction direction,
                                KindMask filter);

}  // namespace forkscope
