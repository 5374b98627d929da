#include "forkscope/graph.hpp"

#include <sys/mman.h>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <new>
#include <string>
#include <unordered_map>
#include <utility>

#include "forkscope/error.hpp"

namespace forkscope {

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Origin: return "origin";
        case NodeKind::Revision: return "revision";
        case NodeKind::RootDirectory: return "root directory";
    }
    return "unknown";
}

std::span<const NodeIndex> HistoryGraph::parent_revisions(NodeIndex revision) const {
    auto succ = successors(revision);
    // The root directory sorts after every revision, so it is the last successor.
    return succ.first(succ.size() - 1);
}

NodeIndex HistoryGraph::root_directory(NodeIndex revision) const {
    return successors(revision).back();
}

std::pair<NodeIndex, NodeIndex> HistoryGraph::kind_range(NodeKind kind) const {
    switch (kind) {
        case NodeKind::Origin: return {0, revisions_begin_};
        case NodeKind::Revision: return {revisions_begin_, rootdirs_begin_};
        case NodeKind::RootDirectory:
            return {rootdirs_begin_, static_cast<NodeIndex>(ids_.size())};
    }
    return {0, 0};
}

std::optional<NodeIndex> HistoryGraph::find(NodeKind kind, const ArtifactId& id) const {
    auto [lo, hi] = kind_range(kind);
    auto first = by_id_.begin() + lo;
    auto last = by_id_.begin() + hi;
    auto it = std::lower_bound(first, last, id,
                               [this](NodeIndex n, const ArtifactId& x) { return ids_[n] < x; });
    if (it == last || ids_[*it] != id) return std::nullopt;
    return *it;
}

namespace {

// CSR adjacency with every node renamed through new_of; lists re-sorted.
void permute_adjacency(std::vector<std::uint64_t>& offsets, std::vector<NodeIndex>& targets,
                       const std::vector<NodeIndex>& new_of, const std::vector<NodeIndex>& old_of) {
    const std::size_t n = new_of.size();
    std::vector<std::uint64_t> out_offsets(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j)
        out_offsets[j + 1] = out_offsets[j] + (offsets[old_of[j] + 1] - offsets[old_of[j]]);
    std::vector<NodeIndex> out_targets(targets.size());
    for (std::size_t j = 0; j < n; ++j) {
        auto dst = out_targets.begin() + static_cast<std::ptrdiff_t>(out_offsets[j]);
        auto src_begin = targets.begin() + static_cast<std::ptrdiff_t>(offsets[old_of[j]]);
        auto src_end = targets.begin() + static_cast<std::ptrdiff_t>(offsets[old_of[j] + 1]);
        auto d = dst;
        for (auto it = src_begin; it != src_end; ++it) *d++ = new_of[*it];
        std::sort(dst, d);
    }
    offsets = std::move(out_offsets);
    targets = std::move(out_targets);
}

}  // namespace

// Expects ids_ and the adjacency in sorted (kind, id) order.
void HistoryGraph::relabel_for_locality() {
    constexpr NodeIndex kUnset = std::numeric_limits<NodeIndex>::max();
    const std::size_t n = ids_.size();
    std::vector<NodeIndex> new_of(n, kUnset);
    for (NodeIndex o = 0; o < revisions_begin_; ++o) new_of[o] = o;

    NodeIndex next = revisions_begin_;
    std::vector<NodeIndex> stack;
    auto number_from = [&](NodeIndex start) {
        stack.push_back(start);
        while (!stack.empty()) {
            NodeIndex r = stack.back();
            stack.pop_back();
            if (new_of[r] != kUnset) continue;
            new_of[r] = next++;
            auto parents = parent_revisions(r);
            for (auto it = parents.rbegin(); it != parents.rend(); ++it)
                if (new_of[*it] == kUnset) stack.push_back(*it);
        }
    };
    for (NodeIndex o = 0; o < revisions_begin_; ++o)
        for (NodeIndex head : successors(o)) number_from(head);
    for (NodeIndex r = revisions_begin_; r < rootdirs_begin_; ++r)
        if (new_of[r] == kUnset) number_from(r);

    std::vector<NodeIndex> old_of(n);
    for (NodeIndex i = 0; i < rootdirs_begin_; ++i) old_of[new_of[i]] = i;
    NodeIndex next_dir = rootdirs_begin_;
    for (NodeIndex j = revisions_begin_; j < rootdirs_begin_; ++j) {
        NodeIndex d = root_directory(old_of[j]);
        if (new_of[d] == kUnset) new_of[d] = next_dir++;
    }
    for (NodeIndex d = rootdirs_begin_; d < n; ++d)
        if (new_of[d] == kUnset) new_of[d] = next_dir++;
    for (NodeIndex i = rootdirs_begin_; i < n; ++i) old_of[new_of[i]] = i;

    {
        std::vector<ArtifactId> ids(n);
        for (std::size_t i = 0; i < n; ++i) ids[new_of[i]] = ids_[i];
        ids_ = std::move(ids);
    }
    permute_adjacency(forward_offsets_, forward_targets_, new_of, old_of);
    permute_adjacency(transposed_offsets_, transposed_targets_, new_of, old_of);
    // Old order was sorted by (kind, id), so new_of lists nodes in that order.
    by_id_ = std::move(new_of);
}

void GraphBuilder::reserve(std::size_t nodes, std::size_t edges) {
    nodes_.reserve(nodes);
    edges_.reserve(edges);
}

GraphBuilder::Handle GraphBuilder::add_node(const ArtifactId& id, NodeKind kind) {
    if (id.empty()) throw InvalidArgument("cannot add a node with an empty id");
    if (nodes_.size() >= std::numeric_limits<Handle>::max())
        throw InvalidArgument("too many nodes for 32-bit indexing");
    auto h = static_cast<Handle>(nodes_.size());
    nodes_.push_back({id, kind, h});
    return h;
}

void GraphBuilder::add_edge(Handle from, Handle to) { edges_.emplace_back(from, to); }

namespace {

bool edge_kinds_allowed(NodeKind from, NodeKind to) {
    switch (from) {
        case NodeKind::Origin: return to == NodeKind::Revision;
        case NodeKind::Revision: return to == NodeKind::Revision || to == NodeKind::RootDirectory;
        case NodeKind::RootDirectory: return false;
    }
    return false;
}

template <typename It>
std::optional<ArtifactId> first_common(It a, It a_end, It b, It b_end) {
    while (a != a_end && b != b_end) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else return *a;
    }
    return std::nullopt;
}

}  // namespace

HistoryGraph GraphBuilder::build() {
    std::vector<PendingNode> nodes = std::move(nodes_);
    std::vector<std::pair<Handle, Handle>> edges = std::move(edges_);
    nodes_.clear();
    edges_.clear();

    const std::size_t handle_count = nodes.size();
    for (auto [from, to] : edges) {
        if (from >= handle_count || to >= handle_count)
            throw GraphError("edge references an undeclared node handle");
    }

    std::sort(nodes.begin(), nodes.end(), [](const PendingNode& a, const PendingNode& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.id != b.id) return a.id < b.id;
        return a.handle < b.handle;
    });

    HistoryGraph g;
    std::vector<NodeIndex> index_of(handle_count);
    g.ids_.reserve(nodes.size());
    std::size_t kind_begin[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (g.ids_.empty() || i == 0 || nodes[i - 1].kind != n.kind || nodes[i - 1].id != n.id) {
            if (g.ids_.size() >= std::numeric_limits<NodeIndex>::max())
                throw GraphError("graph exceeds 32-bit node indexing");
            g.ids_.push_back(n.id);
        }
        index_of[n.handle] = static_cast<NodeIndex>(g.ids_.size() - 1);
        kind_begin[static_cast<int>(n.kind) + 1] = g.ids_.size();
    }
    // Kinds absent from the input leave their boundary at the previous one.
    kind_begin[2] = std::max(kind_begin[2], kind_begin[1]);
    kind_begin[3] = std::max(kind_begin[3], kind_begin[2]);
    g.revisions_begin_ = static_cast<NodeIndex>(kind_begin[1]);
    g.rootdirs_begin_ = static_cast<NodeIndex>(kind_begin[2]);
    std::vector<PendingNode>().swap(nodes);

    {
        auto o = g.ids_.begin();
        auto r = o + g.revisions_begin_;
        auto d = o + g.rootdirs_begin_;
        auto e = g.ids_.end();
        auto clash = first_common(o, r, r, d);
        if (!clash) clash = first_common(o, r, d, e);
        if (!clash) clash = first_common(r, d, d, e);
        if (clash) throw GraphError("id " + clash->hex() + " is declared with two node kinds");
    }

    std::vector<std::uint64_t> keyed;
    keyed.reserve(edges.size());
    for (auto [from, to] : edges) {
        NodeIndex u = index_of[from];
        NodeIndex v = index_of[to];
        if (!edge_kinds_allowed(g.kind(u), g.kind(v)))
            throw GraphError(std::string("edge ") + g.id(u).hex() + " -> " + g.id(v).hex() +
                             " joins " + to_string(g.kind(u)) + " to " + to_string(g.kind(v)));
        keyed.push_back(static_cast<std::uint64_t>(u) << 32 | v);
    }
    std::vector<std::pair<Handle, Handle>>().swap(edges);
    std::vector<NodeIndex>().swap(index_of);
    std::sort(keyed.begin(), keyed.end());
    keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());

    const std::size_t n = g.ids_.size();
    g.forward_offsets_.assign(n + 1, 0);
    g.transposed_offsets_.assign(n + 1, 0);
    g.forward_targets_.resize(keyed.size());
    g.transposed_targets_.resize(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        auto u = static_cast<NodeIndex>(keyed[i] >> 32);
        auto v = static_cast<NodeIndex>(keyed[i]);
        ++g.forward_offsets_[u + 1];
        ++g.transposed_offsets_[v + 1];
        g.forward_targets_[i] = v;
    }
    for (std::size_t i = 0; i < n; ++i) {
        g.forward_offsets_[i + 1] += g.forward_offsets_[i];
        g.transposed_offsets_[i + 1] += g.transposed_offsets_[i];
    }
    {
        // Edges are sorted by source, so filling in order keeps every
        // transposed neighbor list sorted as well.
        std::vector<std::uint64_t> cursor(g.transposed_offsets_.begin(),
                                          g.transposed_offsets_.end() - 1);
        for (auto key : keyed) {
            auto u = static_cast<NodeIndex>(key >> 32);
            auto v = static_cast<NodeIndex>(key);
            g.transposed_targets_[cursor[v]++] = u;
        }
    }
    std::vector<std::uint64_t>().swap(keyed);

    for (NodeIndex o = 0; o < g.revisions_begin_; ++o) {
        if (g.successors(o).empty())
            throw GraphError("origin " + g.id(o).hex() + " has no revisions");
    }

    // Root directory check and Kahn's algorithm over the revision subgraph.
    const NodeIndex rev_begin = g.revisions_begin_;
    const NodeIndex rev_end = g.rootdirs_begin_;
    std::vector<std::uint32_t> pending_children(rev_end - rev_begin, 0);
    for (NodeIndex r = rev_begin; r < rev_end; ++r) {
        auto succ = g.successors(r);
        std::size_t dirs = 0;
        for (NodeIndex s : succ) {
            if (g.kind(s) == NodeKind::RootDirectory) ++dirs;
            else ++pending_children[s - rev_begin];
        }
        if (dirs != 1)
            throw GraphError("revision " + g.id(r).hex() + " has " + std::to_string(dirs) +
                             " root directories, expected exactly 1");
    }
    std::vector<NodeIndex> ready;
    for (NodeIndex r = rev_begin; r < rev_end; ++r)
        if (pending_children[r - rev_begin] == 0) ready.push_back(r);
    std::size_t ordered = 0;
    while (!ready.empty()) {
        NodeIndex r = ready.back();
        ready.pop_back();
        ++ordered;
        for (NodeIndex p : g.parent_revisions(r))
            if (--pending_children[p - rev_begin] == 0) ready.push_back(p);
    }
    if (ordered != rev_end - rev_begin) {
        for (NodeIndex r = rev_begin; r < rev_end; ++r) {
            if (pending_children[r - rev_begin] != 0)
                throw GraphError("cycle detected among revisions, involving " + g.id(r).hex());
        }
    }

    g.relabel_for_locality();
    return g;
}

HistoryGraph build_graph(std::span<const NodeSpec> nodes, std::span<const EdgeSpec> edges) {
    GraphBuilder builder;
    builder.reserve(nodes.size(), edges.size());
    std::unordered_map<ArtifactId, GraphBuilder::Handle> handle_of;
    handle_of.reserve(nodes.size());
    for (const auto& n : nodes) {
        auto h = builder.add_node(n.id, n.kind);
        auto [it, inserted] = handle_of.emplace(n.id, h);
        if (!inserted && nodes[it->second].kind != n.kind)
            throw GraphError("id " + n.id.hex() + " is declared with two node kinds");
    }
    auto resolve = [&](const ArtifactId& id) {
        auto it = handle_of.find(id);
        if (it == handle_of.end())
            throw GraphError("edge references undeclared node " + id.hex());
        return it->second;
    };
    for (const auto& e : edges) builder.add_edge(resolve(e.from), resolve(e.to));
    return builder.build();
}

namespace {

constexpr std::size_t kHugePage = std::size_t{2} << 20;

}  // namespace

TraversalScratch::~TraversalScratch() { release(); }

TraversalScratch::TraversalScratch(TraversalScratch&& other) noexcept
    : stamps_(std::exchange(other.stamps_, nullptr)),
      size_(std::exchange(other.size_, 0)),
      mapped_(std::exchange(other.mapped_, false)),
      epoch_(std::exchange(other.epoch_, 0)) {}

TraversalScratch& TraversalScratch::operator=(TraversalScratch&& other) noexcept {
    if (this != &other) {
        release();
        stamps_ = std::exchange(other.stamps_, nullptr);
        size_ = std::exchange(other.size_, 0);
        mapped_ = std::exchange(other.mapped_, false);
        epoch_ = std::exchange(other.epoch_, 0);
    }
    return *this;
}

void TraversalScratch::release() {
    if (!stamps_) return;
    if (mapped_) munmap(stamps_, size_ * sizeof(std::uint32_t));
    else std::free(stamps_);
    stamps_ = nullptr;
    size_ = 0;
    mapped_ = false;
}

void TraversalScratch::prepare(std::size_t node_count) {
    if (size_ != node_count || !stamps_) {
        release();
        const std::size_t bytes = std::max<std::size_t>(node_count, 1) * sizeof(std::uint32_t);
        void* p = nullptr;
        if (bytes >= 4 * kHugePage) {
            p = mmap(nullptr, bytes, PROT_READ | PROT_WRITE, MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);
            if (p == MAP_FAILED) {
                p = nullptr;
            } else {
                madvise(p, bytes, MADV_HUGEPAGE);  // advisory; ignored where unsupported
                mapped_ = true;
            }
        }
        if (!p) p = std::calloc(bytes / sizeof(std::uint32_t), sizeof(std::uint32_t));
        if (!p) throw std::bad_alloc();
        stamps_ = static_cast<std::uint32_t*>(p);
        size_ = node_count;
        epoch_ = 0;
    }
    if (++epoch_ == 0) {
        std::fill(stamps_, stamps_ + size_, 0);
        epoch_ = 1;
    }
}

DepthFirstWalk::DepthFirstWalk(const HistoryGraph& g, NodeIndex start, Direction direction,
                               KindMask filter, TraversalScratch& scratch)
    : graph_(&g), direction_(direction), filter_(filter), scratch_(&scratch) {
    if (!g.valid(start))
        throw InvalidArgument("traversal start " + std::to_string(start) + " is not a node");
    scratch.prepare(g.node_count());
    stack_.push_back(start);
}

std::optional<NodeIndex> DepthFirstWalk::next() {
    while (!stack_.empty()) {
        NodeIndex n = stack_.back();
        stack_.pop_back();
        if (scratch_->test_and_set(n)) continue;
        auto adj = graph_->neighbors(n, direction_);
        for (auto it = adj.rbegin(); it != adj.rend(); ++it)
            if (!scratch_->visited(*it)) stack_.push_back(*it);
        if (filter_.contains(graph_->kind(n))) return n;
    }
    return std::nullopt;
}

std::vector<NodeIndex> traverse(const HistoryGraph& g, NodeIndex start, Direction direction,
                                KindMask filter) {
    TraversalScratch scratch;
    DepthFirstWalk walk(g, start, direction, filter, scratch);
    std::vector<NodeIndex> out;
    while (auto n = walk.next()) out.push_back(*n);
    return out;
}

}  // namespace forkscope
