#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "forkscope/graph.hpp"

namespace forkscope {

/// Forge-declared "forked from" relation: every origin has at most one
/// parent origin and the relation forms a forest. Indexed by origin node
/// index of the HistoryGraph it was built against.
class ForgeForkGraph {
  public:
    static constexpr NodeIndex kNoParent = static_cast<NodeIndex>(-1);

    ForgeForkGraph() = default;
    explicit ForgeForkGraph(std::size_t origin_count) : parent_(origin_count, kNoParent) {}

    /// Builds from (child, parent) origin pairs. Repeating an identical pair
    /// is accepted. Throws GraphError on self-forks, a child with two distinct
    /// parents, an out-of-range origin, or a cycle.
    static ForgeForkGraph from_pairs(std::size_t origin_count,
                                     std::span<const std::pair<NodeIndex, NodeIndex>> child_parent);

    std::size_t origin_count() const { return parent_.size(); }
    std::optional<NodeIndex> parent(NodeIndex origin) const {
        NodeIndex p = parent_.at(origin);
        if (p == kNoParent) return std::nullopt;
        return p;
    }
    std::size_t edge_count() const;

  private:
    std::vector<NodeIndex> parent_;
};

}  // namespace forkscope
