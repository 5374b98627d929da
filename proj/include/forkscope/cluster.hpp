#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "forkscope/graph.hpp"
#include "forkscope/relations.hpp"

namespace forkscope {

/// A group of origins: a fork network, a clique or a p-clique.
struct Cluster {
    ForkType type = ForkType::Type2SharedCommit;
    std::uint32_t id = 0;
    /// Origin node indices, sorted ascending, nonempty.
    std::vector<NodeIndex> members;

    std::size_t size() const { return members.size(); }
};

/// Throws InvalidArgument unless the clusters are nonempty, pairwise
/// disjoint and together cover origins [0, origin_count).
void require_partition(std::span<const Cluster> clusters, std::size_t origin_count);

/// Sorts by size descending then smallest member, and renumbers ids densely.
void canonical_order(std::vector<Cluster>& clusters);

}  // namespace forkscope
