#include "forkscope/forge.hpp"

#include <algorithm>
#include <string>

#include "forkscope/error.hpp"

namespace forkscope {

ForgeForkGraph ForgeForkGraph::from_pairs(
    std::size_t origin_count, std::span<const std::pair<NodeIndex, NodeIndex>> child_parent) {
    ForgeForkGraph f(origin_count);
    for (auto [child, parent] : child_parent) {
        if (child >= origin_count || parent >= origin_count)
            throw GraphError("forge fork references origin outside the graph");
        if (child == parent)
            throw GraphError("origin " + std::to_string(child) + " declared as its own fork");
        NodeIndex& slot = f.parent_[child];
        if (slot != kNoParent && slot != parent)
            throw GraphError("origin " + std::to_string(child) + " has two distinct forge parents");
        slot = parent;
    }

    // Out-degree is at most one, so a cycle shows up as a repeated node on a
    // parent chain. Color: 0 unseen, 1 on the current chain, 2 done.
    std::vector<std::uint8_t> color(origin_count, 0);
    std::vector<NodeIndex> chain;
    for (NodeIndex start = 0; start < origin_count; ++start) {
        NodeIndex n = start;
        chain.clear();
        while (n != kNoParent && color[n] == 0) {
            color[n] = 1;
            chain.push_back(n);
            n = f.parent_[n];
        }
        if (n != kNoParent && color[n] == 1)
            throw GraphError("forge fork relation contains a cycle through origin " +
                             std::to_string(n));
        for (NodeIndex c : chain) color[c] = 2;
    }
    return f;
}

std::size_t ForgeForkGraph::edge_count() const {
    return static_cast<std::size_t>(
        std::count_if(parent_.begin(), parent_.end(), [](NodeIndex p) { return p != kNoParent; }));
}

}  // namespace forkscope
