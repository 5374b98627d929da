#include "forkscope/networks.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <string>

#include "forkscope/error.hpp"

namespace forkscope {

void require_partition(std::span<const Cluster> clusters, std::size_t origin_count) {
    std::vector<bool> seen(origin_count, false);
    std::size_t covered = 0;
    for (const auto& c : clusters) {
        if (c.members.empty()) throw InvalidArgument("cluster " + std::to_string(c.id) + " is empty");
        for (NodeIndex m : c.members) {
            if (m >= origin_count)
                throw InvalidArgument("cluster member " + std::to_string(m) + " is not an origin");
            if (seen[m])
                throw InvalidArgument("origin " + std::to_string(m) + " appears in two clusters");
            seen[m] = true;
            ++covered;
        }
    }
    if (covered != origin_count)
        throw InvalidArgument("clusters cover " + std::to_string(covered) + " of " +
                              std::to_string(origin_count) + " origins");
}

void canonical_order(std::vector<Cluster>& clusters) {
    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.members.front() < b.members.front();
    });
    for (std::size_t i = 0; i < clusters.size(); ++i) clusters[i].id = static_cast<std::uint32_t>(i);
}

namespace {

std::vector<Cluster> forge_networks(const HistoryGraph& g, const ForgeForkGraph& f) {
    const std::size_t n = g.origin_count();
    if (f.origin_count() != n && f.origin_count() != 0)
        throw InvalidArgument("forge fork graph does not match the history graph's origins");
    constexpr NodeIndex kUnset = std::numeric_limits<NodeIndex>::max();
    std::vector<NodeIndex> root(n, kUnset);
    std::vector<NodeIndex> chain;
    for (NodeIndex o = 0; o < n; ++o) {
        NodeIndex cur = o;
        chain.clear();
        while (root[cur] == kUnset) {
            chain.push_back(cur);
            auto p = f.origin_count() ? f.parent(cur) : std::nullopt;
            if (!p) {
                root[cur] = cur;
                break;
            }
            cur = *p;
        }
        for (NodeIndex c : chain) root[c] = root[cur];
    }
    std::vector<NodeIndex> cluster_of(n, kUnset);
    std::vector<Cluster> clusters;
    for (NodeIndex o = 0; o < n; ++o) {
        NodeIndex r = root[o];
        if (cluster_of[r] == kUnset) {
            cluster_of[r] = static_cast<NodeIndex>(clusters.size());
            clusters.push_back({ForkType::Type1Forge, 0, {}});
        }
        clusters[cluster_of[r]].members.push_back(o);
    }
    return clusters;
}

std::vector<Cluster> history_networks(ForkType t, const HistoryGraph& g) {
    // Type 2 stops at revisions; type 3 also walks through root directories.
    const NodeIndex limit = t == ForkType::Type2SharedCommit
                                ? g.kind_range(NodeKind::Revision).second
                                : static_cast<NodeIndex>(g.node_count());
    constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(limit, kUnset);
    std::vector<Cluster> clusters;
    std::vector<NodeIndex> stack;
    for (NodeIndex seed = 0; seed < g.origin_count(); ++seed) {
        if (label[seed] != kUnset) continue;
        auto id = static_cast<std::uint32_t>(clusters.size());
        clusters.push_back({t, id, {}});
        label[seed] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            NodeIndex n = stack.back();
            stack.pop_back();
            if (g.kind(n) == NodeKind::Origin) clusters[id].members.push_back(n);
            for (auto dir : {Direction::Forward, Direction::Transposed}) {
                for (NodeIndex m : g.neighbors(n, dir)) {
                    if (m >= limit || label[m] != kUnset) continue;
                    label[m] = id;
                    stack.push_back(m);
                }
            }
        }
        std::sort(clusters[id].members.begin(), clusters[id].members.end());
    }
    return clusters;
}

}  // namespace

std::vector<Cluster> fork_networks(ForkType t, const HistoryGraph& g, const ForgeForkGraph& f) {
    std::vector<Cluster> clusters =
        t == ForkType::Type1Forge ? forge_networks(g, f) : history_networks(t, g);
    canonical_order(clusters);
    return clusters;
}

ForkCount fork_count(std::span<const Cluster> clusters, std::size_t origin_count) {
    require_partition(clusters, origin_count);
    ForkCount c;
    c.networks = clusters.size();
    for (const auto& cl : clusters) {
        if (cl.size() >= 2) c.forks += cl.size();
        else ++c.isolated;
    }
    return c;
}

void write_clusters_csv(std::span<const Cluster> clusters, const HistoryGraph& g,
                        const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "cluster_id,size,origin_id\n";
    for (const auto& c : clusters)
        for (NodeIndex m : c.members) out << c.id << ',' << c.size() << ',' << g.id(m).hex() << '\n';
    if (!out.flush()) throw IoError("error writing " + path.string());
}

}  // namespace forkscope
