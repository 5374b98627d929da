#pragma once

#include <filesystem>
#include <vector>

#include "forkscope/cluster.hpp"
#include "forkscope/forge.hpp"
#include "forkscope/graph.hpp"
#include "forkscope/relations.hpp"

namespace forkscope {

/// Fork networks of one type: connected components of
///  - type 1: the undirected forge-fork forest,
///  - type 2: the undirected origin + revision subgraph,
///  - type 3: the undirected origin + revision + root directory subgraph,
/// each reported by its origin members. The result partitions all origins
/// and is in canonical order (size descending, then smallest member).
std::vector<Cluster> fork_networks(ForkType t, const HistoryGraph& g, const ForgeForkGraph& f);

struct ForkCount {
    std::size_t forks = 0;     // origins in clusters of size >= 2
    std::size_t networks = 0;  // clusters
    std::size_t isolated = 0;  // singleton clusters

    friend bool operator==(const ForkCount&, const ForkCount&) = default;
};

/// Throws InvalidArgument when the clusters do not partition origin_count origins.
ForkCount fork_count(std::span<const Cluster> clusters, std::size_t origin_count);

/// "cluster_id,size,origin_id", one row per member, clusters in given order.
void write_clusters_csv(std::span<const Cluster> clusters, const HistoryGraph& g,
                        const std::filesystem::path& path);

}  // namespace forkscope
