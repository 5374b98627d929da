#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "forkscope/cluster.hpp"
#include "forkscope/graph.hpp"

namespace forkscope {

/// SHA-256 digest over the sorted member ids of a clique.
struct Fingerprint {
    std::array<std::uint8_t, 32> bytes{};

    std::string hex() const;
    friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

/// Fingerprint of a set of origins. `members` must be sorted ascending.
Fingerprint fingerprint(const HistoryGraph& g, std::span<const NodeIndex> members);

/// Set of origins that all contain one shared ancestor artifact.
struct ForkClique {
    std::vector<NodeIndex> members;  // sorted ascending, nonempty
    Fingerprint fingerprint;
    /// Generating artifact: a parentless revision for type 2 cliques, a
    /// root directory for the brute-force type 3 ones. When several generate
    /// the same set, the one with the smallest id.
    ArtifactId witness;
};

/// Builds a clique from an arbitrary origin list (sorted and deduplicated here).
ForkClique make_clique(const HistoryGraph& g, std::vector<NodeIndex> members,
                       ArtifactId witness = {});

/// Type 2 fork cliques: for every revision without parent revisions, the
/// origins reaching it, deduplicated by fingerprint. Root traversals are
/// independent and spread over `threads` workers; the output is sorted by
/// (size descending, fingerprint ascending) and does not depend on the
/// thread count. Throws Error if two distinct sets share a fingerprint.
std::vector<ForkClique> find_cliques(const HistoryGraph& g, unsigned threads = 1);

/// Type 3 cliques by brute force: one transposed traversal per root
/// directory. Refuses (InvalidArgument) graphs with more than max_origins
/// origins, since the cost grows with commits times origins.
std::vector<ForkClique> type3_cliques_bruteforce(const HistoryGraph& g,
                                                 std::size_t max_origins = 500);

struct PCliquePartition {
    std::vector<Cluster> groups;
    /// Fingerprint of the clique each group was carved from.
    std::vector<Fingerprint> provenance;
};

/// Assigns each origin to the first clique containing it when cliques are
/// taken by (size descending, fingerprint ascending), drops emptied cliques,
/// and appends a singleton for every origin in [0, origin_count) that no
/// clique contains. Groups keep processing order, singletons last.
PCliquePartition pclique_partition(std::span<const ForkClique> cliques, const HistoryGraph& g);

struct OverlapStats {
    std::size_t in_one = 0;       // origins in exactly one clique
    std::size_t in_several = 0;   // origins in two or more cliques
    double mean_cliques_per_origin = 0.0;  // over origins in at least one clique
};

OverlapStats overlap_stats(std::span<const ForkClique> cliques);

/// "clique_fingerprint,size,origin_id", one row per member.
void write_cliques_csv(std::span<const ForkClique> cliques, const HistoryGraph& g,
                       const std::filesystem::path& path);
/// "group_id,clique_fingerprint,size,origin_id", one row per member.
void write_pcliques_csv(const PCliquePartition& p, const HistoryGraph& g,
                        const std::filesystem::path& path);

}  // namespace forkscope
