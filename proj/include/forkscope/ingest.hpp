#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forkscope/forge.hpp"
#include "forkscope/graph.hpp"

namespace forkscope {

// ---------------------------------------------------------------------------
// Edge-list datasets
//
// nodes file: one "<kind> <hex id>" per line, kind in {ori, rev, dir}
// edges file: one "<hex src> <hex dst>" per line
// UTF-8, LF line endings, lowercase hex on output (either case accepted).
// ---------------------------------------------------------------------------

/// Parses and builds a graph. Malformed lines raise ParseError naming the
/// file and line number; structural problems raise GraphError.
HistoryGraph load_edge_list(const std::filesystem::path& nodes_path,
                            const std::filesystem::path& edges_path);

/// Writes g in edge-list format, nodes and edges in index order.
void write_edge_list(const HistoryGraph& g, const std::filesystem::path& nodes_path,
                     const std::filesystem::path& edges_path);

// ---------------------------------------------------------------------------
// Origin identification and forge metadata
// ---------------------------------------------------------------------------

/// Lowercases scheme and host, strips trailing "/" and ".git" (repeatedly).
/// scp-style "user@host:path" addresses get their host lowercased too.
std::string normalize_url(std::string_view url);

/// Extrinsic origin id: SHA-1 of the normalized URL.
ArtifactId origin_id_for_url(std::string_view url);

/// Reads all records of an RFC-4180 CSV file. Throws ParseError on
/// unterminated quotes or stray characters after a closing quote.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view value);

struct ForgeLoadResult {
    ForgeForkGraph forks;
    std::size_t records = 0;
    std::size_t skipped = 0;  // records naming an origin absent from the graph
};

/// Loads a "child,parent" CSV. Each field is either a hex origin id or a URL
/// (matched through origin_id_for_url). Unknown origins are skipped and
/// counted. Throws ParseError on a bad header or wrong field count, and
/// GraphError for duplicate parents, self-forks and cycles.
ForgeLoadResult load_forge_forks(const std::filesystem::path& csv_path, const HistoryGraph& g);

/// Writes a forge CSV using hex origin ids.
void write_forge_forks(const ForgeForkGraph& f, const HistoryGraph& g,
                       const std::filesystem::path& csv_path);

struct IngestSummary {
    std::size_t origins = 0;
    std::size_t revisions = 0;
    std::size_t rootdirs = 0;
    std::size_t skipped_forge_records = 0;
};

IngestSummary summarize(const HistoryGraph& g, std::size_t skipped_forge_records);
/// {"origins":..,"revisions":..,"rootdirs":..,"skipped_forge_records":..}
std::string to_json(const IngestSummary& s);

// ---------------------------------------------------------------------------
// Local repositories
// ---------------------------------------------------------------------------

struct LocalIngestResult {
    HistoryGraph graph;
    /// Canonical path of each input, in input order.
    std::vector<std::string> labels;
    /// Origin node index of each input, in input order.
    std::vector<NodeIndex> origins;
};

/// Enumerates (commit, tree, parents) of every ref-reachable commit through
/// the git command-line tool and merges all repositories into one graph.
/// Each origin points at the tips of its history (commits without children
/// inside that repository), which reach exactly the ref-reachable commits.
/// Origin ids are origin_id_for_url of "file://<canonical path>".
/// Throws IoError naming the path when it is not a readable git repository,
/// ParseError on unexpected tool output.
LocalIngestResult ingest_local_repos(const std::vector<std::filesystem::path>& repos,
                                     unsigned threads = 1);

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

struct SynthConfig {
    std::uint64_t seed = 1;
    std::uint32_t repo_count = 100;
    /// Mean length of the history of a repository created from scratch.
    double mean_commits = 20.0;
    /// Chance that a new repository is a forge fork of an earlier one.
    double forge_fork_prob = 0.3;
    /// Chance that a non-forge-fork repository is an out-of-band clone of an
    /// earlier one (shares history, no forge record).
    double oob_clone_prob = 0.1;
    /// Mean of the geometric number of commits added after forking/cloning.
    double mean_divergence = 3.0;
    /// Per-commit chance of reusing the root directory of an existing commit.
    double collision_prob = 0.0;
    /// Per-repository chance of merging the head of an unrelated earlier
    /// repository (akin to merging with unrelated histories).
    double unrelated_merge_prob = 0.0;

    /// Throws InvalidArgument on probabilities outside [0,1], counts < 1 or
    /// a mean below 1 for mean_commits / below 0 for mean_divergence.
    void validate() const;
};

/// Parses a JSON SynthConfig. Absent keys keep their defaults; unknown keys
/// are rejected.
SynthConfig parse_synth_config(std::string_view json_text);
SynthConfig load_synth_config(const std::filesystem::path& path);

/// Relations as recorded by the generator, independent of graph traversal.
/// Repositories are numbered by creation order (repo ordinal).
struct GroundTruth {
    /// Origin node index of each repo ordinal.
    std::vector<NodeIndex> origin_of_repo;
    /// (parent, child) repo ordinals of every forge fork.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> type1;
    /// Unordered pairs (a < b) of repo ordinals sharing a commit.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> type2;
    /// Unordered pairs (a < b) of repo ordinals sharing a root directory.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> type3;
    /// Distinct sets of repo ordinals containing each parentless commit,
    /// each sorted ascending; the list is sorted lexicographically.
    std::vector<std::vector<std::uint32_t>> cliques;
};

struct SynthCorpus {
    HistoryGraph graph;
    ForgeForkGraph forks;
    GroundTruth truth;
    /// URL of each origin node, indexed by origin node index.
    std::vector<std::string> origin_urls;
};

/// Deterministic for a given config (including across platforms: only the
/// fully specified mt19937_64 engine is used).
SynthCorpus generate_synthetic(const SynthConfig& cfg);

/// Degenerate corpus: one chain of `commits` revisions, each with its own
/// root directory, and `origins` origins whose heads are spread evenly
/// along the chain (the first origin points at the tip).
HistoryGraph make_chain_corpus(std::size_t commits, std::size_t origins = 1,
                               std::uint64_t seed = 1);

}  // namespace forkscope
