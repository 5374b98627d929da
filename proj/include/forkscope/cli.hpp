#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "forkscope/forge.hpp"
#include "forkscope/graph.hpp"
#include "forkscope/ingest.hpp"
#include "forkscope/relations.hpp"

namespace forkscope::cli {

enum class InputMode { EdgeList, LocalRepos, Synthetic };

InputMode parse_input_mode(std::string_view text);

struct RunConfig {
    InputMode mode = InputMode::EdgeList;
    std::filesystem::path nodes;
    std::filesystem::path edges;
    std::vector<std::filesystem::path> repos;
    std::optional<std::filesystem::path> forge_csv;
    std::optional<std::filesystem::path> synthetic_config;
    std::optional<std::uint64_t> seed;
    /// Empty selects the command's default types.
    std::vector<ForkType> types;
    std::filesystem::path out_dir = ".";
    unsigned threads = 1;

    // compare only: "networks:<1|2|3>" or "pcliques:<2|3>"
    std::string partition_a = "networks:1";
    std::string partition_b = "networks:2";
    bool giant = false;

    /// Throws InvalidArgument when the inputs for the selected mode are missing.
    void validate() const;
};

struct Dataset {
    HistoryGraph graph;
    ForgeForkGraph forks;
    IngestSummary summary;
    /// Origin URL per origin index when the input mode provides one.
    std::vector<std::string> origin_urls;
};

/// Loads the configured input and forge metadata.
Dataset load_dataset(const RunConfig& cfg);

/// Network analysis per type: clusters, size distribution and weighted CCDF
/// CSVs plus networks_summary.json.
int cmd_networks(const RunConfig& cfg);
/// Cliques, overlap statistics, p-clique partition and its distributions.
int cmd_cliques(const RunConfig& cfg);
/// delta O between two partitions, KS summary and optional giant-component
/// contribution.
int cmd_compare(const RunConfig& cfg);
/// Writes the synthetic corpus as nodes.txt, edges.txt and forge.csv.
int cmd_generate(const RunConfig& cfg);

}  // namespace forkscope::cli
