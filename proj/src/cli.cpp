#include "forkscope/cli.hpp"

#include <fstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "forkscope/cliques.hpp"
#include "forkscope/error.hpp"
#include "forkscope/networks.hpp"
#include "forkscope/stats.hpp"

namespace forkscope::cli {

using nlohmann::ordered_json;

InputMode parse_input_mode(std::string_view text) {
    if (text == "edge-list") return InputMode::EdgeList;
    if (text == "local-repos") return InputMode::LocalRepos;
    if (text == "synthetic") return InputMode::Synthetic;
    throw InvalidArgument("input mode must be edge-list, local-repos or synthetic, got '" +
                          std::string(text) + "'");
}

void RunConfig::validate() const {
    switch (mode) {
        case InputMode::EdgeList:
            if (nodes.empty() || edges.empty())
                throw InvalidArgument("edge-list input needs --nodes and --edges");
            break;
        case InputMode::LocalRepos:
            if (repos.empty()) throw InvalidArgument("local-repos input needs at least one --repos");
            break;
        case InputMode::Synthetic: break;
    }
    if (threads < 1) throw InvalidArgument("--threads must be at least 1");
}

Dataset load_dataset(const RunConfig& cfg) {
    cfg.validate();
    Dataset d;
    bool have_forks = false;
    switch (cfg.mode) {
        case InputMode::EdgeList:
            spdlog::info("loading edge list {} / {}", cfg.nodes.string(), cfg.edges.string());
            d.graph = load_edge_list(cfg.nodes, cfg.edges);
            break;
        case InputMode::LocalRepos: {
            spdlog::info("ingesting {} local repositories", cfg.repos.size());
            auto local = ingest_local_repos(cfg.repos, cfg.threads);
            d.graph = std::move(local.graph);
            d.origin_urls.resize(d.graph.origin_count());
            for (std::size_t i = 0; i < local.origins.size(); ++i)
                d.origin_urls[local.origins[i]] = "file://" + local.labels[i];
            break;
        }
        case InputMode::Synthetic: {
            SynthConfig sc = cfg.synthetic_config ? load_synth_config(*cfg.synthetic_config)
                                                  : SynthConfig{};
            if (cfg.seed) sc.seed = *cfg.seed;
            spdlog::info("generating synthetic corpus: seed {} repos {}", sc.seed, sc.repo_count);
            auto corpus = generate_synthetic(sc);
            d.graph = std::move(corpus.graph);
            d.forks = std::move(corpus.forks);
            d.origin_urls = std::move(corpus.origin_urls);
            have_forks = !cfg.forge_csv;
            break;
        }
    }
    std::size_t skipped = 0;
    if (cfg.forge_csv) {
        auto loaded = load_forge_forks(*cfg.forge_csv, d.graph);
        d.forks = std::move(loaded.forks);
        skipped = loaded.skipped;
        if (skipped > 0)
            spdlog::warn("{} of {} forge records name unknown origins and were skipped", skipped,
                         loaded.records);
        have_forks = true;
    }
    if (!have_forks) {
        d.forks = ForgeForkGraph(d.graph.origin_count());
    }
    d.summary = summarize(d.graph, skipped);
    spdlog::info("graph: {} origins, {} revisions, {} root directories", d.summary.origins,
                 d.summary.revisions, d.summary.rootdirs);
    return d;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw IoError("error writing " + path.string());
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec || !std::filesystem::is_directory(cfg.out_dir))
        throw IoError("cannot create output directory " + cfg.out_dir.string());
    return cfg.out_dir;
}

std::string type_tag(ForkType t) { return to_string(t); }

ordered_json summary_json(const PartitionSummary& s, std::size_t origins) {
    ordered_json j;
    j["forks"] = s.forks;
    j["networks"] = s.networks;
    j["isolated"] = s.isolated;
    j["fork_percentage"] =
        origins == 0 ? 0.0 : 100.0 * static_cast<double>(s.forks) / static_cast<double>(origins);
    j["mean_size"] = s.mean_size;
    j["ks"] = s.ks;
    return j;
}

// A named partition of the origins, as selected on the compare command line.
struct NamedPartition {
    std::string label;
    std::vector<Cluster> clusters;
};

NamedPartition partition_by_name(const std::string& name, const Dataset& d, unsigned threads) {
    auto colon = name.find(':');
    if (colon == std::string::npos)
        throw InvalidArgument("partition must look like networks:<type> or pcliques:<type>, got '" +
                              name + "'");
    std::string what = name.substr(0, colon);
    ForkType t = parse_fork_type(name.substr(colon + 1));
    NamedPartition p{what + "_" + type_tag(t), {}};
    if (what == "networks") {
        p.clusters = fork_networks(t, d.graph, d.forks);
    } else if (what == "pcliques") {
        std::vector<ForkClique> cliques;
        if (t == ForkType::Type2SharedCommit) cliques = find_cliques(d.graph, threads);
        else if (t == ForkType::Type3SharedRoot) cliques = type3_cliques_bruteforce(d.graph);
        else throw InvalidArgument("p-cliques are defined for types 2 and 3 only");
        p.clusters = pclique_partition(cliques, d.graph).groups;
    } else {
        throw InvalidArgument("unknown partition kind '" + what + "'");
    }
    return p;
}

}  // namespace

int cmd_networks(const RunConfig& cfg) {
    Dataset d = load_dataset(cfg);
    auto out = prepare_out_dir(cfg);
    write_text(out / "ingest_summary.json", to_json(d.summary));

    std::vector<ForkType> types = cfg.types;
    if (types.empty())
        types = {ForkType::Type1Forge, ForkType::Type2SharedCommit, ForkType::Type3SharedRoot};
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());

    ordered_json summary;
    for (ForkType t : types) {
        auto clusters = fork_networks(t, d.graph, d.forks);
        auto dist = size_distribution(clusters, d.graph.origin_count());
        const std::string tag = type_tag(t);
        write_clusters_csv(clusters, d.graph, out / ("networks_" + tag + ".csv"));
        write_size_csv(dist, out / ("network_sizes_" + tag + ".csv"));
        write_ccdf_csv(weighted_ccdf(dist), out / ("network_wccdf_" + tag + ".csv"));
        auto s = summarize_partition(dist);
        summary[tag] = summary_json(s, d.graph.origin_count());
        spdlog::info("{}: {} forks in {} networks ({} isolated)", tag, s.forks, s.networks,
                     s.isolated);
    }
    write_text(out / "networks_summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_cliques(const RunConfig& cfg) {
    Dataset d = load_dataset(cfg);
    auto out = prepare_out_dir(cfg);
    write_text(out / "ingest_summary.json", to_json(d.summary));

    std::vector<ForkType> types = cfg.types;
    if (types.empty()) types = {ForkType::Type2SharedCommit};
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());

    for (ForkType t : types) {
        std::vector<ForkClique> cliques;
        if (t == ForkType::Type2SharedCommit) cliques = find_cliques(d.graph, cfg.threads);
        else if (t == ForkType::Type3SharedRoot) cliques = type3_cliques_bruteforce(d.graph);
        else throw InvalidArgument("forge forks only have singleton cliques; use type 2 or 3");

        const std::string tag = type_tag(t);
        write_cliques_csv(cliques, d.graph, out / ("cliques_" + tag + ".csv"));

        auto overlap = overlap_stats(cliques);
        ordered_json oj;
        oj["cliques"] = cliques.size();
        oj["origins_in_one_clique"] = overlap.in_one;
        oj["origins_in_several_cliques"] = overlap.in_several;
        oj["mean_cliques_per_origin"] = overlap.mean_cliques_per_origin;
        write_text(out / ("clique_overlap_" + tag + ".json"), oj.dump(2) + "\n");

        auto partition = pclique_partition(cliques, d.graph);
        write_pcliques_csv(partition, d.graph, out / ("pcliques_" + tag + ".csv"));
        auto dist = size_distribution(partition.groups, d.graph.origin_count());
        write_size_csv(dist, out / ("pclique_sizes_" + tag + ".csv"));
        write_ccdf_csv(weighted_ccdf(dist), out / ("pclique_wccdf_" + tag + ".csv"));
        write_text(out / ("pclique_summary_" + tag + ".json"),
                   summary_json(summarize_partition(dist), d.graph.origin_count()).dump(2) + "\n");
        spdlog::info("{}: {} cliques, {} p-cliques", tag, cliques.size(), partition.groups.size());
    }
    return 0;
}

int cmd_compare(const RunConfig& cfg) {
    Dataset d = load_dataset(cfg);
    auto out = prepare_out_dir(cfg);
    write_text(out / "ingest_summary.json", to_json(d.summary));

    auto a = partition_by_name(cfg.partition_a, d, cfg.threads);
    auto b = partition_by_name(cfg.partition_b, d, cfg.threads);
    const std::size_t origins = d.graph.origin_count();
    auto dist_a = size_distribution(a.clusters, origins);
    auto dist_b = size_distribution(b.clusters, origins);
    auto w_a = weighted_ccdf(dist_a);
    auto w_b = weighted_ccdf(dist_b);
    auto delta = delta_o(w_a, w_b);

    write_ccdf_csv(w_a, out / "wccdf_a.csv");
    write_ccdf_csv(w_b, out / "wccdf_b.csv");
    write_delta_csv(delta, out / "delta_o.csv");

    ordered_json j;
    j["a"] = summary_json(summarize_partition(dist_a, delta.ks), origins);
    j["a"]["partition"] = a.label;
    j["b"] = summary_json(summarize_partition(dist_b, delta.ks), origins);
    j["b"]["partition"] = b.label;
    j["ks"] = delta.ks;

    if (cfg.giant && !b.clusters.empty()) {
        // Clusters are in canonical order, so the first one is the largest.
        auto flux = component_contribution(b.clusters.front(), a.clusters);
        write_contribution_csv(flux, out / "contribution.csv");
        j["giant_size"] = b.clusters.front().size();
    }
    write_text(out / "compare_summary.json", j.dump(2) + "\n");
    spdlog::info("{} vs {}: KS = {}", a.label, b.label, delta.ks);
    return 0;
}

int cmd_generate(const RunConfig& cfg) {
    SynthConfig sc = cfg.synthetic_config ? load_synth_config(*cfg.synthetic_config) : SynthConfig{};
    if (cfg.seed) sc.seed = *cfg.seed;
    auto corpus = generate_synthetic(sc);
    auto out = prepare_out_dir(cfg);
    write_edge_list(corpus.graph, out / "nodes.txt", out / "edges.txt");

    std::ofstream forge(out / "forge.csv", std::ios::binary);
    if (!forge) throw IoError("cannot write " + (out / "forge.csv").string());
    forge << "child,parent\n";
    for (NodeIndex o = 0; o < corpus.forks.origin_count(); ++o)
        if (auto p = corpus.forks.parent(o))
            forge << csv_field(corpus.origin_urls[o]) << ',' << csv_field(corpus.origin_urls[*p])
                  << '\n';
    if (!forge.flush()) throw IoError("error writing forge.csv");

    std::ofstream origins(out / "origins.csv", std::ios::binary);
    origins << "origin_id,url\n";
    for (NodeIndex o = 0; o < corpus.graph.origin_count(); ++o)
        origins << corpus.graph.id(o).hex() << ',' << csv_field(corpus.origin_urls[o]) << '\n';
    if (!origins.flush()) throw IoError("error writing origins.csv");
    return 0;
}

}  // namespace forkscope::cli
