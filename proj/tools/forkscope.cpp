// forkscope: fork networks, cliques and distribution comparisons over
// multi-repository development history.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "forkscope/cli.hpp"
#include "forkscope/error.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("forkscope");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("FORKSCOPE_LOG"))
        spdlog::set_level(spdlog::level::from_str(level));
}

struct Options {
    std::string input_mode = "edge-list";
    std::string nodes, edges, forge_csv, synthetic_config, out_dir = ".";
    std::vector<std::string> repos, types;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string a = "networks:1", b = "networks:2";
    bool giant = false;
};

void add_input_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--input-mode", o.input_mode, "edge-list | local-repos | synthetic")
        ->check(CLI::IsMember({"edge-list", "local-repos", "synthetic"}));
    cmd->add_option("--nodes", o.nodes, "Nodes file of an edge-list dataset");
    cmd->add_option("--edges", o.edges, "Edges file of an edge-list dataset");
    cmd->add_option("--repos", o.repos, "Local repository path (repeatable)");
    cmd->add_option("--forge-csv", o.forge_csv, "Forge fork CSV with header child,parent");
    cmd->add_option("--synthetic-config", o.synthetic_config, "JSON synthetic corpus config");
    cmd->add_option("--seed", o.seed, "Seed for synthetic input (overrides the config)");
    cmd->add_option("--type", o.types, "Fork type(s): 1, 2, 3")
        ->delimiter(',')
        ->check(CLI::IsMember({"1", "2", "3"}));
    cmd->add_option("--out-dir", o.out_dir, "Output directory");
    cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
}

forkscope::cli::RunConfig to_config(const Options& o, const CLI::App* cmd) {
    using namespace forkscope;
    cli::RunConfig cfg;
    cfg.mode = cli::parse_input_mode(o.input_mode);
    cfg.nodes = o.nodes;
    cfg.edges = o.edges;
    for (const auto& r : o.repos) cfg.repos.emplace_back(r);
    if (!o.forge_csv.empty()) cfg.forge_csv = o.forge_csv;
    if (!o.synthetic_config.empty()) cfg.synthetic_config = o.synthetic_config;
    if (cmd->count("--seed")) cfg.seed = o.seed;
    for (const auto& t : o.types) cfg.types.push_back(parse_fork_type(t));
    cfg.out_dir = o.out_dir;
    cfg.threads = o.threads;
    cfg.partition_a = o.a;
    cfg.partition_b = o.b;
    cfg.giant = o.giant;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Identify forks among version-control repositories"};
    app.require_subcommand(1);
    Options o;

    auto* networks = app.add_subcommand("networks", "Fork networks per fork type");
    add_input_options(networks, o);
    auto* cliques = app.add_subcommand("cliques", "Fork cliques and the p-clique partition");
    add_input_options(cliques, o);
    auto* compare = app.add_subcommand("compare", "delta O / KS between two partitions");
    add_input_options(compare, o);
    compare->add_option("--a", o.a, "Baseline partition: networks:<1|2|3> or pcliques:<2|3>");
    compare->add_option("--b", o.b, "Compared partition: networks:<1|2|3> or pcliques:<2|3>");
    compare->add_flag("--giant", o.giant, "Also write the largest cluster's contribution");
    auto* generate = app.add_subcommand("generate", "Write a synthetic corpus as an edge list");
    generate->add_option("--synthetic-config", o.synthetic_config, "JSON synthetic corpus config");
    generate->add_option("--seed", o.seed, "Seed (overrides the config)");
    generate->add_option("--out-dir", o.out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*networks) return forkscope::cli::cmd_networks(to_config(o, networks));
        if (*cliques) return forkscope::cli::cmd_cliques(to_config(o, cliques));
        if (*compare) return forkscope::cli::cmd_compare(to_config(o, compare));
        if (*generate) {
            o.input_mode = "synthetic";
            return forkscope::cli::cmd_generate(to_config(o, generate));
        }
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 2;
}
