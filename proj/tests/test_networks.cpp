#include <doctest.h>

#include <set>

#include "forkscope/error.hpp"
#include "forkscope/ingest.hpp"
#include "forkscope/networks.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

using namespace forkscope;

namespace {

using Names = std::vector<std::vector<std::string>>;

Names named(const fixtures::Sketch::Built& f, const std::vector<Cluster>& clusters) {
    Names out;
    for (const auto& c : clusters) out.push_back(f.names(c.members));
    return out;
}

SynthCorpus corpus(std::uint64_t seed, std::uint32_t repos, double oob, double collision) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.repo_count = repos;
    cfg.oob_clone_prob = oob;
    cfg.collision_prob = collision;
    cfg.unrelated_merge_prob = 0.03;
    return generate_synthetic(cfg);
}

std::vector<std::pair<NodeIndex, NodeIndex>> truth_pairs(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs, const GroundTruth& t) {
    std::vector<std::pair<NodeIndex, NodeIndex>> out;
    for (auto [a, b] : pairs) out.emplace_back(t.origin_of_repo[a], t.origin_of_repo[b]);
    return out;
}

}  // namespace

TEST_CASE("forge forest networks") {
    auto f = fixtures::forge_forest().build();
    auto nets = fork_networks(ForkType::Type1Forge, f.graph, f.forks);
    CHECK(named(f, nets) == Names{{"A", "B", "C", "D"}, {"E", "F"}, {"G"}});
    CHECK(fork_count(nets, 7) == ForkCount{6, 3, 1});
    for (std::uint32_t i = 0; i < nets.size(); ++i) CHECK(nets[i].id == i);
    // Without shared commits every origin is alone for types 2 and 3.
    CHECK(fork_networks(ForkType::Type2SharedCommit, f.graph, f.forks).size() == 7);
    CHECK(fork_count(fork_networks(ForkType::Type3SharedRoot, f.graph, f.forks), 7) == ForkCount{0, 7, 7});
}

TEST_CASE("two networks") {
    auto f = fixtures::two_networks().build();
    auto nets = fork_networks(ForkType::Type2SharedCommit, f.graph, f.forks);
    CHECK(named(f, nets) == Names{{"A", "B"}, {"C"}});
    CHECK(fork_count(nets, 3) == ForkCount{2, 2, 1});
}

TEST_CASE("a bridging merge joins everything into one network") {
    auto f = fixtures::bridged_cliques().build();
    auto nets = fork_networks(ForkType::Type2SharedCommit, f.graph, f.forks);
    CHECK(named(f, nets) == Names{{"A", "B", "C"}});
    CHECK(fork_count(nets, 3) == ForkCount{3, 1, 0});
}

TEST_CASE("shared root directories join type 3 networks only") {
    auto f = fixtures::shared_root_pair().build();
    CHECK(fork_networks(ForkType::Type2SharedCommit, f.graph, f.forks).size() == 2);
    CHECK(named(f, fork_networks(ForkType::Type3SharedRoot, f.graph, f.forks)) == Names{{"A", "B"}});
}

TEST_CASE("fork_count checks for a partition") {
    std::vector<Cluster> overlapping{{ForkType::Type2SharedCommit, 0, {0, 1}}, {ForkType::Type2SharedCommit, 1, {1, 2}}};
    CHECK_THROWS_AS(fork_count(overlapping, 3), InvalidArgument);
    std::vector<Cluster> missing{{ForkType::Type2SharedCommit, 0, {0, 1}}};
    CHECK_THROWS_AS(fork_count(missing, 3), InvalidArgument);
    std::vector<Cluster> empty_cluster{{ForkType::Type2SharedCommit, 0, {0, 1, 2}}, {ForkType::Type2SharedCommit, 1, {}}};
    CHECK_THROWS_AS(fork_count(empty_cluster, 3), InvalidArgument);
    std::vector<Cluster> out_of_range{{ForkType::Type2SharedCommit, 0, {0, 1, 5}}};
    CHECK_THROWS_AS(fork_count(out_of_range, 3), InvalidArgument);
}

TEST_CASE("canonical order breaks size ties by smallest member") {
    std::vector<Cluster> c{{ForkType::Type2SharedCommit, 9, {4}},
                           {ForkType::Type2SharedCommit, 9, {3, 5}},
                           {ForkType::Type2SharedCommit, 9, {0, 2}},
                           {ForkType::Type2SharedCommit, 9, {1}}};
    canonical_order(c);
    CHECK(c[0].members == std::vector<NodeIndex>{0, 2});
    CHECK(c[1].members == std::vector<NodeIndex>{3, 5});
    CHECK(c[2].members == std::vector<NodeIndex>{1});
    CHECK(c[3].members == std::vector<NodeIndex>{4});
    CHECK(c[3].id == 3);
}

TEST_CASE("networks equal union-find over pairwise relations and over ground truth") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto c = corpus(seed, 200, 0.15, 0.01);
        auto h = oracles::histories(c.graph);
        const std::size_t n = c.graph.origin_count();
        for (auto [t, truth] : {std::pair{ForkType::Type1Forge, &c.truth.type1},
                                std::pair{ForkType::Type2SharedCommit, &c.truth.type2},
                                std::pair{ForkType::Type3SharedRoot, &c.truth.type3}}) {
            CAPTURE(seed);
            CAPTURE(to_string(t));
            auto nets = fork_networks(t, c.graph, c.forks);
            require_partition(nets, n);
            auto got = oracles::as_sets(nets);
            CHECK(got == oracles::components_from_pairs(n, oracles::related_pairs(t, c.graph, c.forks, h)));
            CHECK(got == oracles::components_from_pairs(n, truth_pairs(*truth, c.truth)));
        }
    }
}

TEST_CASE("type 3 networks are unions of type 2 networks") {
    for (std::uint64_t seed = 20; seed <= 25; ++seed) {
        auto c = corpus(seed, 150, 0.2, 0.05);
        auto n2 = fork_networks(ForkType::Type2SharedCommit, c.graph, c.forks);
        auto n3 = fork_networks(ForkType::Type3SharedRoot, c.graph, c.forks);
        std::vector<std::uint32_t> net3(c.graph.origin_count());
        for (const auto& cl : n3)
            for (NodeIndex m : cl.members) net3[m] = cl.id;
        for (const auto& cl : n2)
            for (NodeIndex m : cl.members) CHECK(net3[m] == net3[cl.members.front()]);
        CHECK(n3.size() <= n2.size());
        CHECK(fork_count(n2, c.graph.origin_count()).forks <= fork_count(n3, c.graph.origin_count()).forks);
    }
}

TEST_CASE("forge forks refine type 2 networks when every fork goes through the forge") {
    SynthConfig cfg;
    cfg.seed = 8;
    cfg.repo_count = 150;
    cfg.oob_clone_prob = 0.0;
    auto c = generate_synthetic(cfg);
    auto n1 = fork_networks(ForkType::Type1Forge, c.graph, c.forks);
    auto n2 = fork_networks(ForkType::Type2SharedCommit, c.graph, c.forks);
    std::vector<std::uint32_t> net2(c.graph.origin_count());
    for (const auto& cl : n2)
        for (NodeIndex m : cl.members) net2[m] = cl.id;
    for (const auto& cl : n1)
        for (NodeIndex m : cl.members) CHECK(net2[m] == net2[cl.members.front()]);
}

TEST_CASE("clusters csv") {
    testing_support::TempDir dir;
    auto f = fixtures::two_networks().build();
    auto nets = fork_networks(ForkType::Type2SharedCommit, f.graph, f.forks);
    write_clusters_csv(nets, f.graph, dir / "n.csv");
    auto hex = [&](const std::string& o) { return f.graph.id(f[o]).hex(); };
    // Rows within a cluster follow member (node index) order.
    std::string first = f["A"] < f["B"] ? hex("A") : hex("B");
    std::string second = f["A"] < f["B"] ? hex("B") : hex("A");
    CHECK(testing_support::read_file(dir / "n.csv") ==
          "cluster_id,size,origin_id\n0,2," + first + "\n0,2," + second + "\n1,1," + hex("C") + "\n");
}
