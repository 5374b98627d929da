#include <doctest.h>

#include <algorithm>
#include <random>

#include "forkscope/error.hpp"
#include "forkscope/graph.hpp"
#include "forkscope/ingest.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace forkscope;

namespace {

ArtifactId id(const std::string& s) { return ArtifactId::sha1_of(s); }

struct Minimal {
    std::vector<NodeSpec> nodes{{id("O"), NodeKind::Origin},
                                {id("R"), NodeKind::Revision},
                                {id("D"), NodeKind::RootDirectory}};
    std::vector<EdgeSpec> edges{{id("O"), id("R")}, {id("R"), id("D")}};
};

// Random well-formed graph: revisions take parents among earlier revisions.
std::vector<std::pair<std::vector<NodeSpec>, std::vector<EdgeSpec>>> random_inputs(
    unsigned seed, std::size_t origins, std::size_t revisions, std::size_t dirs) {
    std::mt19937 rng(seed);
    std::vector<NodeSpec> nodes;
    std::vector<EdgeSpec> edges;
    auto name = [&](char k, std::size_t i) { return id(std::string(1, k) + std::to_string(seed) + "-" + std::to_string(i)); };
    for (std::size_t i = 0; i < origins; ++i) nodes.push_back({name('o', i), NodeKind::Origin});
    for (std::size_t i = 0; i < revisions; ++i) nodes.push_back({name('r', i), NodeKind::Revision});
    for (std::size_t i = 0; i < dirs; ++i) nodes.push_back({name('d', i), NodeKind::RootDirectory});
    for (std::size_t i = 0; i < revisions; ++i) {
        edges.push_back({name('r', i), name('d', rng() % dirs)});
        if (i > 0) {
            std::size_t parents = rng() % 3;
            for (std::size_t p = 0; p < parents; ++p) edges.push_back({name('r', i), name('r', rng() % i)});
        }
    }
    for (std::size_t i = 0; i < origins; ++i) {
        std::size_t heads = 1 + rng() % 2;
        for (std::size_t h = 0; h < heads; ++h) edges.push_back({name('o', i), name('r', rng() % revisions)});
    }
    return {{nodes, edges}};
}

}  // namespace

TEST_CASE("artifact ids") {
    auto a = ArtifactId::from_hex("00112233445566778899AABBCCDDEEFF00112233");
    CHECK(a.width() == 20);
    CHECK(a.hex() == "00112233445566778899aabbccddeeff00112233");
    auto b = ArtifactId::from_hex(std::string(64, 'a'));
    CHECK(b.width() == 32);
    CHECK(a != b);
    CHECK(a < b);  // narrower width orders first
    CHECK_THROWS_AS(ArtifactId::from_hex("abc"), ParseError);
    CHECK_THROWS_AS(ArtifactId::from_hex(std::string(40, 'g')), ParseError);
    CHECK(looks_like_hex_id(std::string(40, 'F')));
    CHECK_FALSE(looks_like_hex_id("https://example.org"));
}

TEST_CASE("minimal repository") {
    Minimal m;
    auto g = build_graph(m.nodes, m.edges);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    std::size_t transposed = 0;
    for (NodeIndex n = 0; n < g.node_count(); ++n) transposed += g.predecessors(n).size();
    CHECK(transposed == 2);
    CHECK(g.kind(0) == NodeKind::Origin);
    CHECK(g.kind(1) == NodeKind::Revision);
    CHECK(g.kind(2) == NodeKind::RootDirectory);
    CHECK(g.root_directory(1) == 2);
    CHECK(g.parent_revisions(1).empty());
}

TEST_CASE("shared-commit fixture builds acyclic") {
    auto f = fixtures::shared_commit_pair().build();
    CHECK(f.graph.origin_count() == 2);
    CHECK(f.graph.revision_count() == 6);
    CHECK(f.graph.rootdir_count() == 6);
    auto p6 = f.graph.parent_revisions(f["6"]);
    CHECK(p6.size() == 2);
}

TEST_CASE("build rejects malformed input") {
    SUBCASE("revision 2-cycle") {
        std::vector<NodeSpec> nodes{{id("O"), NodeKind::Origin},
                                    {id("R1"), NodeKind::Revision},
                                    {id("R2"), NodeKind::Revision},
                                    {id("D"), NodeKind::RootDirectory}};
        std::vector<EdgeSpec> edges{{id("O"), id("R1")}, {id("R1"), id("D")}, {id("R2"), id("D")},
                                    {id("R1"), id("R2")}, {id("R2"), id("R1")}};
        CHECK_THROWS_WITH_AS(build_graph(nodes, edges), doctest::Contains("cycle"), GraphError);
    }
    SUBCASE("dangling edge") {
        Minimal m;
        m.edges.push_back({id("R"), id("missing")});
        CHECK_THROWS_WITH_AS(build_graph(m.nodes, m.edges), doctest::Contains("undeclared"), GraphError);
    }
    SUBCASE("kind constraint") {
        Minimal m;
        m.edges.push_back({id("O"), id("D")});
        CHECK_THROWS_WITH_AS(build_graph(m.nodes, m.edges), doctest::Contains("joins origin to root directory"),
                             GraphError);
        Minimal m2;
        m2.edges.push_back({id("D"), id("R")});
        CHECK_THROWS_AS(build_graph(m2.nodes, m2.edges), GraphError);
    }
    SUBCASE("revision without root directory") {
        Minimal m;
        m.edges.pop_back();
        CHECK_THROWS_WITH_AS(build_graph(m.nodes, m.edges), doctest::Contains("0 root directories"), GraphError);
    }
    SUBCASE("revision with two root directories") {
        Minimal m;
        m.nodes.push_back({id("D2"), NodeKind::RootDirectory});
        m.edges.push_back({id("R"), id("D2")});
        CHECK_THROWS_WITH_AS(build_graph(m.nodes, m.edges), doctest::Contains("2 root directories"), GraphError);
    }
    SUBCASE("origin without revisions") {
        Minimal m;
        m.nodes.push_back({id("O2"), NodeKind::Origin});
        CHECK_THROWS_WITH_AS(build_graph(m.nodes, m.edges), doctest::Contains("has no revisions"), GraphError);
    }
    SUBCASE("one id, two kinds") {
        Minimal m;
        m.nodes.push_back({id("R"), NodeKind::RootDirectory});
        CHECK_THROWS_AS(build_graph(m.nodes, m.edges), GraphError);
    }
}

TEST_CASE("builder collapses duplicate nodes and edges") {
    GraphBuilder b;
    auto o = b.add_node(id("O"), NodeKind::Origin);
    auto r1 = b.add_node(id("R"), NodeKind::Revision);
    auto r2 = b.add_node(id("R"), NodeKind::Revision);
    auto d = b.add_node(id("D"), NodeKind::RootDirectory);
    b.add_edge(o, r1);
    b.add_edge(o, r2);
    b.add_edge(r1, d);
    b.add_edge(r2, d);
    auto g = b.build();
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
}

TEST_CASE("transposed walk from a shared root commit finds both origins") {
    auto f = fixtures::shared_commit_pair().build();
    auto found = traverse(f.graph, f["1"], Direction::Transposed, NodeKind::Origin);
    std::sort(found.begin(), found.end());
    CHECK(f.names(found) == std::vector<std::string>{"A", "B"});
}

TEST_CASE("forward walk from an isolated head yields its ancestor chain") {
    auto f = fixtures::two_networks().build();
    auto found = traverse(f.graph, f["a1"], Direction::Forward, NodeKind::Revision);
    CHECK(f.names(found) == std::vector<std::string>{"a1", "a2", "a3"});
    // Preorder starting at the start node.
    CHECK(found.front() == f["a1"]);
}

TEST_CASE("walk rejects an invalid start") {
    auto f = fixtures::two_networks().build();
    CHECK_THROWS_AS(traverse(f.graph, 10'000, Direction::Forward, KindMask::all()), InvalidArgument);
}

TEST_CASE("forward reachability equals transitive closure on random DAGs") {
    for (unsigned seed = 1; seed <= 20; ++seed) {
        auto [nodes, edges] = random_inputs(seed, 5, 30, 15).front();
        auto g = build_graph(nodes, edges);
        REQUIRE(g.node_count() == 50);
        auto reach = oracles::closure(g);
        for (NodeIndex start = 0; start < g.node_count(); ++start) {
            auto found = traverse(g, start, Direction::Forward, KindMask::all());
            std::vector<bool> row(g.node_count(), false);
            for (NodeIndex n : found) {
                CHECK_FALSE(row[n]);  // each node yielded once
                row[n] = true;
            }
            CHECK(row == reach[start]);
        }
    }
}

TEST_CASE("transposed adjacency is the exact reversal") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
        auto [nodes, edges] = random_inputs(seed, 8, 60, 20).front();
        auto g = build_graph(nodes, edges);
        std::vector<std::pair<NodeIndex, NodeIndex>> fwd, rev;
        for (NodeIndex u = 0; u < g.node_count(); ++u) {
            for (NodeIndex v : g.successors(u)) fwd.emplace_back(u, v);
            for (NodeIndex v : g.predecessors(u)) rev.emplace_back(v, u);
        }
        std::sort(fwd.begin(), fwd.end());
        std::sort(rev.begin(), rev.end());
        CHECK(fwd == rev);
    }
}

TEST_CASE("build is independent of input order") {
    auto [nodes, edges] = random_inputs(7, 6, 40, 12).front();
    auto reference = build_graph(nodes, edges);
    std::mt19937 rng(99);
    for (int round = 0; round < 5; ++round) {
        std::shuffle(nodes.begin(), nodes.end(), rng);
        std::shuffle(edges.begin(), edges.end(), rng);
        auto g = build_graph(nodes, edges);
        REQUIRE(g.node_count() == reference.node_count());
        for (NodeIndex n = 0; n < g.node_count(); ++n) {
            CHECK(g.id(n) == reference.id(n));
            auto a = g.successors(n);
            auto b = reference.successors(n);
            CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
        }
    }
}

TEST_CASE("multiple heads per origin") {
    auto f = fixtures::two_networks().build();
    std::vector<NodeSpec> nodes;
    std::vector<EdgeSpec> edges;
    nodes.push_back({id("O"), NodeKind::Origin});
    for (std::string r : {"x", "y"}) {
        nodes.push_back({id(r), NodeKind::Revision});
        nodes.push_back({id(r + "/"), NodeKind::RootDirectory});
        edges.push_back({id(r), id(r + "/")});
        edges.push_back({id("O"), id(r)});
    }
    auto g = build_graph(nodes, edges);
    CHECK(g.successors(0).size() == 2);
    CHECK(traverse(g, 0, Direction::Forward, NodeKind::Revision).size() == 2);
}

TEST_CASE("revisions along a history get consecutive indices") {
    auto g = forkscope::make_chain_corpus(500);
    auto [begin, end] = g.kind_range(NodeKind::Revision);
    NodeIndex tip = g.successors(0).front();
    CHECK(tip == begin);
    for (NodeIndex r = begin; r + 1 < end; ++r) {
        auto parents = g.parent_revisions(r);
        REQUIRE(parents.size() == 1);
        CHECK(parents[0] == r + 1);
        CHECK(g.root_directory(r) == g.kind_range(NodeKind::RootDirectory).first + (r - begin));
    }
}

TEST_CASE("lookup by id finds every node") {
    auto [nodes, edges] = random_inputs(3, 6, 80, 25).front();
    auto g = build_graph(nodes, edges);
    for (NodeIndex n = 0; n < g.node_count(); ++n) CHECK(g.find(g.kind(n), g.id(n)) == n);
    CHECK_FALSE(g.find(NodeKind::Revision, g.id(0)).has_value());
    CHECK_FALSE(g.find(NodeKind::Origin, id("absent")).has_value());
}
