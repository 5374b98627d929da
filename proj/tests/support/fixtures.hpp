#pragma once

// Small hand-built history graphs mirroring the canonical fork examples:
// a forge-fork forest, a shared-commit pair, a shared-root pair, and the
// two network/clique shapes.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "forkscope/forge.hpp"
#include "forkscope/graph.hpp"
#include "forkscope/ingest.hpp"

namespace fixtures {

using forkscope::ArtifactId;
using forkscope::NodeIndex;
using forkscope::NodeKind;

/// Name-addressed graph description. Origins are "A", "B", ...; revisions
/// and directories get arbitrary names. Ids derive from the names.
class Sketch {
  public:
    void origin(const std::string& name) { declare(name, NodeKind::Origin); }
    void rev(const std::string& name) { declare(name, NodeKind::Revision); }
    void dir(const std::string& name) { declare(name, NodeKind::RootDirectory); }
    /// Revision with its own private root directory "<name>/".
    void rev_with_dir(const std::string& name) {
        rev(name);
        dir(name + "/");
        edge(name, name + "/");
    }
    void edge(const std::string& from, const std::string& to) { edges_.emplace_back(from, to); }
    void forge(const std::string& child, const std::string& parent) {
        forge_.emplace_back(child, parent);
    }

    static ArtifactId id_of(const std::string& name, NodeKind kind) {
        if (kind == NodeKind::Origin) return forkscope::origin_id_for_url(url_of(name));
        return ArtifactId::sha1_of(std::string(kind == NodeKind::Revision ? "rev " : "dir ") + name);
    }
    static std::string url_of(const std::string& origin) {
        return "https://example.org/fixture/" + origin;
    }

    struct Built {
        forkscope::HistoryGraph graph;
        forkscope::ForgeForkGraph forks;
        std::map<std::string, NodeIndex> index;
        std::vector<std::pair<std::string, std::string>> forge_rows;  // (child, parent) names

        NodeIndex operator[](const std::string& name) const { return index.at(name); }
        std::string name_of(NodeIndex n) const {
            for (const auto& [k, v] : index)
                if (v == n) return k;
            return "?";
        }
        /// Member names of an origin set, sorted.
        std::vector<std::string> names(const std::vector<NodeIndex>& members) const {
            std::vector<std::string> out;
            for (NodeIndex m : members) out.push_back(name_of(m));
            std::sort(out.begin(), out.end());
            return out;
        }
    };

    Built build() const {
        std::vector<forkscope::NodeSpec> nodes;
        for (const auto& [name, kind] : kinds_) nodes.push_back({id_of(name, kind), kind});
        std::vector<forkscope::EdgeSpec> edges;
        for (const auto& [a, b] : edges_)
            edges.push_back({id_of(a, kinds_.at(a)), id_of(b, kinds_.at(b))});
        Built out;
        out.graph = forkscope::build_graph(nodes, edges);
        for (const auto& [name, kind] : kinds_)
            out.index[name] = *out.graph.find(kind, id_of(name, kind));
        std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
        for (const auto& [c, p] : forge_) pairs.emplace_back(out.index.at(c), out.index.at(p));
        out.forks = forkscope::ForgeForkGraph::from_pairs(out.graph.origin_count(), pairs);
        out.forge_rows = forge_;
        return out;
    }

  private:
    void declare(const std::string& name, NodeKind kind) { kinds_[name] = kind; }

    std::map<std::string, NodeKind> kinds_;
    std::vector<std::pair<std::string, std::string>> edges_;
    std::vector<std::pair<std::string, std::string>> forge_;
};

/// Forge forest: B forked A, C and D forked B, F forked E, G alone. Every
/// origin has one private commit.
inline Sketch forge_forest() {
    Sketch s;
    for (std::string o : {"A", "B", "C", "D", "E", "F", "G"}) {
        s.origin(o);
        s.rev_with_dir("c" + o);
        s.edge(o, "c" + o);
    }
    s.forge("B", "A");
    s.forge("C", "B");
    s.forge("D", "B");
    s.forge("F", "E");
    return s;
}

/// A: 5 -> 3 -> 1; B: 6 -> {2, 4}, 4 -> 2 -> 1. Commit 1 is shared.
inline Sketch shared_commit_pair() {
    Sketch s;
    s.origin("A");
    s.origin("B");
    for (std::string r : {"1", "2", "3", "4", "5", "6"}) s.rev_with_dir(r);
    s.edge("A", "5");
    s.edge("5", "3");
    s.edge("3", "1");
    s.edge("B", "6");
    s.edge("6", "2");
    s.edge("6", "4");
    s.edge("4", "2");
    s.edge("2", "1");
    return s;
}

/// A: 9 -> 7 -> 5, B: 10 -> 8 -> 6, disjoint commits. Root directories:
/// 5 and 6 -> d1, 7 and 9 -> d2, 8 -> d3, 10 -> d4.
inline Sketch shared_root_pair() {
    Sketch s;
    s.origin("A");
    s.origin("B");
    for (std::string r : {"5", "6", "7", "8", "9", "10"}) s.rev(r);
    for (std::string d : {"d1", "d2", "d3", "d4"}) s.dir(d);
    s.edge("A", "9");
    s.edge("9", "7");
    s.edge("7", "5");
    s.edge("B", "10");
    s.edge("10", "8");
    s.edge("8", "6");
    s.edge("5", "d1");
    s.edge("6", "d1");
    s.edge("7", "d2");
    s.edge("9", "d2");
    s.edge("8", "d3");
    s.edge("10", "d4");
    return s;
}

/// A: a1 -> a2 -> a3; B: b1 -> a2. C: c1 -> {c2, c3} -> c4.
/// Networks {A, B} and {C}.
inline Sketch two_networks() {
    Sketch s;
    for (std::string o : {"A", "B", "C"}) s.origin(o);
    for (std::string r : {"a1", "a2", "a3", "b1", "c1", "c2", "c3", "c4"}) s.rev_with_dir(r);
    s.edge("A", "a1");
    s.edge("a1", "a2");
    s.edge("a2", "a3");
    s.edge("B", "b1");
    s.edge("b1", "a2");
    s.edge("C", "c1");
    s.edge("c1", "c2");
    s.edge("c1", "c3");
    s.edge("c2", "c4");
    s.edge("c3", "c4");
    return s;
}

/// two_networks plus the merge b1 -> c2: B shares history with both A and
/// C, while A and C share nothing.
inline Sketch bridged_cliques() {
    Sketch s = two_networks();
    s.edge("b1", "c2");
    return s;
}

}  // namespace fixtures
