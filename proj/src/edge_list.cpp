#include <fstream>
#include <string>
#include <unordered_map>

#include "forkscope/error.hpp"
#include "forkscope/ingest.hpp"

namespace forkscope {

namespace {

std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line) + ": ";
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

// Splits "a b" into exactly two non-empty tokens separated by one space.
bool split_pair(std::string_view line, std::string_view& a, std::string_view& b) {
    auto sp = line.find(' ');
    if (sp == std::string_view::npos || sp == 0 || sp + 1 >= line.size()) return false;
    a = line.substr(0, sp);
    b = line.substr(sp + 1);
    return b.find(' ') == std::string_view::npos;
}

std::string_view chomp(const std::string& raw) {
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

}  // namespace

HistoryGraph load_edge_list(const std::filesystem::path& nodes_path,
                            const std::filesystem::path& edges_path) {
    GraphBuilder builder;
    struct Declared {
        GraphBuilder::Handle handle;
        std::size_t line;
    };
    std::unordered_map<ArtifactId, Declared> declared;

    {
        auto in = open_input(nodes_path);
        std::string raw;
        std::size_t lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            auto line = chomp(raw);
            if (line.empty()) continue;
            std::string_view kind_text, hex;
            if (!split_pair(line, kind_text, hex))
                throw ParseError(where(nodes_path, lineno) + "expected '<kind> <hex id>'");
            NodeKind kind;
            if (kind_text == "ori") kind = NodeKind::Origin;
            else if (kind_text == "rev") kind = NodeKind::Revision;
            else if (kind_text == "dir") kind = NodeKind::RootDirectory;
            else
                throw ParseError(where(nodes_path, lineno) + "unknown node kind '" +
                                 std::string(kind_text) + "'");
            ArtifactId id;
            try {
                id = ArtifactId::from_hex(hex);
            } catch (const ParseError& e) {
                throw ParseError(where(nodes_path, lineno) + e.what());
            }
            auto h = builder.add_node(id, kind);
            auto [it, inserted] = declared.emplace(id, Declared{h, lineno});
            if (!inserted)
                throw ParseError(where(nodes_path, lineno) + "duplicate node " + id.hex() +
                                 " (first declared on line " + std::to_string(it->second.line) +
                                 ")");
        }
        if (in.bad()) throw IoError("error reading " + nodes_path.string());
    }

    {
        auto in = open_input(edges_path);
        std::string raw;
        std::size_t lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            auto line = chomp(raw);
            if (line.empty()) continue;
            std::string_view src, dst;
            if (!split_pair(line, src, dst))
                throw ParseError(where(edges_path, lineno) + "expected '<hex src> <hex dst>'");
            GraphBuilder::Handle ends[2];
            std::string_view texts[2] = {src, dst};
            for (int i = 0; i < 2; ++i) {
                ArtifactId id;
                try {
                    id = ArtifactId::from_hex(texts[i]);
                } catch (const ParseError& e) {
                    throw ParseError(where(edges_path, lineno) + e.what());
                }
                auto it = declared.find(id);
                if (it == declared.end())
                    throw GraphError(where(edges_path, lineno) + "edge references undeclared node " +
                                     id.hex());
                ends[i] = it->second.handle;
            }
            builder.add_edge(ends[0], ends[1]);
        }
        if (in.bad()) throw IoError("error reading " + edges_path.string());
    }

    declared = {};
    return builder.build();
}

void write_edge_list(const HistoryGraph& g, const std::filesystem::path& nodes_path,
                     const std::filesystem::path& edges_path) {
    std::ofstream nodes(nodes_path, std::ios::binary);
    if (!nodes) throw IoError("cannot write " + nodes_path.string());
    static constexpr const char* kTag[] = {"ori", "rev", "dir"};
    for (NodeIndex n = 0; n < g.node_count(); ++n)
        nodes << kTag[static_cast<int>(g.kind(n))] << ' ' << g.id(n).hex() << '\n';
    if (!nodes.flush()) throw IoError("error writing " + nodes_path.string());

    std::ofstream edges(edges_path, std::ios::binary);
    if (!edges) throw IoError("cannot write " + edges_path.string());
    for (NodeIndex n = 0; n < g.node_count(); ++n) {
        const std::string src = g.id(n).hex();
        for (NodeIndex m : g.successors(n)) edges << src << ' ' << g.id(m).hex() << '\n';
    }
    if (!edges.flush()) throw IoError("error writing " + edges_path.string());
}

}  // namespace forkscope
