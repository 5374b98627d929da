#include "forkscope/cliques.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <memory>
#include <thread>

#include <openssl/evp.h>

#include "forkscope/error.hpp"

namespace forkscope {

std::string Fingerprint::hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(64, '0');
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        out[2 * i] = kDigits[bytes[i] >> 4];
        out[2 * i + 1] = kDigits[bytes[i] & 0xf];
    }
    return out;
}

Fingerprint fingerprint(const HistoryGraph& g, std::span<const NodeIndex> members) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw Error("cannot initialise SHA-256");
    for (NodeIndex m : members) {
        const ArtifactId& id = g.id(m);
        // Width prefix keeps mixed-width member lists unambiguous.
        const auto width = static_cast<unsigned char>(id.width());
        EVP_DigestUpdate(ctx.get(), &width, 1);
        EVP_DigestUpdate(ctx.get(), id.bytes().data(), id.width());
    }
    Fingerprint fp;
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), fp.bytes.data(), &len) != 1 || len != fp.bytes.size())
        throw Error("SHA-256 finalisation failed");
    return fp;
}

ForkClique make_clique(const HistoryGraph& g, std::vector<NodeIndex> members, ArtifactId witness) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty()) throw InvalidArgument("a clique needs at least one member");
    for (NodeIndex m : members)
        if (!g.valid(m) || g.kind(m) != NodeKind::Origin)
            throw InvalidArgument("clique member " + std::to_string(m) + " is not an origin");
    ForkClique c;
    c.fingerprint = fingerprint(g, members);
    c.members = std::move(members);
    c.witness = witness;
    return c;
}

namespace {

bool clique_order(const ForkClique& a, const ForkClique& b) {
    if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    return a.fingerprint < b.fingerprint;
}

using CliqueMap = std::map<Fingerprint, ForkClique>;

// Keeps one clique per fingerprint; the witness with the smallest id wins.
void absorb(CliqueMap& into, ForkClique&& c) {
    auto it = into.find(c.fingerprint);
    if (it == into.end()) {
        Fingerprint key = c.fingerprint;
        into.emplace(key, std::move(c));
        return;
    }
    if (it->second.members != c.members)
        throw Error("fingerprint collision between distinct cliques " + c.fingerprint.hex());
    if (c.witness < it->second.witness) it->second.witness = c.witness;
}

// Runs one transposed origin-leaf collection per generator node, in parallel.
std::vector<ForkClique> cliques_from_generators(const HistoryGraph& g,
                                                const std::vector<NodeIndex>& generators,
                                                unsigned threads) {
    constexpr std::size_t kChunk = 64;
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(threads, (generators.size() + kChunk - 1) / kChunk));
    std::vector<CliqueMap> partial(n_threads);
    std::vector<std::exception_ptr> errors(n_threads);
    std::atomic<std::size_t> next{0};

    auto worker = [&](unsigned w) {
        try {
            TraversalScratch scratch;
            std::vector<NodeIndex> leaves;
            for (;;) {
                std::size_t begin = next.fetch_add(kChunk);
                if (begin >= generators.size()) break;
                std::size_t end = std::min(begin + kChunk, generators.size());
                for (std::size_t i = begin; i < end; ++i) {
                    leaves.clear();
                    DepthFirstWalk walk(g, generators[i], Direction::Transposed, NodeKind::Origin,
                                        scratch);
                    while (auto n = walk.next()) leaves.push_back(*n);
                    if (leaves.empty()) continue;
                    std::sort(leaves.begin(), leaves.end());
                    ForkClique c;
                    c.members = leaves;
                    c.fingerprint = fingerprint(g, c.members);
                    c.witness = g.id(generators[i]);
                    absorb(partial[w], std::move(c));
                }
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_threads; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    CliqueMap merged = std::move(partial[0]);
    for (unsigned w = 1; w < n_threads; ++w)
        for (auto& [fp, c] : partial[w]) absorb(merged, std::move(c));

    std::vector<ForkClique> out;
    out.reserve(merged.size());
    for (auto& [fp, c] : merged) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), clique_order);
    return out;
}

}  // namespace

std::vector<ForkClique> find_cliques(const HistoryGraph& g, unsigned threads) {
    std::vector<NodeIndex> roots;
    auto [begin, end] = g.kind_range(NodeKind::Revision);
    for (NodeIndex r = begin; r < end; ++r)
        if (g.parent_revisions(r).empty()) roots.push_back(r);
    return cliques_from_generators(g, roots, threads);
}

std::vector<ForkClique> type3_cliques_bruteforce(const HistoryGraph& g, std::size_t max_origins) {
    if (g.origin_count() > max_origins)
        throw InvalidArgument("type 3 clique enumeration refused: " +
                              std::to_string(g.origin_count()) + " origins exceed the limit of " +
                              std::to_string(max_origins) +
                              " (cost grows with commits times origins)");
    std::vector<NodeIndex> dirs;
    auto [begin, end] = g.kind_range(NodeKind::RootDirectory);
    for (NodeIndex d = begin; d < end; ++d) dirs.push_back(d);
    return cliques_from_generators(g, dirs, 1);
}

PCliquePartition pclique_partition(std::span<const ForkClique> cliques, const HistoryGraph& g) {
    const std::size_t n = g.origin_count();
    std::vector<std::size_t> order(cliques.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return clique_order(cliques[a], cliques[b]);
    });

    // Reverse index: origin -> (position in processing order, member slot).
    struct Occurrence {
        std::size_t position;
        std::size_t slot;
    };
    std::vector<std::vector<Occurrence>> index(n);
    std::vector<std::vector<bool>> alive(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto& members = cliques[order[pos]].members;
        alive[pos].assign(members.size(), true);
        for (std::size_t slot = 0; slot < members.size(); ++slot) {
            if (members[slot] >= n)
                throw InvalidArgument("clique member " + std::to_string(members[slot]) +
                                      " is not an origin");
            index[members[slot]].push_back({pos, slot});
        }
    }

    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto& members = cliques[order[pos]].members;
        for (std::size_t slot = 0; slot < members.size(); ++slot) {
            if (!alive[pos][slot]) continue;
            for (const auto& occ : index[members[slot]])
                if (occ.position > pos) alive[occ.position][occ.slot] = false;
        }
    }

    PCliquePartition p;
    std::vector<bool> covered(n, false);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto& clique = cliques[order[pos]];
        Cluster group{ForkType::Type2SharedCommit, static_cast<std::uint32_t>(p.groups.size()), {}};
        for (std::size_t slot = 0; slot < clique.members.size(); ++slot) {
            if (!alive[pos][slot]) continue;
            group.members.push_back(clique.members[slot]);
            covered[clique.members[slot]] = true;
        }
        if (group.members.empty()) continue;
        p.groups.push_back(std::move(group));
        p.provenance.push_back(clique.fingerprint);
    }
    for (NodeIndex o = 0; o < n; ++o) {
        if (covered[o]) continue;
        std::vector<NodeIndex> single{o};
        p.provenance.push_back(fingerprint(g, single));
        p.groups.push_back({ForkType::Type2SharedCommit, static_cast<std::uint32_t>(p.groups.size()),
                            std::move(single)});
    }
    return p;
}

OverlapStats overlap_stats(std::span<const ForkClique> cliques) {
    std::map<NodeIndex, std::size_t> memberships;
    std::size_t total = 0;
    for (const auto& c : cliques) {
        for (NodeIndex m : c.members) ++memberships[m];
        total += c.members.size();
    }
    OverlapStats s;
    for (const auto& [origin, count] : memberships) {
        if (count == 1) ++s.in_one;
        else ++s.in_several;
    }
    if (!memberships.empty())
        s.mean_cliques_per_origin = static_cast<double>(total) / static_cast<double>(memberships.size());
    return s;
}

void write_cliques_csv(std::span<const ForkClique> cliques, const HistoryGraph& g,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "clique_fingerprint,size,origin_id\n";
    for (const auto& c : cliques) {
        const std::string fp = c.fingerprint.hex();
        for (NodeIndex m : c.members) out << fp << ',' << c.members.size() << ',' << g.id(m).hex() << '\n';
    }
    if (!out.flush()) throw IoError("error writing " + path.string());
}

void write_pcliques_csv(const PCliquePartition& p, const HistoryGraph& g,
                        const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "group_id,clique_fingerprint,size,origin_id\n";
    for (std::size_t i = 0; i < p.groups.size(); ++i) {
        const std::string fp = p.provenance[i].hex();
        const auto& group = p.groups[i];
        for (NodeIndex m : group.members)
            out << group.id << ',' << fp << ',' << group.size() << ',' << g.id(m).hex() << '\n';
    }
    if (!out.flush()) throw IoError("error writing " + path.string());
}

}  // namespace forkscope
