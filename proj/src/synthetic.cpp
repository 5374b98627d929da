#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <set>

#include <json.hpp>

#include "forkscope/error.hpp"
#include "forkscope/ingest.hpp"

namespace forkscope {

void SynthConfig::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidArgument(std::string(name) + " must lie in [0,1]");
    };
    prob(forge_fork_prob, "forge_fork_prob");
    prob(oob_clone_prob, "oob_clone_prob");
    prob(collision_prob, "collision_prob");
    prob(unrelated_merge_prob, "unrelated_merge_prob");
    if (repo_count < 1) throw InvalidArgument("repo_count must be at least 1");
    if (!(mean_commits >= 1.0)) throw InvalidArgument("mean_commits must be at least 1");
    if (!(mean_divergence >= 0.0)) throw InvalidArgument("mean_divergence must be non-negative");
}

SynthConfig parse_synth_config(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("synthetic config: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("synthetic config must be a JSON object");
    SynthConfig cfg;
    try {
        for (auto& [key, value] : j.items()) {
            if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "repo_count") cfg.repo_count = value.get<std::uint32_t>();
            else if (key == "mean_commits") cfg.mean_commits = value.get<double>();
            else if (key == "forge_fork_prob") cfg.forge_fork_prob = value.get<double>();
            else if (key == "oob_clone_prob") cfg.oob_clone_prob = value.get<double>();
            else if (key == "mean_divergence") cfg.mean_divergence = value.get<double>();
            else if (key == "collision_prob") cfg.collision_prob = value.get<double>();
            else if (key == "unrelated_merge_prob") cfg.unrelated_merge_prob = value.get<double>();
            else throw ParseError("synthetic config: unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("synthetic config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_synth_config(text);
}

namespace {

// Sampling helpers built only on the engine's raw output, so the stream of
// draws is identical on every standard library.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return uniform01() < p; }
    std::uint32_t index(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }
    /// Failures before the first success, success probability 1 / (1 + mean).
    std::uint32_t geometric(double mean) {
        const double p = 1.0 / (1.0 + mean);
        std::uint32_t k = 0;
        while (!chance(p) && k < 1'000'000) ++k;
        return k;
    }

  private:
    std::mt19937_64 engine_;
};

class Bits {
  public:
    void set(std::size_t i) {
        if (i / 64 >= words_.size()) words_.resize(i / 64 + 1, 0);
        words_[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    bool test(std::size_t i) const {
        return i / 64 < words_.size() && (words_[i / 64] >> (i % 64) & 1) != 0;
    }
    void merge(const Bits& o) {
        if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
        for (std::size_t w = 0; w < o.words_.size(); ++w) words_[w] |= o.words_[w];
    }
    bool intersects(const Bits& o) const {
        std::size_t n = std::min(words_.size(), o.words_.size());
        for (std::size_t w = 0; w < n; ++w)
            if (words_[w] & o.words_[w]) return true;
        return false;
    }

  private:
    std::vector<std::uint64_t> words_;
};

struct SynthCommit {
    std::vector<std::uint32_t> parents;
    std::uint32_t rootdir;
};

struct SynthRepo {
    std::uint32_t head = 0;
    Bits history;
    Bits rootdirs;
};

std::string repo_url(std::uint32_t i) { return "https://forge.example.org/synth/repo-" + std::to_string(i); }

ArtifactId revision_id(std::uint64_t seed, std::uint64_t k) {
    return ArtifactId::sha1_of("synthetic revision " + std::to_string(seed) + " " + std::to_string(k));
}

ArtifactId rootdir_id(std::uint64_t seed, std::uint64_t k) {
    return ArtifactId::sha1_of("synthetic directory " + std::to_string(seed) + " " + std::to_string(k));
}

}  // namespace

SynthCorpus generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    Sampler rng(cfg.seed);

    std::vector<SynthCommit> commits;
    std::uint32_t rootdir_count = 0;
    std::vector<SynthRepo> repos(cfg.repo_count);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> forge_pairs;

    auto add_commit = [&](SynthRepo& repo, std::vector<std::uint32_t> parents) {
        std::uint32_t dir;
        if (!commits.empty() && rng.chance(cfg.collision_prob))
            dir = commits[rng.index(static_cast<std::uint32_t>(commits.size()))].rootdir;
        else
            dir = rootdir_count++;
        auto id = static_cast<std::uint32_t>(commits.size());
        commits.push_back({std::move(parents), dir});
        repo.history.set(id);
        repo.rootdirs.set(dir);
        repo.head = id;
    };

    for (std::uint32_t i = 0; i < cfg.repo_count; ++i) {
        SynthRepo& repo = repos[i];
        bool forked = i > 0 && rng.chance(cfg.forge_fork_prob);
        bool cloned = !forked && i > 0 && rng.chance(cfg.oob_clone_prob);
        if (forked || cloned) {
            std::uint32_t p = rng.index(i);
            if (forked) forge_pairs.emplace_back(p, i);
            repo = repos[p];
            std::uint32_t extra = rng.geometric(cfg.mean_divergence);
            for (std::uint32_t k = 0; k < extra; ++k) add_commit(repo, {repo.head});
        } else {
            std::uint32_t length = 1 + rng.geometric(cfg.mean_commits - 1.0);
            add_commit(repo, {});
            for (std::uint32_t k = 1; k < length; ++k) add_commit(repo, {repo.head});
        }
        if (i > 0 && rng.chance(cfg.unrelated_merge_prob)) {
            // A few attempts at finding a repository with disjoint history.
            for (int attempt = 0; attempt < 4; ++attempt) {
                std::uint32_t q = rng.index(i);
                if (repos[q].history.intersects(repo.history)) continue;
                const SynthRepo& other = repos[q];
                std::uint32_t other_head = other.head;
                repo.history.merge(other.history);
                repo.rootdirs.merge(other.rootdirs);
                add_commit(repo, {repo.head, other_head});
                break;
            }
        }
    }

    SynthCorpus corpus;

    GraphBuilder builder;
    builder.reserve(cfg.repo_count + commits.size() + rootdir_count,
                    cfg.repo_count + 2 * commits.size());
    std::vector<ArtifactId> origin_ids;
    std::vector<GraphBuilder::Handle> origin_handles;
    for (std::uint32_t i = 0; i < cfg.repo_count; ++i) {
        origin_ids.push_back(origin_id_for_url(repo_url(i)));
        origin_handles.push_back(builder.add_node(origin_ids.back(), NodeKind::Origin));
    }
    std::vector<GraphBuilder::Handle> commit_handles;
    commit_handles.reserve(commits.size());
    for (std::size_t k = 0; k < commits.size(); ++k)
        commit_handles.push_back(builder.add_node(revision_id(cfg.seed, k), NodeKind::Revision));
    std::vector<GraphBuilder::Handle> dir_handles;
    dir_handles.reserve(rootdir_count);
    for (std::uint32_t d = 0; d < rootdir_count; ++d)
        dir_handles.push_back(builder.add_node(rootdir_id(cfg.seed, d), NodeKind::RootDirectory));
    for (std::size_t k = 0; k < commits.size(); ++k) {
        builder.add_edge(commit_handles[k], dir_handles[commits[k].rootdir]);
        for (auto p : commits[k].parents) builder.add_edge(commit_handles[k], commit_handles[p]);
    }
    for (std::uint32_t i = 0; i < cfg.repo_count; ++i)
        builder.add_edge(origin_handles[i], commit_handles[repos[i].head]);
    corpus.graph = builder.build();
    const HistoryGraph& g = corpus.graph;

    GroundTruth& truth = corpus.truth;
    for (const auto& id : origin_ids) truth.origin_of_repo.push_back(*g.find_origin(id));

    corpus.origin_urls.resize(g.origin_count());
    for (std::uint32_t i = 0; i < cfg.repo_count; ++i)
        corpus.origin_urls[truth.origin_of_repo[i]] = repo_url(i);

    std::vector<std::pair<NodeIndex, NodeIndex>> child_parent;
    for (auto [p, c] : forge_pairs)
        child_parent.emplace_back(truth.origin_of_repo[c], truth.origin_of_repo[p]);
    corpus.forks = ForgeForkGraph::from_pairs(g.origin_count(), child_parent);

    truth.type1 = forge_pairs;
    std::sort(truth.type1.begin(), truth.type1.end());
    for (std::uint32_t a = 0; a < cfg.repo_count; ++a) {
        for (std::uint32_t b = a + 1; b < cfg.repo_count; ++b) {
            if (repos[a].history.intersects(repos[b].history)) truth.type2.emplace_back(a, b);
            if (repos[a].rootdirs.intersects(repos[b].rootdirs)) truth.type3.emplace_back(a, b);
        }
    }
    std::set<std::vector<std::uint32_t>> cliques;
    for (std::uint32_t k = 0; k < commits.size(); ++k) {
        if (!commits[k].parents.empty()) continue;
        std::vector<std::uint32_t> members;
        for (std::uint32_t i = 0; i < cfg.repo_count; ++i)
            if (repos[i].history.test(k)) members.push_back(i);
        cliques.insert(std::move(members));
    }
    truth.cliques.assign(cliques.begin(), cliques.end());
    return corpus;
}

HistoryGraph make_chain_corpus(std::size_t commits, std::size_t origins, std::uint64_t seed) {
    if (commits < 1 || origins < 1 || origins > commits)
        throw InvalidArgument("chain corpus needs 1 <= origins <= commits");
    GraphBuilder builder;
    builder.reserve(origins + 2 * commits, origins + 2 * commits);
    GraphBuilder::Handle previous = 0;
    std::vector<GraphBuilder::Handle> chain;
    chain.reserve(commits);
    for (std::size_t k = 0; k < commits; ++k) {
        auto rev = builder.add_node(revision_id(seed, k), NodeKind::Revision);
        auto dir = builder.add_node(rootdir_id(seed, k), NodeKind::RootDirectory);
        builder.add_edge(rev, dir);
        if (k > 0) builder.add_edge(rev, previous);
        previous = rev;
        chain.push_back(rev);
    }
    const std::size_t stride = commits / origins;
    for (std::size_t o = 0; o < origins; ++o) {
        auto h = builder.add_node(ArtifactId::sha1_of("chain origin " + std::to_string(seed) + " " +
                                                      std::to_string(o)),
                                  NodeKind::Origin);
        builder.add_edge(h, chain[commits - 1 - o * stride]);
    }
    return builder.build();
}

}  // namespace forkscope
