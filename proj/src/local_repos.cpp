#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <exception>
#include <functional>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "forkscope/error.hpp"
#include "forkscope/ingest.hpp"

extern char** environ;

namespace forkscope {

namespace {

// Runs argv[0] (looked up in PATH) and feeds each stdout line to on_line.
// Returns the exit status; stderr is discarded.
int run_lines(const std::vector<std::string>& argv,
              const std::function<void(std::string_view)>& on_line) {
    int out_pipe[2];
    if (pipe(out_pipe) != 0) throw IoError(std::string("pipe: ") + std::strerror(errno));

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addclose(&actions, out_pipe[0]);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, out_pipe[1]);
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_t pid;
    int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    close(out_pipe[1]);
    if (rc != 0) {
        close(out_pipe[0]);
        throw IoError("cannot run " + argv[0] + ": " + std::strerror(rc));
    }

    FILE* stream = fdopen(out_pipe[0], "r");
    std::exception_ptr failure;
    std::string line;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, stream)) {
        line += buf;
        if (!line.empty() && line.back() == '\n') {
            line.pop_back();
            if (!failure) {
                try {
                    on_line(line);
                } catch (...) {
                    failure = std::current_exception();
                }
            }
            line.clear();
        }
    }
    if (!line.empty() && !failure) {
        try {
            on_line(line);
        } catch (...) {
            failure = std::current_exception();
        }
    }
    std::fclose(stream);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (failure) std::rethrow_exception(failure);
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128;
}

struct CommitRecord {
    ArtifactId id;
    ArtifactId tree;
    std::vector<ArtifactId> parents;
};

struct RepoHistory {
    std::string label;
    std::vector<CommitRecord> commits;
};

RepoHistory read_repo(const std::filesystem::path& path) {
    std::error_code ec;
    auto canonical = std::filesystem::canonical(path, ec);
    if (ec || !std::filesystem::is_directory(canonical))
        throw IoError(path.string() + ": not a directory");

    RepoHistory repo;
    repo.label = canonical.string();

    std::string git_dir;
    int rc = run_lines({"git", "-C", repo.label, "rev-parse", "--git-dir"},
                       [&](std::string_view l) { git_dir = l; });
    if (rc != 0 || git_dir.empty()) throw IoError(path.string() + ": not a git repository");

    rc = run_lines({"git", "--no-replace-objects", "-C", repo.label, "rev-list", "--all",
                    "--format=%H %T %P"},
                   [&](std::string_view l) {
                       if (l.starts_with("commit ")) return;
                       CommitRecord c;
                       std::size_t pos = 0;
                       int field = 0;
                       while (pos <= l.size()) {
                           auto sp = l.find(' ', pos);
                           if (sp == std::string_view::npos) sp = l.size();
                           auto tok = l.substr(pos, sp - pos);
                           pos = sp + 1;
                           if (tok.empty()) continue;
                           if (!looks_like_hex_id(tok))
                               throw ParseError(path.string() + ": unexpected git output '" +
                                                std::string(l) + "'");
                           auto id = ArtifactId::from_hex(tok);
                           if (field == 0) c.id = id;
                           else if (field == 1) c.tree = id;
                           else c.parents.push_back(id);
                           ++field;
                       }
                       if (field < 2)
                           throw ParseError(path.string() + ": unexpected git output '" +
                                            std::string(l) + "'");
                       repo.commits.push_back(std::move(c));
                   });
    if (rc != 0) throw IoError(path.string() + ": git rev-list failed with status " +
                               std::to_string(rc));
    if (repo.commits.empty()) throw IoError(path.string() + ": repository has no commits");
    return repo;
}

}  // namespace

LocalIngestResult ingest_local_repos(const std::vector<std::filesystem::path>& repos,
                                     unsigned threads) {
    std::vector<RepoHistory> histories(repos.size());
    std::vector<std::exception_ptr> errors(repos.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < repos.size();) {
            try {
                histories[i] = read_repo(repos[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned n_threads = std::max(1u, std::min<unsigned>(threads, repos.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    GraphBuilder builder;
    std::vector<ArtifactId> origin_ids;
    for (const auto& repo : histories) {
        ArtifactId origin = origin_id_for_url("file://" + repo.label);
        origin_ids.push_back(origin);
        auto origin_handle = builder.add_node(origin, NodeKind::Origin);

        std::unordered_map<ArtifactId, GraphBuilder::Handle> local;
        for (const auto& c : repo.commits) local.emplace(c.id, builder.add_node(c.id, NodeKind::Revision));
        std::unordered_set<ArtifactId> has_child;
        for (const auto& c : repo.commits) {
            auto h = local.at(c.id);
            builder.add_edge(h, builder.add_node(c.tree, NodeKind::RootDirectory));
            for (const auto& p : c.parents) {
                // Parents outside the enumeration sit beyond a shallow boundary.
                auto it = local.find(p);
                if (it == local.end()) continue;
                builder.add_edge(h, it->second);
                has_child.insert(p);
            }
        }
        for (const auto& c : repo.commits)
            if (!has_child.contains(c.id)) builder.add_edge(origin_handle, local.at(c.id));
    }

    LocalIngestResult result;
    result.graph = builder.build();
    for (std::size_t i = 0; i < histories.size(); ++i) {
        result.labels.push_back(histories[i].label);
        result.origins.push_back(*result.graph.find_origin(origin_ids[i]));
    }
    return result;
}

}  // namespace forkscope
