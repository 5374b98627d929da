#include "forkscope/relations.hpp"

#include <string>

#include "forkscope/error.hpp"

namespace forkscope {

const char* to_string(ForkType t) {
    switch (t) {
        case ForkType::Type1Forge: return "type1";
        case ForkType::Type2SharedCommit: return "type2";
        case ForkType::Type3SharedRoot: return "type3";
    }
    return "unknown";
}

ForkType parse_fork_type(std::string_view text) {
    if (text == "1") return ForkType::Type1Forge;
    if (text == "2") return ForkType::Type2SharedCommit;
    if (text == "3") return ForkType::Type3SharedRoot;
    throw InvalidArgument("fork type must be 1, 2 or 3, got '" + std::string(text) + "'");
}

bool is_fork(ForkType t, NodeIndex a, NodeIndex b, const HistoryGraph& g, const ForgeForkGraph& f) {
    ForkPredicate pred(g, f);
    return pred(t, a, b);
}

bool ForkPredicate::operator()(ForkType t, NodeIndex a, NodeIndex b) {
    const HistoryGraph& g = *g_;
    for (NodeIndex n : {a, b}) {
        if (!g.valid(n) || g.kind(n) != NodeKind::Origin)
            throw InvalidArgument("node " + std::to_string(n) + " is not an origin");
    }
    if (a == b) throw InvalidArgument("fork relations are defined between distinct origins");
    switch (t) {
        case ForkType::Type1Forge: return b < f_->origin_count() && f_->parent(b) == a;
        case ForkType::Type2SharedCommit: return shares(a, b, NodeKind::Revision);
        case ForkType::Type3SharedRoot: return shares(a, b, NodeKind::RootDirectory);
    }
    return false;
}

// Marks everything of `kind` reachable from a, then walks from b and stops
// at the first marked hit.
bool ForkPredicate::shares(NodeIndex a, NodeIndex b, NodeKind kind) {
    DepthFirstWalk from_a(*g_, a, Direction::Forward, kind, first_);
    while (from_a.next()) {
    }
    DepthFirstWalk from_b(*g_, b, Direction::Forward, kind, second_);
    while (auto n = from_b.next())
        if (first_.visited(*n)) return true;
    return false;
}

}  // namespace forkscope
