#pragma once

#include <string_view>

#include "forkscope/forge.hpp"
#include "forkscope/graph.hpp"

namespace forkscope {

/// The three fork definitions.
///  - Type1Forge: b was created by a forge "fork" action on a.
///  - Type2SharedCommit: the histories of a and b share a commit.
///  - Type3SharedRoot: some commit of a and some commit of b have identical
///    root directories. Sharing a sub-directory does not count.
enum class ForkType { Type1Forge = 1, Type2SharedCommit = 2, Type3SharedRoot = 3 };

const char* to_string(ForkType t);
/// Accepts "1", "2", "3". Throws InvalidArgument otherwise.
ForkType parse_fork_type(std::string_view text);

/// Whether b is a fork of a under definition t. Type 1 is directional
/// (true iff the forge records a as b's parent); types 2 and 3 are symmetric.
/// Throws InvalidArgument when a == b or either is not an origin.
bool is_fork(ForkType t, NodeIndex a, NodeIndex b, const HistoryGraph& g, const ForgeForkGraph& f);

/// Reusable-scratch variant for pairwise sweeps.
class ForkPredicate {
  public:
    ForkPredicate(const HistoryGraph& g, const ForgeForkGraph& f) : g_(&g), f_(&f) {}
    bool operator()(ForkType t, NodeIndex a, NodeIndex b);

  private:
    bool shares(NodeIndex a, NodeIndex b, NodeKind kind);

    const HistoryGraph* g_;
    const ForgeForkGraph* f_;
    TraversalScratch first_;
    TraversalScratch second_;
};

}  // namespace forkscope
