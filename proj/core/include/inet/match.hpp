#pragma once

#include <span>
#include <string>
#include <vector>

#include "inet/ast.hpp"
#include "inet/path.hpp"

namespace inet {

/// Similarity score of one RHS subterm against an active-pair pattern.
/// agent_pts is 1 when the symbols are equal (attributes are ignored);
/// name_pts counts argument positions whose RHS argument is exactly the
/// pattern's parameter name at the same position, stopping at the shorter
/// argument list. Compared lexicographically, agent_pts first.
struct Score {
    int agent_pts = 0;
    int name_pts = 0;

    friend bool operator==(const Score& a, const Score& b) {
        return a.agent_pts == b.agent_pts && a.name_pts == b.name_pts;
    }
    friend bool operator<(const Score& a, const Score& b) {
        if (a.agent_pts != b.agent_pts) return a.agent_pts < b.agent_pts;
        return a.name_pts < b.name_pts;
    }
};

struct MatchEntry {
    Score score;
    TermPath path;
    bool is_agent = false;  // names always score (0,0) and are never reuse targets
};

using MatchResult = std::vector<MatchEntry>;

/// Scores every subterm occurrence of `rhs` against the given active-pair
/// side, in traversal order, one entry per occurrence.
MatchResult match_score(const RulePattern& pattern, std::span<const Equation> rhs);

/// Renders a result in the canonical list form used by golden tests:
/// "[((1,1),1L:), ((0,1),1L:1), ...]".
std::string render_match(const MatchResult& result);

}  // namespace inet
