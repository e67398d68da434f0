#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inet/ast.hpp"

namespace inet {

/// Address of a subterm occurrence within an equation sequence: 1-based
/// equation index, L or R side, then a trail of 1-based argument positions.
/// Renders as e.g. "2L:12" (second equation, left side, argument 1 then 2).
struct TermPath {
    enum class Side { L, R };

    int eq_index = 1;
    Side side = Side::L;
    std::vector<int> args;

    friend bool operator==(const TermPath& a, const TermPath& b) {
        return a.eq_index == b.eq_index && a.side == b.side && a.args == b.args;
    }
};

std::string path_render(const TermPath& path);
TermPath path_parse(std::string_view text);  // throws LoadError on malformed input

/// Returns the subterm addressed by `path`. Throws LoadError when any
/// component is out of range.
const Term& path_resolve(std::span<const Equation> rhs, const TermPath& path);

/// Visits every subterm occurrence exactly once, in rule traversal order:
/// equations left to right, the L side of each equation fully before the R
/// side, and within a term the node before its arguments, left to right.
void for_each_subterm(std::span<const Equation> rhs,
                      const std::function<void(const Term&, const TermPath&)>& fn);

}  // namespace inet
