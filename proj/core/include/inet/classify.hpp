#pragma once

#include "inet/ast.hpp"

namespace inet {

/// In-place classification of a rule by the number of agent occurrences in
/// its RHS (names excluded). Case 1: exactly two — both active-pair cells can
/// be reused and firing never grows the store. Case 2: fewer than two. Case
/// 3: more than two — reuse still applies but fresh cells are needed.
enum class RuleCase { Case1, Case2, Case3 };

const char* to_string(RuleCase c);

struct Classification {
    RuleCase rule_case = RuleCase::Case2;
    int rhs_agent_count = 0;
};

Classification classify_rule(const Rule& rule);

}  // namespace inet
