#include "inet/classify.hpp"

#include "inet/path.hpp"

namespace inet {

const char* to_string(RuleCase c) {
    switch (c) {
        case RuleCase::Case1: return "Case1";
        case RuleCase::Case2: return "Case2";
        case RuleCase::Case3: return "Case3";
    }
    return "?";
}

Classification classify_rule(const Rule& rule) {
    int count = 0;
    for_each_subterm(rule.rhs, [&](const Term& t, const TermPath&) {
        if (t.is_agent_like()) ++count;
    });
    Classification c;
    c.rhs_agent_count = count;
    c.rule_case = count == 2 ? RuleCase::Case1 : count < 2 ? RuleCase::Case2 : RuleCase::Case3;
    return c;
}

}  // namespace inet
