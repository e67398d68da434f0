#include "inet/match.hpp"

namespace inet {

MatchResult match_score(const RulePattern& pattern, std::span<const Equation> rhs) {
    MatchResult result;
    for_each_subterm(rhs, [&](const Term& t, const TermPath& path) {
        MatchEntry entry;
        entry.path = path;
        if (t.is_agent_like()) {
            entry.is_agent = true;
            if (t.kind == Term::Kind::Agent && t.sym == pattern.sym) entry.score.agent_pts = 1;
            std::size_t n = std::min(pattern.params.size(), t.args.size());
            for (std::size_t i = 0; i < n; ++i) {
                if (t.args[i]->is_name() && t.args[i]->name == pattern.params[i]) {
                    ++entry.score.name_pts;
                }
            }
        }
        result.push_back(std::move(entry));
    });
    return result;
}

std::string render_match(const MatchResult& result) {
    std::string out = "[";
    for (std::size_t i = 0; i < result.size(); ++i) {
        if (i) out += ", ";
        out += "((" + std::to_string(result[i].score.agent_pts) + "," +
               std::to_string(result[i].score.name_pts) + ")," + path_render(result[i].path) + ")";
    }
    out += "]";
    return out;
}

}  // namespace inet
