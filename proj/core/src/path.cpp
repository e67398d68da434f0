#include "inet/path.hpp"

#include <cctype>

namespace inet {

std::string path_render(const TermPath& path) {
    std::string out = std::to_string(path.eq_index);
    out += path.side == TermPath::Side::L ? 'L' : 'R';
    out += ':';
    for (int a : path.args) out += std::to_string(a);
    return out;
}

TermPath path_parse(std::string_view text) {
    TermPath p;
    std::size_t i = 0;
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw LoadError("malformed term path: " + std::string(text));
    }
    int eq = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        eq = eq * 10 + (text[i] - '0');
        ++i;
    }
    p.eq_index = eq;
    if (i >= text.size() || (text[i] != 'L' && text[i] != 'R')) {
        throw LoadError("malformed term path: " + std::string(text));
    }
    p.side = text[i] == 'L' ? TermPath::Side::L : TermPath::Side::R;
    ++i;
    if (i >= text.size() || text[i] != ':') {
        throw LoadError("malformed term path: " + std::string(text));
    }
    ++i;
    // Argument positions are single digits; port capacity is capped at 9.
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '0') {
            throw LoadError("malformed term path: " + std::string(text));
        }
        p.args.push_back(text[i] - '0');
    }
    return p;
}

const Term& path_resolve(std::span<const Equation> rhs, const TermPath& path) {
    if (path.eq_index < 1 || static_cast<std::size_t>(path.eq_index) > rhs.size()) {
        throw LoadError("term path " + path_render(path) + " outside equation range");
    }
    const Equation& eq = rhs[static_cast<std::size_t>(path.eq_index - 1)];
    const Term* t = path.side == TermPath::Side::L ? eq.left.get() : eq.right.get();
    for (int a : path.args) {
        if (a < 1 || static_cast<std::size_t>(a) > t->args.size()) {
            throw LoadError("term path " + path_render(path) + " outside argument range");
        }
        t = t->args[static_cast<std::size_t>(a - 1)].get();
    }
    return *t;
}

namespace {

void walk(const Term& t, TermPath& path,
          const std::function<void(const Term&, const TermPath&)>& fn) {
    fn(t, path);
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        path.args.push_back(static_cast<int>(i + 1));
        walk(*t.args[i], path, fn);
        path.args.pop_back();
    }
}

}  // namespace

void for_each_subterm(std::span<const Equation> rhs,
                      const std::function<void(const Term&, const TermPath&)>& fn) {
    for (std::size_t e = 0; e < rhs.size(); ++e) {
        TermPath p;
        p.eq_index = static_cast<int>(e + 1);
        p.side = TermPath::Side::L;
        walk(*rhs[e].left, p, fn);
        p.side = TermPath::Side::R;
        p.args.clear();
        walk(*rhs[e].right, p, fn);
    }
}

}  // namespace inet
