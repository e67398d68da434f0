#pragma once

#include <string>

#include "inet/ast.hpp"

namespace inet {

/// Renders AST nodes back to the concrete syntax. For any valid program P,
/// parse_program(render(P)) is structurally identical to P.
std::string render(const Term& term, const SymbolTable& symbols);
std::string render(const Equation& eq, const SymbolTable& symbols);
std::string render(const Rule& rule, const SymbolTable& symbols);
std::string render(const Net& net, const SymbolTable& symbols);
std::string render(const Program& program);

}  // namespace inet
