#pragma once

#include <vector>

#include "inet/ast.hpp"

namespace inet {

struct ValidateOptions {
    int port_capacity = 4;  // fixed cell size; at most 9 so paths stay single-digit
};

/// Checks every program invariant:
///   - every name occurs exactly twice in a rule, at most twice in a net;
///   - at most one unguarded rule per unordered symbol pair;
///   - attribute slots match the symbol's attribute count, guard variables
///     are bound, attribute variables and port names do not collide;
///   - annotations appear only in rule RHSs, at most one *L and one *R per
///     rule, and annotated terms have the arity of the cell they reuse;
///   - net interface names are the free names of the net;
///   - every arity fits within port_capacity.
/// Returns one diagnostic per violation; empty means the program is valid.
std::vector<Diagnostic> validate(const Program& program, ValidateOptions options = {});

/// A program that passed validation, together with the options it was
/// validated under. Compilation and net building take this as input.
struct CheckedProgram {
    Program program;
    ValidateOptions options;
};

/// Runs validate() and either returns the checked program or throws
/// ValidationError carrying all diagnostics.
CheckedProgram check(Program program, ValidateOptions options = {});

}  // namespace inet
