#pragma once

#include <optional>

#include "inet/ast.hpp"
#include "inet/match.hpp"

namespace inet {

/// Placement of one reuse annotation: the addressed RHS agent occurrence and
/// the cast symbol, present exactly when that occurrence's symbol differs
/// from the reused cell's symbol.
struct Annotation {
    TermPath path;
    std::optional<SymbolId> cast;
};

struct AnnotationPlan {
    std::optional<Annotation> for_left;
    std::optional<Annotation> for_right;
};

/// Chooses reuse placements for both active-pair cells of an unannotated
/// rule. Each side takes the agent occurrence with the lexicographically
/// highest score, earliest traversal position breaking ties. When both sides
/// prefer the same occurrence, the side with the strictly greater score keeps
/// it (the left side on equal scores) and the other side takes its next-best
/// occurrence. If the RHS has k agent occurrences the plan places min(k, 2)
/// annotations.
AnnotationPlan select_annotations(const Rule& rule);

/// Rewrites the occurrences addressed by the plan into annotated terms,
/// leaving everything else untouched. Throws LoadError when a path does not
/// address an agent.
Rule apply_plan(const Rule& rule, const AnnotationPlan& plan);

/// Replaces annotated terms by the plain agents they stand for; the inverse
/// of apply_plan up to cast bookkeeping.
Rule strip_annotations(const Rule& rule);

/// select_annotations + apply_plan on every rule that carries no manual
/// annotations; already-annotated rules pass through unchanged.
Program derive_program(const Program& program);

/// derive_program with every existing annotation discarded first; used to
/// build the no-reuse baseline.
Program strip_program(const Program& program);

}  // namespace inet
