#pragma once

#include <string_view>

#include "inet/ast.hpp"

namespace inet {

/// Parses the textual calculus:
///
///   rule       :=  pattern >< pattern [ | guard ] => eq, ... ;
///   pattern    :=  Symbol [ { attrvar } ] [ ( name, ... ) ]
///   eq         :=  term ~ term
///   term       :=  name
///               |  Symbol [ { attrexpr } ] [ ( term, ... ) ]
///               |  (*L) [ Symbol ] [ { attrexpr } ] [ ( term, ... ) ]   (same for (*R))
///   net        :=  net eq, ... ; interface name, ... ;
///
/// Symbols start with an uppercase letter, names with a lowercase letter.
/// `#` starts a line comment. Throws ParseError with position on failure.
Program parse_program(std::string_view text);

}  // namespace inet
