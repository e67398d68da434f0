#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace inet::corpus {

/// Canonical sources for the four bundled systems. The rule blocks match the
/// checked-in .inet files under corpus/.
std::string addition_rules();
std::string ackermann_rules();
std::string insertion_sort_rules();
std::string reverse_rules();

/// Unary numeral S(S(...Z)) and integer list Cons{v1}(...(Nil)).
std::string unary(int n);
std::string int_list(std::span<const std::int64_t> values);

/// Full program texts: rules plus a net computing the given instance.
std::string addition_program(int m, int n);        // add(m, n), interface r
std::string ackermann_program(int m, int n);       // ack(m, n), interface r
std::string insertion_sort_program(std::span<const std::int64_t> values);
std::string reverse_program(std::span<const std::int64_t> values);

}  // namespace inet::corpus
