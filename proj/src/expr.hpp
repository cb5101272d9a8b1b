#pragma once

#include <string>
#include <string_view>

#include "ring.hpp"

namespace pa {

/// Parses an infix group-ring expression such as "1 - u1 - u2" or
/// "4 - u1 - u1^-1 - u2 - u2^-1".
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (['*'] unary | '/' integer)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ['^' ['('] ['-'] integer [')']]
///   primary := integer | decimal | 'u' | 'u1' | 'u2' | 'u3' | 'u4' | '(' expr ')'
///
/// 'u' is u1. Negative exponents are allowed on single-term elements only.
/// The Unicode minus sign is accepted. Errors carry the column.
ExactElement parse_expression(std::string_view text, const GroupDescriptor& group);

/// Inverse of parse_expression up to formatting: "4 - u1 - u1^-1".
std::string format_expression(const ExactElement& e);

}  // namespace pa
