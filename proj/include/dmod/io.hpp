#pragma once

#include <string>
#include <string_view>

#include "dmod/polynomial.hpp"
#include "dmod/weyl.hpp"

namespace dmod {

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' uint)?
//   base   := rat | var | '(' expr ')'
//   var    := ('x'|'d') uint          1-based, at most m
//   rat    := ['-'] uint ['/' uint]
// '*' is the noncommutative product, evaluated left to right. A '-' that is
// not followed by a digit negates the base after it, so "-x1" is accepted.
WeylOp parse_operator(std::string_view text, int m, Field field);

/// Graded-lex descending, explicit '*', e.g. "x1^2*d1 - 2*x1 + 1/2".
std::string to_string(const WeylOp& a);
std::string to_string(const Polynomial& p);

} // namespace dmod
