#pragma once

#include <set>
#include <string>

#include "slhkit/operator_expr.hpp"

namespace slh {

// Parses the textual operator language produced by OperatorExpr::str() plus a
// few conveniences:
//
//   expr    := ['-'] term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := primary ['^' INT]
//   primary := NUMBER | 'i' | 'pi' | '(' expr ')'
//            | ('sin'|'cos'|'expi') '(' linear ')'
//            | 'inv' '(' expr ')'
//            | 'conj' '(' IDENT ')'
//            | ('X'|'Y'|'Z'|'a'|'adag'|'sp'|'sm'|'p0'|'p1') '[' LABEL ']'
//            | IDENT
//
// sp/sm are the raising/lowering operators and p0/p1 the level projectors
// (expanded into the canonical basis).  Identifiers are real-valued scalar
// symbols unless listed in complex_names.  Trig arguments must be linear in
// real symbols; 'pi' is a numeric constant.
OperatorExpr parse_operator(const std::string& text,
                            const std::set<std::string>& complex_names = {});

// Same language restricted to scalars; throws if an operator factor appears.
ScalarExpr parse_scalar(const std::string& text,
                        const std::set<std::string>& complex_names = {});

}  // namespace slh
