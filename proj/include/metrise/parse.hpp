#pragma once

#include <string>

#include "metrise/poly.hpp"

namespace metrise {

/// Parse expression text over the declared variables into canonical form.
/// Grammar: expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
/// factor := base ('^' nonneg-integer)? ;
/// base := integer | integer'/'positive-integer | identifier | '(' expr ')'.
/// Unary minus permitted before a term; whitespace insignificant.
Poly parse_poly(const std::string& text, const VarsPtr& variables);

} // namespace metrise
