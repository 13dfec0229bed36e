// Textual formats for CLI round-tripping.
//
//   surd   "(P+C*sqrt(D))/R"      coefficient optional, whitespace ignored
//   cf     "[a0;a1,...,(p1,...,pk)]"   parenthesized part is the period
//   form   "[A,B,C]"
//   matrix "a,b,c,d"
#pragma once

#include <string>

#include "modsurf/surd.hpp"

namespace modsurf {

struct Form;  // forms.hpp

QuadSurd parse_surd(const std::string& text);
std::string format_surd(const QuadSurd& x);

CFExpansion parse_cf(const std::string& text);
std::string format_cf(const CFExpansion& e);

std::string format_matrix(const IntMatrix2& m);
IntMatrix2 parse_matrix(const std::string& text);

}  // namespace modsurf
