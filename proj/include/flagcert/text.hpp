#pragma once

// Text form of ring elements, series and 2x2 series matrices.
//
//   series  := ["-"] term (("+"|"-") term)* ["+" "O(t^" int ")"]  |  "O(t^" int ")"
//   term    := coeff ("*" monom)* | monom ("*" monom)*
//   monom   := ("t" | <generator name>) ["^" int]
//   coeff   := int ["/" posint] | "(" ring-expr ")" ["/" "(" ring-expr ")"]
//   matrix  := "[[" series "," series "],[" series "," series "]]"
//
// Whitespace between tokens is ignored. The parenthesised coefficient form
// exists for rational-function coefficients, which the printer emits as
// "(num)/(den)".

#include <array>
#include <string>
#include <string_view>

#include "flagcert/coeffring.hpp"
#include "flagcert/laurent.hpp"

namespace flagcert {

using SeriesGrid = std::array<std::array<LaurentSeries, 2>, 2>;

LaurentSeries series_parse(std::string_view text, const Ring& ring);
std::string series_print(const LaurentSeries& a);

RingElement ring_parse(std::string_view text, const Ring& ring);
std::string ring_print(const RingElement& a);

SeriesGrid grid_parse(std::string_view text, const Ring& ring);
std::string grid_print(const SeriesGrid& g);

}  // namespace flagcert
