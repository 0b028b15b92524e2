#pragma once

#include "virtheta/rayclass.hpp"

namespace virtheta {

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Prime of norm p (or p^2 when p is inert). Pinned choices:
//   D=-2:  P3  = (1+w)
//   D=-30: P13 = (10+w)/(P2 P5)
//   D=-10: P13 = (5+2w)/P5
// Otherwise the split prime with the smallest HNF b. `bar` selects the conjugate.
QIdeal named_prime(const Field& K, i64 p, bool bar = false);

// Elements: sums of integer terms and multiples of w (ω) or s (sqrt D), e.g. "1+2*w", "-3s", "5".
QuadInt parse_element(const Field& K, const std::string& text);

// Ideals: products (by '*' or juxtaposition) of integers, named primes P<p>[bar], and generator lists
// "(g1,g2,...)"; any factor may carry "^e" with e possibly negative.
QIdeal parse_ideal(const Field& K, const std::string& text);

// Class specs: products of "[elem]", "[ideal]" (each optionally "^e"), with an optional final CRT item
// "[r1,...,rn]@F=f1*...*fn" whose components are prime-power factors of the conductor.
RayClassRef parse_class(const GroupPtr& G, const std::string& text);

}  // namespace virtheta
