#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace diamcover {

// Exact rational scalar. mpq_class keeps values canonicalized (reduced,
// positive denominator) as long as they are built through its operators.
using Rat = mpq_class;

// Parses "123", "-4/7", "3.25", "-.5e2". Returns nullopt on malformed input.
std::optional<Rat> rat_parse(const std::string& s);

// Canonical text form: plain integer when the denominator is 1, exact
// decimal when the denominator divides a power of ten (short expansions
// only), "p/q" otherwise. Stable: equal rationals produce equal strings.
std::string rat_to_string(const Rat& q);

inline Rat rat_from_long(long n, long d = 1) {
  Rat q(n, d);
  q.canonicalize();
  return q;
}

// Floor of a/b as a machine integer; requires the result to fit in long.
long rat_floor_div(const Rat& a, const Rat& b);

}  // namespace diamcover
