// Exact rational numbers used for every probability, utility and expectation.
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace subtree {

using Rational = mpq_class;

/// Parses an integer ("-3"), a fraction ("6/5") or a finite decimal
/// ("0.6", "-1.25e0" is rejected) into an exact, canonicalized rational.
/// Throws subtree::Error{ErrorCode::parse} on malformed input.
Rational parse_rational(std::string_view text);

/// Always "p/q" with q > 0, including integers ("2/1").
std::string to_fraction_string(const Rational& value);

/// Shortest exact form: "2", "-1/5".
std::string to_short_string(const Rational& value);

}  // namespace subtree
