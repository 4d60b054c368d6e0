#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace packlim {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long long p, long long q = 1) { return Rat(BigInt(p), BigInt(q)); }

double to_double(const Rat& r);

/// Exact rational value of a finite double.
Rat rat_of_double(double x);

/// Canonical "p/q" form: q > 0, gcd(p,q) = 1, no leading zeros.
std::string format_exact(const Rat& r);

/// Strict parse of the canonical "p/q" form; rejects anything else.
std::optional<Rat> parse_exact(std::string_view s);

/// Shortest decimal string that round-trips to the same double.
std::string format_float(double x);

std::optional<double> parse_float(std::string_view s);

Rat pow_rat(const Rat& base, int exp);

} // namespace packlim
