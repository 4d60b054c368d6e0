#include "packlim/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace packlim {

double to_double(const Rat& r) { return r.convert_to<double>(); }

Rat rat_of_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_of_double: non-finite");
  return Rat(x); // exact: doubles are dyadic rationals
}

std::string format_exact(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace {

bool digits_canonical(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  if (s.size() > 1 && s[0] == '0') return false;
  return true;
}

} // namespace

std::optional<Rat> parse_exact(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  std::string_view num = s.substr(0, slash);
  std::string_view den = s.substr(slash + 1);
  bool neg = !num.empty() && num[0] == '-';
  std::string_view mag = neg ? num.substr(1) : num;
  if (!digits_canonical(mag) || !digits_canonical(den)) return std::nullopt;
  if (neg && mag == "0") return std::nullopt; // "-0/q" is not canonical
  BigInt p{std::string(num)};
  BigInt q{std::string(den)};
  if (q == 0) return std::nullopt;
  if (gcd(abs(p), q) != 1) return std::nullopt;
  return Rat(p, q);
}

std::string format_float(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_float(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

Rat pow_rat(const Rat& base, int exp) {
  if (exp < 0) {
    if (base == 0) throw std::domain_error("pow_rat: zero to negative power");
    return 1 / pow_rat(base, -exp);
  }
  Rat acc = 1;
  Rat b = base;
  int e = exp;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

} // namespace packlim
