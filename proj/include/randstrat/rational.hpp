#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "randstrat/error.hpp"

namespace randstrat {

/// Exact probabilities. GMP keeps results of arithmetic canonical; values
/// built from strings go through `parse_rational`, which canonicalises.
using Rational = mpq_class;

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto strip = [](std::string& v) {
    while (!v.empty() && (v.front() == ' ')) v.erase(v.begin());
    while (!v.empty() && (v.back() == ' ')) v.pop_back();
  };
  strip(s);
  if (s.empty()) throw Error(ErrorKind::malformed_document, "empty rational");
  auto valid_int = [](std::string_view v, bool allow_sign) {
    if (v.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (v[0] == '-' || v[0] == '+')) i = 1;
    if (i == v.size()) return false;
    for (; i < v.size(); ++i)
      if (v[i] < '0' || v[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  strip(num);
  strip(den);
  if (!valid_int(num, true) || !valid_int(den, false))
    throw Error(ErrorKind::malformed_document, "bad rational '" + s + "'");
  if (num[0] == '+') num.erase(num.begin());
  Rational r;
  r.get_num() = mpz_class(num);
  r.get_den() = mpz_class(den);
  if (r.get_den() == 0) throw Error(ErrorKind::malformed_document, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

/// "num/den" in lowest terms; integers print without a denominator.
inline std::string format_rational(const Rational& r) { return r.get_str(); }

inline bool is_probability(const Rational& r) { return r >= 0 && r <= 1; }

}  // namespace randstrat
