#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>

#include "modforms/errors.hpp"

namespace modforms {

// Exact arbitrary-precision rationals. mpq_class keeps every value in
// lowest terms with positive denominator, which makes subspace equality
// a plain data comparison.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "123", "-7" or "num/den" with nonzero denominator.
inline Rat parse_rat(const std::string& s) {
  auto digits = [&s](size_t a, size_t b) {
    if (a < b && s[a] == '-') ++a;
    if (a >= b) return false;
    for (; a < b; ++a)
      if (!std::isdigit(static_cast<unsigned char>(s[a]))) return false;
    return true;
  };
  size_t slash = s.find('/');
  bool ok = slash == std::string::npos
                ? digits(0, s.size())
                : digits(0, slash) && digits(slash + 1, s.size());
  if (!ok) fail_data("parse-error", "bad rational literal '" + s + "'");

  Rat r;
  mpq_set_str(r.get_mpq_t(), s.c_str(), 10);
  if (sgn(Int(r.get_den())) == 0)
    fail_data("parse-error", "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

// "num/den" when den != 1, plain integer otherwise; round-trips exactly.
inline std::string format_rat(const Rat& r) { return r.get_str(); }

}  // namespace modforms
