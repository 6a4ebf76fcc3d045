// Copyright 2026 the lotsplit project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOTSPLIT_RATIONAL_HPP_
#define LOTSPLIT_RATIONAL_HPP_

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace lotsplit {

// Exact rational scalar; nothing in this library is ever rounded.
using Rat = mpq_class;
using Int = mpz_class;

// mpq_class(num, den) does not reduce the fraction; this does.
inline Rat make_rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Accepts decimal integers ("7", "-3") and fractions ("3/4", "-6/8").
inline Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("whitespace in rational literal: '" + text +
                                  "'");
    }
  }
  mpq_t raw;
  mpq_init(raw);
  if (mpq_set_str(raw, text.c_str(), 10) != 0) {
    mpq_clear(raw);
    throw std::invalid_argument("malformed rational literal: '" + text + "'");
  }
  if (mpz_sgn(mpq_denref(raw)) == 0) {
    mpq_clear(raw);
    throw std::invalid_argument("zero denominator: '" + text + "'");
  }
  Rat q(raw);
  mpq_clear(raw);
  q.canonicalize();
  return q;
}

// Canonical form: "a" or "a/b" with b > 1 and gcd(a, b) = 1. Parsing the
// result reproduces the value bit-exactly.
inline std::string to_string(const Rat& q) { return q.get_str(); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

inline long long to_long(const Int& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer out of range");
  return z.get_si();
}

inline std::string join_rationals(const std::vector<Rat>& v,
                                  const std::string& sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += sep;
    out += v[i].get_str();
  }
  return out;
}

}  // namespace lotsplit

#endif  // LOTSPLIT_RATIONAL_HPP_
