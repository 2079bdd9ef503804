#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cantor {

// All probability arithmetic runs on exact rationals. GMP's mpq_class keeps
// values canonical (reduced, positive denominator) through arithmetic as long
// as every value entering the computation is canonical, so construction goes
// through the helpers below.
using Int = mpz_class;
using Rat = mpq_class;

// num/den reduced to canonical form. Throws PreconditionError on den == 0.
Rat make_rat(const Int& num, const Int& den);

// 2^k for any integer k (k may be negative).
Rat pow2(long k);

// r^k for k >= 0, with r^0 == 1 even at r == 0.
Rat rat_pow(const Rat& r, unsigned long k);

// Binomial coefficient as an exact integer.
Int binomial(unsigned long n, unsigned long k);

// Accepts "p", "-p", "p/q" with optional sign on p; q must be positive.
// Throws ParseError on anything else.
Rat parse_rat(std::string_view text);

// Canonical "p/q" rendering; the denominator is always present ("0/1", "3/4").
std::string rat_string(const Rat& r);

// Decimal rendering rounded half-up to `digits` fractional digits.
// Deterministic; used for the human-readable CSV/JSON columns.
std::string decimal_string(const Rat& r, int digits = 12);

// log2(r) for r > 0, rounded to the nearest multiple of 1/grid.
// Exact (no rounding) when r is a power of two. Throws PreconditionError
// for r <= 0.
Rat log2_approx(const Rat& r, long grid = 1000000);

}  // namespace cantor
