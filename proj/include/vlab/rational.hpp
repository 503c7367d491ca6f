#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vlab {

// Exact rational. gmpxx keeps results of arithmetic canonical (reduced, positive
// denominator); values built from raw numerator/denominator pairs go through
// make_rat, which canonicalizes.
using Rat = mpq_class;
using Int = mpz_class;

Rat make_rat(const Int& num, const Int& den);

// Parses "p", "-p" or "p/q". Throws ParseError unless the fraction is in lowest
// terms with q > 0.
Rat parse_rat(std::string_view text);

// "p" for integers, "p/q" otherwise.
std::string to_string(const Rat& r);

double to_double(const Rat& r);

bool is_integer(const Rat& r);

// floor(sqrt(r)) for r >= 0.
Int floor_sqrt(const Rat& r);

// The exact k-th root of r when it is rational, nullopt otherwise. r >= 0.
std::optional<Rat> exact_root(const Rat& r, unsigned k);

// Fits in int64 or throws ResourceError.
std::int64_t to_int64(const Int& z);

Int from_int128(__int128 v);

Int lcm_of_denominators(const Rat* first, std::size_t count);

}  // namespace vlab
