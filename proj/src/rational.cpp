#include "vlab/rational.hpp"

#include <cctype>

#include "vlab/error.hpp"

namespace vlab {

Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool parse_integer(std::string_view s, Int& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) return false;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
  }
  std::string digits(s.substr(s[0] == '+' ? 1 : 0));
  return out.set_str(digits, 10) == 0;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  auto slash = text.find('/');
  Int num;
  Int den = 1;
  if (slash == std::string_view::npos) {
    if (!parse_integer(text, num)) throw ParseError("not a rational number: '" + std::string(text) + "'");
    return Rat(num);
  }
  if (!parse_integer(text.substr(0, slash), num) || !parse_integer(text.substr(slash + 1), den)) {
    throw ParseError("not a rational number: '" + std::string(text) + "'");
  }
  if (den <= 0) throw ParseError("denominator must be positive: '" + std::string(text) + "'");
  Int g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g != 1) throw ParseError("rational not in lowest terms: '" + std::string(text) + "'");
  return make_rat(num, den);
}

std::string to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rat& r) { return r.get_d(); }

bool is_integer(const Rat& r) { return r.get_den() == 1; }

Int floor_sqrt(const Rat& r) {
  if (r < 0) throw PreconditionError("floor_sqrt of a negative number");
  // floor(sqrt(p/q)) = floor(sqrt(p*q) / q) = floor(isqrt(p*q) / q).
  Int pq = r.get_num() * r.get_den();
  Int s;
  mpz_sqrt(s.get_mpz_t(), pq.get_mpz_t());
  Int out;
  mpz_fdiv_q(out.get_mpz_t(), s.get_mpz_t(), r.get_den().get_mpz_t());
  return out;
}

std::optional<Rat> exact_root(const Rat& r, unsigned k) {
  if (r < 0) throw PreconditionError("exact_root of a negative number");
  if (k == 0) throw PreconditionError("exact_root with k = 0");
  Int p, q;
  if (mpz_root(p.get_mpz_t(), r.get_num().get_mpz_t(), k) == 0) return std::nullopt;
  if (mpz_root(q.get_mpz_t(), r.get_den().get_mpz_t(), k) == 0) return std::nullopt;
  return make_rat(p, q);
}

std::int64_t to_int64(const Int& z) {
  if (!z.fits_slong_p()) throw ResourceError("integer exceeds 64-bit range: " + z.get_str());
  return z.get_si();
}

Int lcm_of_denominators(const Rat* first, std::size_t count) {
  Int l = 1;
  for (std::size_t i = 0; i < count; ++i) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), first[i].get_den().get_mpz_t());
  }
  return l;
}

Int from_int128(__int128 v) {
  const bool neg = v < 0;
  const unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Int hi = static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64));
  Int lo = static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  Int r = (hi << 64) + lo;
  return neg ? Int(-r) : r;
}

}  // namespace vlab
