#include "vlab/modular.hpp"

#include <cstdint>
#include <optional>

namespace vlab {

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mod_reduce(unsigned __int128 x) {
  std::uint64_t lo = static_cast<std::uint64_t>(x & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
  std::uint64_t r = lo + hi;
  while (r >= kPrime) r -= kPrime;
  return r;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  return mod_reduce(static_cast<unsigned __int128>(a) * b);
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r >= kPrime ? r - kPrime : r;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, b);
    b = mul_mod(b, b);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a) { return pow_mod(a, kPrime - 2); }

std::uint64_t to_mod(const Int& z) {
  static const Int p(std::to_string(kPrime));
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t());
  return mpz_get_ui(r.get_mpz_t());
}

// Wang's rational reconstruction with symmetric bound sqrt(p/2).
std::optional<Rat> reconstruct(std::uint64_t a) {
  const Int p(std::to_string(kPrime));
  Int bound;
  Int half = p / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  Int r0 = p, r1(std::to_string(a));
  Int t0 = 0, t1 = 1;
  while (r1 > bound) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    Int t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  Int g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  return make_rat(r1, t1);
}

}  // namespace

bool ModularEchelon::add(std::span<const Rat> row) {
  const Int l = lcm_of_denominators(row.data(), row.size());
  std::vector<std::uint64_t> w(cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    Rat scaled = row[j] * l;
    w[j] = to_mod(scaled.get_num());
  }
  return insert(std::move(w));
}

bool ModularEchelon::add_integers(std::span<const Int> row) {
  std::vector<std::uint64_t> w(cols_);
  for (std::size_t j = 0; j < cols_; ++j) w[j] = to_mod(row[j]);
  return insert(std::move(w));
}

bool ModularEchelon::insert(std::vector<std::uint64_t> w) {
  const std::size_t n = cols_;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::uint64_t f = w[pivots_[k]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (rows_[k][j] != 0) w[j] = sub_mod(w[j], mul_mod(f, rows_[k][j]));
    }
  }
  std::size_t p = 0;
  while (p < n && w[p] == 0) ++p;
  if (p == n) return false;
  const std::uint64_t inv = inv_mod(w[p]);
  for (auto& x : w) x = mul_mod(x, inv);
  for (auto& r : rows_) {
    const std::uint64_t f = r[p];
    if (f == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (w[j] != 0) r[j] = sub_mod(r[j], mul_mod(f, w[j]));
    }
  }
  rows_.push_back(std::move(w));
  pivots_.push_back(p);
  return true;
}

CertifiedKernel certified_kernel(const RatMatrix& a) {
  const std::size_t n = a.cols();
  CertifiedKernel out;

  ModularEchelon ech(n);
  for (std::size_t i = 0; i < a.rows() && !ech.full(); ++i) ech.add(a.row(i));
  const auto& rows = ech.rows();
  const auto& pivots = ech.pivots();
  out.rank_mod_p = rows.size();

  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  bool ok = true;
  for (std::size_t f = 0; f < n && ok; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(n);
    v[f] = 1;
    for (std::size_t k = 0; k < rows.size() && ok; ++k) {
      std::uint64_t val = sub_mod(0, rows[k][f]);
      auto r = reconstruct(val);
      if (!r) {
        ok = false;
        break;
      }
      v[pivots[k]] = *r;
    }
    if (!ok) break;
    auto av = a * std::span<const Rat>(v);
    for (const auto& x : av) {
      if (sgn(x) != 0) {
        ok = false;
        break;
      }
    }
    out.basis.push_back(std::move(v));
  }
  if (ok) {
    for (auto& v : out.basis) {
      for (const auto& x : v) {
        if (sgn(x) != 0) {
          if (sgn(x) < 0) {
            for (auto& y : v) y = -y;
          }
          break;
        }
      }
    }
    out.modular_path = true;
    return out;
  }
  out.basis = kernel(a);
  out.modular_path = false;
  return out;
}

}  // namespace vlab
