#include "vlab/spaces.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "vlab/error.hpp"

namespace vlab {

namespace {

// Symmetric unit matrices, diagonal entries first, then (i, j) with i < j.
std::vector<RatMatrix> symmetric_units(std::size_t n) {
  std::vector<RatMatrix> out;
  for (std::size_t i = 0; i < n; ++i) {
    RatMatrix e(n, n);
    e(i, i) = 1;
    out.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RatMatrix e(n, n);
      e(i, j) = e(j, i) = 1;
      out.push_back(std::move(e));
    }
  return out;
}

RatVector flatten(const RatMatrix& m) { return m.data(); }

// Basis of the selfadjoint H = G^{-1} S satisfying constraints(H) = 0.
std::vector<SymEndo> selfadjoint_solutions(const RatMatrix& gram,
                                           const std::function<RatVector(const RatMatrix&)>& constraints) {
  const RatMatrix ginv = inverse(gram);
  std::vector<RatMatrix> hs;
  for (const auto& e : symmetric_units(gram.rows())) hs.push_back(ginv * e);
  std::vector<RatVector> cols;
  for (const auto& h : hs) cols.push_back(constraints(h));
  const std::size_t rows = cols.front().size();
  RatMatrix a(rows, hs.size());
  for (std::size_t k = 0; k < hs.size(); ++k)
    for (std::size_t r = 0; r < rows; ++r) a(r, k) = cols[k][r];
  std::vector<SymEndo> out;
  for (const auto& c : kernel(a)) {
    RatMatrix h(gram.rows(), gram.rows());
    for (std::size_t k = 0; k < hs.size(); ++k)
      if (c[k] != 0) h = h + c[k] * hs[k];
    out.push_back(SymEndo::make(std::move(h), gram));
  }
  return out;
}

RatVector with_trace(RatVector v, const RatMatrix& h) {
  v.push_back(trace(h));
  return v;
}

SpaceDescriptor finish(SpaceKind kind, std::string label, RatMatrix gram, std::vector<SymEndo> gp,
                       std::vector<SpacePoint> points, const QForm& base) {
  if (points.empty()) throw PreconditionError("space needs a nonempty point set");
  SpaceDescriptor s;
  s.kind = kind;
  s.label = std::move(label);
  s.ambient_dim = gram.rows();
  s.gp_basis = std::move(gp);
  s.extended_basis = s.gp_basis;
  s.extended_basis.push_back(SymEndo::identity(s.ambient_dim));
  s.tau.assign(s.extended_basis.size(), Rat(0));
  s.tau.back() = 1;
  s.gram = std::move(gram);
  s.points = std::move(points);
  s.base_dim = base.dim();
  s.base_gram = base.gram();
  return s;
}

Rat gram_det_int(const std::vector<std::int64_t>& g, std::size_t stride, const std::vector<std::size_t>& idx,
                 const Int& den) {
  const std::size_t m = idx.size();
  RatMatrix a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = Rat(static_cast<long>(g[idx[i] * stride + idx[j]]));
  Rat d = determinant(std::move(a));
  Int dm;
  mpz_pow_ui(dm.get_mpz_t(), den.get_mpz_t(), m);
  return d / dm;
}

// Fraction-free determinant in 128-bit integers; entries must be small.
__int128 bareiss128(std::vector<__int128> a, std::size_t m) {
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (a[k * m + k] == 0) {
      std::size_t p = k + 1;
      while (p < m && a[p * m + k] == 0) ++p;
      if (p == m) return 0;
      for (std::size_t j = 0; j < m; ++j) std::swap(a[k * m + j], a[p * m + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < m; ++i)
      for (std::size_t j = k + 1; j < m; ++j)
        a[i * m + j] = (a[i * m + j] * a[k * m + k] - a[i * m + k] * a[k * m + j]) / prev;
    prev = a[k * m + k];
  }
  return sign * a[m * m - 1];
}

struct TupleSearch {
  Rat min_det;
  std::vector<RatVector> pluecker;  // canonical sign, sorted, unique
};

RatVector pluecker_vector(const std::vector<const IntVector*>& tuple, const std::vector<std::vector<std::size_t>>& subs) {
  const std::size_t m = tuple.size();
  RatVector out;
  out.reserve(subs.size());
  for (const auto& rows : subs) {
    RatMatrix a(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a(i, j) = Rat(static_cast<long>(tuple[j]->coords[rows[i]]));
    out.push_back(determinant(std::move(a)));
  }
  for (const auto& v : out) {
    if (v == 0) continue;
    if (v < 0)
      for (auto& w : out) w = -w;
    break;
  }
  return out;
}

TupleSearch minimal_tuples(const QForm& q, std::size_t m, const Rat& bound, const EnumOptions& opts) {
  std::vector<IntVector> reps;
  for (auto& l : vectors_up_to(q, bound, opts))
    for (auto& v : l.vectors) reps.push_back(std::move(v));
  const std::size_t n = q.dim();
  const std::size_t count = reps.size();
  if (count < m) throw PreconditionError("fewer than m vectors below the bound; raise --bound");

  // Number of m-subsets, guarded against overflow.
  long double combos = 1;
  for (std::size_t i = 0; i < m; ++i) combos = combos * static_cast<long double>(count - i) / (i + 1);
  if (combos > 5e7L) throw ResourceError("exterior tuple search needs more than 5e7 tuples; lower --bound");

  // Pairwise integer Gram numerators.
  std::vector<std::int64_t> g(count * count);
  std::int64_t largest = 0;
  const auto& ig = q.integer_gram();
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = a; b < count; ++b) {
      Int s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (reps[a].coords[i] == 0) continue;
        Int row = 0;
        for (std::size_t j = 0; j < n; ++j) row += ig[i * n + j] * static_cast<long>(reps[b].coords[j]);
        s += row * static_cast<long>(reps[a].coords[i]);
      }
      g[a * count + b] = g[b * count + a] = to_int64(s);
      largest = std::max(largest, s < 0 ? -to_int64(s) : to_int64(s));
    }
  const bool fast = largest <= 10000 && m <= 8;

  std::optional<Int> best;
  std::vector<std::vector<std::size_t>> winners;
  std::vector<std::size_t> idx(m);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
    if (depth == m) {
      Int d;
      if (fast) {
        std::vector<__int128> a(m * m);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) a[i * m + j] = g[idx[i] * count + idx[j]];
        const __int128 v = bareiss128(std::move(a), m);
        if (v <= 0) return;
        d = Int(static_cast<long>(v));
      } else {
        Rat r = gram_det_int(g, count, idx, Int(1));
        if (r <= 0) return;
        d = r.get_num();
      }
      if (!best || d < *best) {
        best = d;
        winners.clear();
      }
      if (d == *best) winners.push_back(idx);
      return;
    }
    for (std::size_t i = start; i + (m - depth) <= count; ++i) {
      idx[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
  if (!best) throw PreconditionError("no linearly independent m-tuple below the bound; raise --bound");

  Int dm;
  mpz_pow_ui(dm.get_mpz_t(), q.denominator().get_mpz_t(), m);
  TupleSearch out{make_rat(*best, dm), {}};
  const auto subs = subsets(n, m);
  std::set<RatVector> seen;
  for (const auto& w : winners) {
    std::vector<const IntVector*> tuple;
    for (auto i : w) tuple.push_back(&reps[i]);
    seen.insert(pluecker_vector(tuple, subs));
  }
  out.pluecker.assign(seen.begin(), seen.end());
  return out;
}

void check_range(const QForm& q, std::size_t m) {
  if (m < 1 || 2 * m > q.dim()) {
    throw PreconditionError("exterior power needs 1 <= m <= n/2, got m = " + std::to_string(m) + " for n = " +
                            std::to_string(q.dim()));
  }
}

}  // namespace

std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::classic:
      return "classic";
    case SpaceKind::invariant:
      return "invariant";
    case SpaceKind::isodual:
      return "isodual";
    case SpaceKind::duality_product:
      return "dual-product";
    case SpaceKind::exterior:
      return "exterior";
  }
  return "?";
}

SpaceKind space_kind_from_string(const std::string& s) {
  for (auto k : {SpaceKind::classic, SpaceKind::invariant, SpaceKind::isodual, SpaceKind::duality_product,
                 SpaceKind::exterior}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError("unknown space \"" + s + "\" (classic|invariant|isodual|dual-product|exterior)");
}

void validate(const SpaceDescriptor& s) {
  const std::size_t n = s.ambient_dim;
  EchelonBasis span(n * n);
  for (std::size_t k = 0; k < s.gp_basis.size(); ++k) {
    const auto& h = s.gp_basis[k].matrix();
    if (!is_selfadjoint(h, s.gram)) throw Error("gp basis element " + std::to_string(k) + " is not selfadjoint");
    if (!span.add(flatten(h))) throw Error("gp basis element " + std::to_string(k) + " is dependent");
  }
  if (span.contains(flatten(RatMatrix::identity(n)))) throw Error("identity lies in the span of gp");
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    const auto& p = s.points[k];
    if (p.coords.size() != n || dot(p.coords, s.gram * p.coords) != p.value) {
      throw Error("point " + std::to_string(k) + " has an inexact value");
    }
  }
}

std::vector<SpacePoint> points_from_layer(const QForm& q, const Layer& layer) {
  std::vector<SpacePoint> pts;
  pts.reserve(layer.vectors.size());
  for (const auto& v : layer.vectors) pts.push_back({to_rational(v), eval(q, v.span())});
  return pts;
}

SpaceDescriptor classic_space(const QForm& q, std::vector<SpacePoint> points) {
  auto gp = selfadjoint_solutions(q.gram(), [](const RatMatrix& h) { return RatVector{trace(h)}; });
  return finish(SpaceKind::classic, "classic", q.gram(), std::move(gp), std::move(points), q);
}

SpaceDescriptor invariant_family_space(const QForm& q, std::vector<SpacePoint> points, GroupGenSet generators) {
  check_generators(q, generators);
  const auto& gens = generators.generators;
  auto gp = selfadjoint_solutions(q.gram(), [&](const RatMatrix& h) {
    RatVector v;
    for (const auto& g : gens) {
      const RatMatrix c = h * g - g * h;
      v.insert(v.end(), c.data().begin(), c.data().end());
    }
    return with_trace(std::move(v), h);
  });
  return finish(SpaceKind::invariant, "invariant(" + std::to_string(gens.size()) + " generators)", q.gram(),
                std::move(gp), std::move(points), q);
}

SpaceDescriptor isodual_family_space(const QForm& q, std::vector<SpacePoint> points, const RatMatrix& sigma) {
  if (sigma.rows() != q.dim() || sigma.cols() != q.dim()) throw ParseError("sigma has the wrong size");
  if (transpose(sigma) * q.gram() * sigma != q.gram()) throw ParseError("sigma is not orthogonal for the form");
  auto gp = selfadjoint_solutions(q.gram(), [&](const RatMatrix& h) {
    const RatMatrix c = sigma * h + h * sigma;
    return with_trace(c.data(), h);
  });
  return finish(SpaceKind::isodual, "isodual", q.gram(), std::move(gp), std::move(points), q);
}

SpaceDescriptor duality_product_space(const QForm& q, const EnumOptions& opts) {
  const std::size_t n = q.dim();
  const QForm dual = dual_form(q);
  const RatMatrix ambient = block_diagonal(q.gram(), dual.gram());
  const RatMatrix ginv = inverse(q.gram());

  std::vector<SymEndo> gp;
  for (const auto& e : symmetric_units(n)) {
    const RatMatrix h = ginv * e;
    gp.push_back(SymEndo::make(block_diagonal(h, Rat(-1) * transpose(h)), ambient));
  }

  std::vector<SpacePoint> pts;
  const auto lift = [&](const Layer& layer, const QForm& f, std::size_t offset) {
    for (const auto& v : layer.vectors) {
      RatVector c(2 * n, Rat(0));
      for (std::size_t i = 0; i < n; ++i) c[offset + i] = v.coords[i];
      pts.push_back({std::move(c), eval(f, v.span())});
    }
  };
  lift(minimal_vectors(q, opts), q, 0);
  const std::size_t primal = pts.size();
  lift(minimal_vectors(dual, opts), dual, n);
  auto s = finish(SpaceKind::duality_product, "dual-product", ambient, std::move(gp), std::move(pts), q);
  s.primal_points = primal;
  return s;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == m) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

RatMatrix compound_matrix(const RatMatrix& g, std::size_t m) {
  const auto subs = subsets(g.rows(), m);
  RatMatrix c(subs.size(), subs.size());
  for (std::size_t a = 0; a < subs.size(); ++a)
    for (std::size_t b = 0; b < subs.size(); ++b) {
      RatMatrix minor(m, m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) minor(i, j) = g(subs[a][i], subs[b][j]);
      c(a, b) = determinant(std::move(minor));
    }
  return c;
}

RatMatrix derivation_action(const RatMatrix& h, std::size_t m) {
  const std::size_t n = h.rows();
  const auto subs = subsets(n, m);
  const auto index_of = [&](const std::vector<std::size_t>& s) {
    return static_cast<std::size_t>(std::lower_bound(subs.begin(), subs.end(), s) - subs.begin());
  };
  RatMatrix out(subs.size(), subs.size());
  for (std::size_t b = 0; b < subs.size(); ++b) {
    const auto& s = subs[b];
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        if (h(j, s[k]) == 0) continue;
        // Replace e_{s[k]} by e_j, then sort with the permutation sign.
        std::vector<std::size_t> t = s;
        t[k] = j;
        if (std::count(t.begin(), t.end(), j) > 1) continue;
        int sign = 1;
        for (std::size_t x = 0; x < m; ++x)
          for (std::size_t y = x + 1; y < m; ++y)
            if (t[x] > t[y]) sign = -sign;
        std::sort(t.begin(), t.end());
        out(index_of(t), b) += sign * h(j, s[k]);
      }
    }
  }
  return out;
}

SpaceDescriptor exterior_power_space(const QForm& q, std::size_t m, const Rat& bound, const EnumOptions& opts) {
  check_range(q, m);
  const RatMatrix ambient = compound_matrix(q.gram(), m);
  const auto classic = selfadjoint_solutions(q.gram(), [](const RatMatrix& h) { return RatVector{trace(h)}; });
  std::vector<SymEndo> gp;
  for (const auto& h : classic) gp.push_back(SymEndo::make(derivation_action(h.matrix(), m), ambient));

  const auto found = minimal_tuples(q, m, bound, opts);
  std::vector<SpacePoint> pts;
  for (const auto& p : found.pluecker) pts.push_back({p, found.min_det});
  auto s = finish(SpaceKind::exterior, "exterior(m=" + std::to_string(m) + ")", ambient, std::move(gp),
                  std::move(pts), q);
  s.wedge = m;
  return s;
}

RankinResult rankin_invariant(const QForm& q, std::size_t m, const Rat& bound, const EnumOptions& opts) {
  check_range(q, m);
  const auto found = minimal_tuples(q, m, bound, opts);
  RankinResult r;
  r.m = m;
  r.bound = bound;
  r.min_det = found.min_det;
  r.tuples = found.pluecker.size();
  const Rat det = determinant(q);
  Rat det_m = 1;
  for (std::size_t i = 0; i < m; ++i) det_m *= det;
  if (auto root = exact_root(det_m, static_cast<unsigned>(q.dim()))) r.exact = found.min_det / *root;
  r.value = r.exact ? r.exact->get_d()
                    : std::exp(std::log(found.min_det.get_d()) -
                               static_cast<double>(m) / static_cast<double>(q.dim()) * std::log(det.get_d()));
  return r;
}

}  // namespace vlab
