#include "vlab/extremality.hpp"

#include <numeric>

#include "vlab/error.hpp"
#include "vlab/kernels.hpp"
#include "vlab/lp.hpp"
#include "vlab/modular.hpp"

namespace vlab {

namespace {

// Primitive integer multiple of a rational vector.
std::optional<std::vector<std::int64_t>> primitive(const RatVector& v) {
  Int l = lcm_of_denominators(v.data(), v.size());
  Int g = 0;
  std::vector<Int> z;
  for (const auto& x : v) {
    Rat s = x * l;
    z.push_back(s.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.back().get_mpz_t());
  }
  std::vector<std::int64_t> out;
  for (auto& x : z) {
    x /= g;
    if (!x.fits_slong_p()) return std::nullopt;
    out.push_back(x.get_si());
  }
  return out;
}

// Integer matrix m and positive denominator d with m / d = a.
std::pair<std::vector<std::int64_t>, Int> integer_scaled(const RatMatrix& a, bool* ok) {
  const Int d = lcm_of_denominators(a.data().data(), a.data().size());
  std::vector<std::int64_t> m;
  for (const auto& x : a.data()) {
    Rat s = x * d;
    if (!s.get_num().fits_slong_p()) *ok = false;
    m.push_back(*ok ? s.get_num().get_si() : 0);
  }
  return {std::move(m), d};
}

__int128 quad(const std::vector<std::int64_t>& m, const std::vector<std::int64_t>& x) {
  const std::size_t n = x.size();
  __int128 acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    __int128 row = 0;
    for (std::size_t j = 0; j < n; ++j) row += static_cast<__int128>(m[i * n + j]) * x[j];
    acc += row * x[i];
  }
  return acc;
}

bool fits64(__int128 v) { return v <= INT64_MAX && v >= INT64_MIN; }

RatMatrix combine(const std::vector<SymEndo>& basis, std::span<const Rat> c) {
  const std::size_t n = basis.front().dim();
  RatMatrix h(n, n);
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] != 0) h = h + c[j] * basis[j].matrix();
  return h;
}

}  // namespace

IntegerEpsilon integer_epsilon(const SpaceDescriptor& space, const std::vector<SymEndo>& basis) {
  IntegerEpsilon out;
  out.points = space.points.size();
  out.cols = basis.size();
  bool ok = true;
  auto [a, a_den] = integer_scaled(space.gram, &ok);
  // Common denominator for all A B_j.
  std::vector<RatMatrix> ab;
  std::vector<Rat> all;
  for (const auto& b : basis) {
    ab.push_back(space.gram * b.matrix());
    all.insert(all.end(), ab.back().data().begin(), ab.back().data().end());
  }
  const Int d = lcm_of_denominators(all.data(), all.size());
  std::vector<std::vector<std::int64_t>> m;
  for (const auto& x : ab) {
    std::vector<std::int64_t> row;
    for (const auto& e : x.data()) {
      Rat s = e * d;
      if (!s.get_num().fits_slong_p()) ok = false;
      row.push_back(ok ? s.get_num().get_si() : 0);
    }
    m.push_back(std::move(row));
  }
  if (!ok) return out;
  out.num.reserve(out.points * out.cols);
  for (const auto& p : space.points) {
    auto x = primitive(p.coords);
    if (!x) return out;
    const __int128 q = quad(a, *x);
    if (!fits64(q) || q <= 0) return out;
    out.q.push_back(static_cast<std::int64_t>(q));
    for (const auto& mj : m) {
      const __int128 v = quad(mj, *x);
      if (!fits64(v)) return out;
      out.num.push_back(static_cast<std::int64_t>(v));
    }
  }
  // eps = (x^T (d A B) x / d) / (x^T (a_den A) x / a_den)
  out.factor = make_rat(a_den, d);
  out.ok = true;
  return out;
}

EpsilonMatrix epsilon_matrix(const SpaceDescriptor& space) { return {epsilon_values(space, space.extended_basis)}; }

RatMatrix epsilon_values(const SpaceDescriptor& space, const std::vector<SymEndo>& basis) {
  const std::size_t k = space.points.size();
  RatMatrix e(k, basis.size());
  const auto fast = integer_epsilon(space, basis);
  if (fast.ok) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        e(i, j) = fast.factor * make_rat(Int(static_cast<long>(fast.num[i * basis.size() + j])),
                                         Int(static_cast<long>(fast.q[i])));
    return e;
  }
  std::vector<RatMatrix> ab;
  for (const auto& b : basis) ab.push_back(space.gram * b.matrix());
  for (std::size_t i = 0; i < k; ++i) {
    const auto& p = space.points[i];
    for (std::size_t j = 0; j < basis.size(); ++j) e(i, j) = dot(p.coords, ab[j] * p.coords) / p.value;
  }
  return e;
}

EutaxyVerdict test_eutaxy(const SpaceDescriptor& space) {
  const EpsilonMatrix em = epsilon_matrix(space);
  const RatMatrix& e = em.values;
  const std::size_t k = e.rows();
  const std::size_t d = e.cols();
  const std::size_t gp = space.gp_dim();
  EutaxyVerdict v;

  v.strongly_eutactic = true;
  RatVector colsum(d, Rat(0));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < k; ++i) colsum[j] += e(i, j);
    if (j < gp && colsum[j] != 0) v.strongly_eutactic = false;
  }

  // Equal weights are optimal for the max-min LP whenever they are feasible.
  if (v.strongly_eutactic && k > 0) {
    v.eutactic = true;
    v.margin = space.tau[d - 1] / Rat(static_cast<long>(k));
    v.weights = RatVector(k, v.margin);
    return v;
  }

  // Variables u_0..u_{k-1}, t.
  RatMatrix a(d, k + 1);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < k; ++i) a(j, i) = e(i, j);
    a(j, k) = colsum[j];
  }
  RatVector c(k + 1, Rat(0));
  c[k] = 1;
  const auto lp = simplex_max(a, space.tau, c);
  if (lp.status == LpStatus::optimal) {
    v.margin = lp.x[k];
    if (v.margin > 0) {
      v.eutactic = true;
      RatVector w(k);
      for (std::size_t i = 0; i < k; ++i) w[i] = lp.x[i] + lp.x[k];
      v.weights = std::move(w);
      return v;
    }
  }
  if (lp.status == LpStatus::unbounded) throw Error("internal: eutaxy LP unbounded");

  // Alternative: H in gp with eps_x(H) >= 0 for all x and sum_x eps_x(H) = 1.
  // Variables h+ (gp), h- (gp), slack s (k).
  if (gp == 0) return v;
  RatMatrix b(k + 1, 2 * gp + k);
  RatVector rhs(k + 1, Rat(0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < gp; ++j) {
      b(i, j) = e(i, j);
      b(i, gp + j) = -e(i, j);
    }
    b(i, 2 * gp + i) = -1;
  }
  for (std::size_t j = 0; j < gp; ++j) {
    b(k, j) = colsum[j];
    b(k, gp + j) = -colsum[j];
  }
  rhs[k] = 1;
  const auto alt = simplex_max(b, rhs, RatVector(2 * gp + k, Rat(0)));
  if (alt.status == LpStatus::optimal) {
    RatVector h(gp);
    for (std::size_t j = 0; j < gp; ++j) h[j] = alt.x[j] - alt.x[gp + j];
    v.violating_direction = std::move(h);
  }
  return v;
}

PerfectionVerdict test_perfection(const SpaceDescriptor& space) {
  PerfectionVerdict v;
  const auto& basis = space.extended_basis;
  const std::size_t d = basis.size();
  const std::size_t n = space.ambient_dim;
  v.gp_dim = space.gp_dim();
  v.rank = d - certified_kernel(epsilon_matrix(space).values).basis.size();
  v.perfect = v.rank == d;
  v.weakly_perfect = v.perfect;
  // A common kernel direction c would give eps_x(sum c_j B_j) = 0 for all x.
  if (v.perfect) return v;

  // A: sum_j c_j B_j x = 0 for every point x.
  RatMatrix sys(space.points.size() * n, d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t p = 0; p < space.points.size(); ++p) {
      const RatVector bx = basis[j].matrix() * space.points[p].coords;
      for (std::size_t i = 0; i < n; ++i) sys(p * n + i, j) = bx[i];
    }
  }
  for (const auto& c : certified_kernel(sys).basis) {
    v.kernel_basis.push_back(SymEndo::make(combine(basis, c), space.gram));
  }
  v.perfect = v.rank == d;
  v.weakly_perfect = v.rank == d - v.kernel_basis.size();
  if (v.weakly_perfect && !v.perfect) v.reducible_subspace = reducibility_subspace(v);
  return v;
}

std::vector<RatVector> reducibility_subspace(const PerfectionVerdict& v) {
  if (!v.weakly_perfect || v.perfect) {
    throw PreconditionError("reducibility subspace needs a weakly perfect, non-perfect configuration");
  }
  const std::size_t n = v.kernel_basis.front().dim();
  RatMatrix stacked(0, n);
  for (const auto& h : v.kernel_basis)
    for (std::size_t i = 0; i < n; ++i) stacked.append_row(h.matrix().row(i));
  return kernel(stacked);
}

std::string to_string(Extremality e) {
  switch (e) {
    case Extremality::strictly_extreme:
      return "strictly_extreme";
    case Extremality::extreme:
      return "extreme";
    case Extremality::not_extreme:
      return "not_extreme";
    case Extremality::inconclusive:
      return "inconclusive";
  }
  return "?";
}

SpaceDescriptor restrict_points(const SpaceDescriptor& space, const std::vector<std::size_t>& idx) {
  SpaceDescriptor s = space;
  s.points.clear();
  s.primal_points = 0;
  for (auto i : idx) {
    s.points.push_back(space.points.at(i));
    if (i < space.primal_points) ++s.primal_points;
  }
  return s;
}

ExtremalityReport classify_extremality(const SpaceDescriptor& space, const ExtremalityOptions& opts) {
  ExtremalityReport r;
  r.classes = space.points.size();
  r.eutaxy = test_eutaxy(space);
  r.perfection = test_perfection(space);
  if (r.eutaxy.eutactic && r.perfection.perfect) {
    r.verdict = Extremality::strictly_extreme;
    return r;
  }
  std::vector<std::size_t> all(r.classes);
  std::iota(all.begin(), all.end(), 0);
  if (r.eutaxy.eutactic && r.perfection.weakly_perfect) {
    r.verdict = Extremality::extreme;
    r.witness = all;
    return r;
  }
  if (r.classes > opts.subset_limit || r.classes >= 63) {
    r.verdict = Extremality::inconclusive;
    return r;
  }
  r.subset_search = true;
  const std::uint64_t full = (std::uint64_t{1} << r.classes) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < r.classes; ++i)
      if (mask >> i & 1U) idx.push_back(i);
    ++r.subsets_checked;
    const auto sub = restrict_points(space, idx);
    if (!test_eutaxy(sub).eutactic) continue;
    if (!test_perfection(sub).weakly_perfect) continue;
    r.verdict = Extremality::extreme;
    r.witness = std::move(idx);
    return r;
  }
  r.verdict = Extremality::not_extreme;
  return r;
}

LayerVoronoi layer_voronoi(const QForm& q, const Layer& layer, const LayerVoronoiOptions& opts) {
  if (layer.vectors.empty()) throw PreconditionError("layer is empty");
  const std::size_t n = q.dim();
  const SpaceDescriptor space = classic_space(q, points_from_layer(q, Layer{layer.radius, {layer.vectors.front()}}));
  const auto& basis = space.extended_basis;
  const std::size_t d = basis.size();
  LayerVoronoi v;
  v.dim = d;

  // Integer matrices c * G B_j.
  std::vector<RatMatrix> a;
  std::vector<Rat> all;
  for (const auto& b : basis) {
    a.push_back(q.gram() * b.matrix());
    all.insert(all.end(), a.back().data().begin(), a.back().data().end());
  }
  const Int c = lcm_of_denominators(all.data(), all.size());
  std::vector<std::vector<std::int64_t>> m;
  for (const auto& x : a) {
    std::vector<std::int64_t> row;
    for (const auto& e : x.data()) row.push_back(to_int64(Rat(e * c).get_num()));
    m.push_back(std::move(row));
  }

  std::vector<const std::int64_t*> pts;
  for (const auto& x : layer.vectors) pts.push_back(x.coords.data());
  const auto sums = opts.parallel ? kernels::monomial_sums_parallel(pts, n, false)
                                  : kernels::monomial_sums_serial(pts, n, false);
  v.strongly_eutactic = true;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    Int s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const std::int64_t e = m[j][i * n + k];
        if (e != 0) s += Int(static_cast<long>(e)) * from_int128(sums.second[kernels::monomial_index2(std::min(i, k), std::max(i, k), n)]);
      }
    if (s != 0) v.strongly_eutactic = false;
  }
  if (!opts.rank) return v;

  ModularEchelon ech(d);
  std::vector<Int> row(d);
  // Layers are sorted, so consecutive vectors are alike; a stride coprime to the
  // size visits them in a scattered order and reaches full rank sooner.
  const std::size_t size = layer.vectors.size();
  std::size_t stride = 7919;
  while (std::gcd(stride, size) != 1) stride += 2;
  for (std::size_t t = 0, p = 0; t < size && !ech.full(); ++t, p = (p + stride) % size) {
    for (std::size_t j = 0; j < d; ++j) row[j] = from_int128(quad(m[j], layer.vectors[p].coords));
    ech.add_integers(row);
  }
  if (ech.full()) {
    v.rank = d;
    v.perfect = true;
    return v;
  }
  if (layer.vectors.size() > opts.max_exact_points) {
    throw ResourceError("layer of " + std::to_string(layer.vectors.size()) +
                        " classes is not perfect mod p; the exact rank needs the rational point path");
  }
  v.rank = test_perfection(classic_space(q, points_from_layer(q, layer))).rank;
  v.perfect = v.rank == d;
  return v;
}

}  // namespace vlab
