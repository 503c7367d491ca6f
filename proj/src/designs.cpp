#include "vlab/designs.hpp"

#include <omp.h>

#include <Eigen/QR>
#include <algorithm>
#include <array>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <random>

#include "vlab/error.hpp"
#include "vlab/extremality.hpp"
#include "vlab/kernels.hpp"

namespace vlab {

namespace {

bool exact_supported(const SpaceDescriptor& s) {
  return s.kind == SpaceKind::classic || (s.kind == SpaceKind::exterior && s.wedge == 1);
}

bool wants_s2(Strength s) { return s == Strength::S2; }
bool wants_s22(Strength s) { return s == Strength::S22 || s == Strength::Four; }
bool wants_s4(Strength s) { return s == Strength::S4 || s == Strength::Four; }

std::string pair_key(std::size_t i, std::size_t j) { return "s22:" + std::to_string(i) + "," + std::to_string(j); }

// First and second moments sum_x W_x f_a(x), sum_x W_x f_a(x) f_b(x).
kernels::MomentSums moments(const SpaceDescriptor& space, const std::vector<SymEndo>& basis,
                            const DesignOptions& opts) {
  const std::size_t k = space.points.size();
  if (!opts.weights) {
    const auto ie = integer_epsilon(space, basis);
    bool small = ie.ok;
    for (auto v : ie.num) small = small && v < (std::int64_t{1} << 31) && v > -(std::int64_t{1} << 31);
    if (small) {
      kernels::MomentInput in{ie.points, ie.cols, ie.num, ie.q};
      auto m = opts.parallel ? kernels::moment_sums_parallel(in) : kernels::moment_sums_serial(in);
      const Rat f1 = ie.factor / static_cast<long>(k);
      const Rat f2 = ie.factor * ie.factor / static_cast<long>(k);
      for (auto& x : m.first) x *= f1;
      for (auto& x : m.second) x *= f2;
      return m;
    }
  }
  const RatMatrix e = epsilon_values(space, basis);
  const std::size_t cols = basis.size();
  kernels::MomentSums m{std::vector<Rat>(cols), std::vector<Rat>(cols * (cols + 1) / 2)};
  const Rat equal(1, static_cast<long>(k));
  for (std::size_t i = 0; i < k; ++i) {
    const Rat& w = opts.weights ? (*opts.weights)[i] : equal;
    for (std::size_t a = 0; a < cols; ++a) {
      if (e(i, a) == 0) continue;
      const Rat wa = w * e(i, a);
      m.first[a] += wa;
      for (std::size_t b = a; b < cols; ++b) m.second[kernels::packed_index(a, b, cols)] += wa * e(i, b);
    }
  }
  return m;
}

void check_weights(const SpaceDescriptor& space, const std::optional<RatVector>& w) {
  if (!w) return;
  if (w->size() != space.points.size()) throw DimensionError("one weight per point is required");
  Rat sum = 0;
  for (const auto& x : *w) {
    if (x <= 0) throw PreconditionError("design weights must be positive");
    sum += x;
  }
  if (sum != 1) throw PreconditionError("design weights must sum to 1");
}

// Classic space basis of q; the single point only satisfies validation.
SpaceDescriptor classic_basis(const QForm& q, const Layer& layer) {
  Layer one{layer.radius, {layer.vectors.front()}};
  return classic_space(q, points_from_layer(q, one));
}

// Full symmetric access to the monomial sums.
class MonomialTable {
 public:
  MonomialTable(const kernels::MonomialSums& s) : n_(s.n) {
    for (auto v : s.second) m2_.push_back(from_int128(v));
    for (auto v : s.fourth) m4_.push_back(from_int128(v));
  }

  const Int& m2(std::size_t i, std::size_t j) const {
    return m2_[kernels::monomial_index2(std::min(i, j), std::max(i, j), n_)];
  }

  const Int& m4(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    std::array<std::size_t, 4> t{i, j, k, l};
    std::sort(t.begin(), t.end());
    return m4_[kernels::monomial_index4(t[0], t[1], t[2], t[3], n_)];
  }

 private:
  std::size_t n_;
  std::vector<Int> m2_, m4_;
};

// sum_x x^T a x for a rational matrix a.
Rat quadratic_sum(const MonomialTable& t, const RatMatrix& a) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) s += a(i, j) * t.m2(i, j);
  return s;
}

struct Entry {
  std::size_t i, j;
  Int v;
};

}  // namespace

std::string to_string(Strength s) {
  switch (s) {
    case Strength::S2:
      return "2";
    case Strength::S22:
      return "2,2";
    case Strength::S4:
      return "{4}";
    case Strength::Four:
      return "4";
  }
  return "?";
}

Strength strength_from_string(const std::string& s) {
  if (s == "2" || s == "{2}" || s == "S2") return Strength::S2;
  if (s == "2,2" || s == "{2,2}" || s == "S22") return Strength::S22;
  if (s == "{4}" || s == "S4") return Strength::S4;
  if (s == "4" || s == "Four") return Strength::Four;
  throw ParseError("unknown design strength \"" + s + "\" (2 | 2,2 | {4} | 4)");
}

Rat average_quadratic(const SymEndo& h, std::size_t n) { return trace(h.matrix()) / static_cast<long>(n); }

Rat average_quartic(const SymEndo& h, const SymEndo& j, std::size_t n) {
  const auto nn = static_cast<long>(n);
  const RatMatrix& a = h.matrix();
  const RatMatrix& b = j.matrix();
  Rat hj = 0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a(r, c) != 0 && b(c, r) != 0) hj += a(r, c) * b(c, r);
  return (2 * hj + trace(a) * trace(b)) / (nn * (nn + 2));
}

std::vector<SymEndo> pp2_basis(const SpaceDescriptor& space) {
  const auto& b = space.extended_basis;
  const std::size_t n = space.ambient_dim;
  EchelonBasis span(n * n);
  std::vector<SymEndo> out;
  // Products stay selfadjoint, so the span is full at n(n+1)/2.
  const std::size_t full = n * (n + 1) / 2;
  for (std::size_t i = 0; i < b.size() && out.size() < full; ++i) {
    for (std::size_t j = i; j < b.size() && out.size() < full; ++j) {
      RatMatrix p = b[i].matrix() * b[j].matrix() + b[j].matrix() * b[i].matrix();
      if (span.add(p.data())) out.push_back(SymEndo::make(std::move(p), space.gram));
    }
  }
  return out;
}

DesignVerdict test_design(const SpaceDescriptor& space, Strength strength, const DesignOptions& opts) {
  if (!exact_supported(space)) {
    throw PreconditionError("exact design tests need the classic space; use monte_carlo_design or the "
                            "invariance criterion for " + to_string(space.kind));
  }
  if (space.points.empty()) throw PreconditionError("design test needs a nonempty point set");
  check_weights(space, opts.weights);
  const std::size_t n = space.ambient_dim;
  DesignVerdict v;
  v.strength = strength;
  v.weights = opts.weights;
  v.points = space.points.size();

  const auto& basis = space.extended_basis;
  if (wants_s2(strength) || wants_s22(strength)) {
    const auto m = moments(space, basis, opts);
    if (wants_s2(strength)) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        v.residuals.push_back({"s2:" + std::to_string(j), m.first[j] - average_quadratic(basis[j], n)});
      }
    }
    if (wants_s22(strength)) {
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
          v.residuals.push_back({pair_key(i, j), m.second[kernels::packed_index(i, j, basis.size())] -
                                                     average_quartic(basis[i], basis[j], n)});
        }
    }
  }
  if (wants_s4(strength)) {
    const auto pp = pp2_basis(space);
    DesignOptions first_only = opts;
    const auto m = moments(space, pp, first_only);
    for (std::size_t k = 0; k < pp.size(); ++k) {
      v.residuals.push_back({"s4:" + std::to_string(k), m.first[k] - average_quadratic(pp[k], n)});
    }
  }
  v.holds = std::all_of(v.residuals.begin(), v.residuals.end(), [](const Residual& r) { return r.value == 0; });
  return v;
}

DesignVerdict test_layer_design(const QForm& q, const Layer& layer, Strength strength, bool parallel) {
  if (layer.vectors.empty()) throw PreconditionError("design test needs a nonempty point set");
  const SpaceDescriptor space = classic_basis(q, layer);
  const std::size_t n = q.dim();
  const auto k = static_cast<long>(layer.vectors.size());
  std::vector<const std::int64_t*> pts;
  pts.reserve(layer.vectors.size());
  for (const auto& v : layer.vectors) pts.push_back(v.coords.data());
  const auto sums = parallel ? kernels::monomial_sums_parallel(pts, n, wants_s22(strength))
                             : kernels::monomial_sums_serial(pts, n, wants_s22(strength));
  const MonomialTable table(sums);
  const Rat& r = layer.radius;

  DesignVerdict v;
  v.strength = strength;
  v.points = layer.vectors.size();
  const auto& basis = space.extended_basis;
  // eps_x(B) = x^T (G B) x / r on the whole layer.
  if (wants_s2(strength)) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Rat mean = quadratic_sum(table, q.gram() * basis[j].matrix()) / (r * k);
      v.residuals.push_back({"s2:" + std::to_string(j), mean - average_quadratic(basis[j], n)});
    }
  }
  if (wants_s22(strength)) {
    // Integer matrices d * G B_a, stored sparsely.
    std::vector<RatMatrix> a;
    std::vector<Rat> all;
    for (const auto& b : basis) {
      a.push_back(q.gram() * b.matrix());
      all.insert(all.end(), a.back().data().begin(), a.back().data().end());
    }
    const Int d = lcm_of_denominators(all.data(), all.size());
    std::vector<std::vector<Entry>> sparse(basis.size());
    for (std::size_t t = 0; t < basis.size(); ++t)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (a[t](i, j) != 0) sparse[t].push_back({i, j, Rat(a[t](i, j) * d).get_num()});
    // c_a(k, l) = sum_ij A_a(i, j) M4(i, j, k, l) for k <= l.
    const std::size_t np = n * (n + 1) / 2;
    std::vector<std::vector<Int>> c(basis.size(), std::vector<Int>(np));
    for (std::size_t t = 0; t < basis.size(); ++t)
      for (std::size_t kk = 0; kk < n; ++kk)
        for (std::size_t ll = kk; ll < n; ++ll) {
          Int acc = 0;
          for (const auto& e : sparse[t]) acc += e.v * table.m4(e.i, e.j, kk, ll);
          c[t][kernels::monomial_index2(kk, ll, n)] = acc;
        }
    const Rat scale = Rat(1) / (Rat(d * d) * r * r * k);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i; j < basis.size(); ++j) {
        Int acc = 0;
        for (const auto& e : sparse[j]) acc += e.v * c[i][kernels::monomial_index2(std::min(e.i, e.j), std::max(e.i, e.j), n)];
        v.residuals.push_back({pair_key(i, j), scale * acc - average_quartic(basis[i], basis[j], n)});
      }
  }
  if (wants_s4(strength)) {
    const auto pp = pp2_basis(space);
    for (std::size_t t = 0; t < pp.size(); ++t) {
      const Rat mean = quadratic_sum(table, q.gram() * pp[t].matrix()) / (r * k);
      v.residuals.push_back({"s4:" + std::to_string(t), mean - average_quadratic(pp[t], n)});
    }
  }
  v.holds = std::all_of(v.residuals.begin(), v.residuals.end(), [](const Residual& x) { return x.value == 0; });
  return v;
}

LayersDesignReport test_layers_design(const QForm& q, const Rat& bound, Strength strength,
                                      const EnumOptions& enum_opts, const DesignOptions& opts) {
  LayersDesignReport r;
  for (const auto& layer : vectors_up_to(q, bound, enum_opts)) {
    auto v = opts.weights ? test_design(classic_space(q, points_from_layer(q, layer)), strength, opts)
                          : test_layer_design(q, layer, strength, opts.parallel);
    r.all_hold = r.all_hold && v.holds;
    r.layers.push_back({layer.radius, std::move(v)});
  }
  return r;
}

MonteCarloVerdict monte_carlo_design(const SpaceDescriptor& space, Strength strength, std::size_t samples,
                                     std::uint64_t seed, bool parallel) {
  if (space.kind != SpaceKind::classic && space.kind != SpaceKind::exterior) {
    throw PreconditionError("Monte Carlo design averages are defined for classic and exterior spaces only");
  }
  if (samples == 0 || samples > 100'000'000) throw ResourceError("Monte Carlo sample count must be in [1, 1e8]");
  const std::size_t n = space.base_dim;
  const std::size_t m = space.wedge;
  const std::size_t big = space.ambient_dim;

  // Functions f to average, with their exact design averages.
  std::vector<SymEndo> lin = space.extended_basis;
  const bool s22 = wants_s22(strength);
  if (wants_s4(strength)) {
    const auto pp = pp2_basis(space);
    lin.insert(lin.end(), pp.begin(), pp.end());
  }
  const std::size_t nl = lin.size();
  const std::size_t nb = space.extended_basis.size();
  const RatMatrix e = epsilon_values(space, lin);
  const auto k = static_cast<double>(space.points.size());
  std::vector<std::string> keys;
  std::vector<double> design;
  for (std::size_t a = 0; a < nl; ++a) {
    if (a < nb && strength != Strength::S2) continue;
    if (a >= nb && !wants_s4(strength)) continue;
    Rat s = 0;
    for (std::size_t i = 0; i < e.rows(); ++i) s += e(i, a);
    keys.push_back(a < nb ? "s2:" + std::to_string(a) : "s4:" + std::to_string(a - nb));
    design.push_back(s.get_d() / k);
  }
  if (s22) {
    for (std::size_t a = 0; a < nb; ++a)
      for (std::size_t b = a; b < nb; ++b) {
        Rat s = 0;
        for (std::size_t i = 0; i < e.rows(); ++i) s += e(i, a) * e(i, b);
        keys.push_back(pair_key(a, b));
        design.push_back(s.get_d() / k);
      }
  }
  const std::size_t nf = keys.size();

  const Eigen::MatrixXd base = to_eigen(space.base_gram);
  const Eigen::MatrixXd l = base.llt().matrixL();
  const Eigen::MatrixXd lt_inv = l.transpose().inverse();
  const Eigen::MatrixXd amb = to_eigen(space.gram);
  std::vector<Eigen::MatrixXd> ab;
  for (const auto& h : lin) ab.push_back(amb * to_eigen(h.matrix()));
  const auto subs = subsets(n, m);

  constexpr std::size_t chunk = 1024;
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  std::vector<std::vector<double>> sum(chunks, std::vector<double>(nf, 0.0));
  std::vector<std::vector<double>> sq(chunks, std::vector<double>(nf, 0.0));
  const auto nc = static_cast<std::int64_t>(chunks);

#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::int64_t c = 0; c < nc; ++c) {
    std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(static_cast<std::uint64_t>(c) >> 32)};
    std::mt19937_64 rng(sseq);
    std::normal_distribution<double> gauss;
    const std::size_t begin = static_cast<std::size_t>(c) * chunk;
    const std::size_t end = std::min(samples, begin + chunk);
    std::vector<double> f(nl);
    std::vector<double> vals(nf);
    Eigen::VectorXd xi(big);
    for (std::size_t s = begin; s < end; ++s) {
      Eigen::MatrixXd z(n, n);
      for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = gauss(rng);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
      Eigen::MatrixXd o = qr.householderQ();
      const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (Eigen::Index j = 0; j < o.cols(); ++j)
        if (r(j, j) < 0) o.col(j) *= -1.0;
      // Q-orthogonal k = L^{-T} O L^T; the sample is k applied to the span of
      // the first m basis vectors.
      const Eigen::MatrixXd frame = lt_inv * o * l.transpose().leftCols(m);
      for (std::size_t a = 0; a < subs.size(); ++a) {
        Eigen::MatrixXd minor(m, m);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j)
            minor(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                frame(static_cast<Eigen::Index>(subs[a][i]), static_cast<Eigen::Index>(j));
        xi(static_cast<Eigen::Index>(a)) = m == 1 ? minor(0, 0) : minor.determinant();
      }
      const double qx = xi.dot(amb * xi);
      for (std::size_t a = 0; a < nl; ++a) f[a] = xi.dot(ab[a] * xi) / qx;
      std::size_t t = 0;
      for (std::size_t a = 0; a < nl; ++a) {
        if (a < nb && strength != Strength::S2) continue;
        if (a >= nb && !wants_s4(strength)) continue;
        vals[t++] = f[a];
      }
      if (s22)
        for (std::size_t a = 0; a < nb; ++a)
          for (std::size_t b = a; b < nb; ++b) vals[t++] = f[a] * f[b];
      auto& cs = sum[static_cast<std::size_t>(c)];
      auto& cq = sq[static_cast<std::size_t>(c)];
      for (std::size_t i = 0; i < nf; ++i) {
        cs[i] += vals[i];
        cq[i] += vals[i] * vals[i];
      }
    }
  }

  MonteCarloVerdict v;
  v.strength = strength;
  v.samples = samples;
  v.seed = seed;
  std::vector<kernels::KahanSum> total(nf), total_sq(nf);
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t i = 0; i < nf; ++i) {
      total[i].add(sum[c][i]);
      total_sq[i].add(sq[c][i]);
    }
  const auto ns = static_cast<double>(samples);
  std::size_t random_entries = 0;
  for (std::size_t i = 0; i < nf; ++i) {
    const double mean = total[i].value() / ns;
    const double var = std::max(0.0, total_sq[i].value() / ns - mean * mean) * ns / std::max(1.0, ns - 1);
    McEntry entry{keys[i], design[i] - mean, std::sqrt(var / ns)};
    if (entry.std_error > 1e-12) ++random_entries;
    v.entries.push_back(std::move(entry));
  }
  // Family-wise 3 sigma: per-entry level chosen so that all entries jointly
  // have the two-sided 3 sigma level 0.0027.
  const double alpha = 1.0 - std::pow(1.0 - 0.0026997960632601866, 1.0 / std::max<std::size_t>(1, random_entries));
  v.threshold = boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
  for (const auto& entry : v.entries) {
    if (entry.std_error <= 1e-12) {
      if (std::abs(entry.residual) > 1e-9) v.consistent = false;
      continue;
    }
    const double z = std::abs(entry.residual) / entry.std_error;
    v.max_z = std::max(v.max_z, z);
    if (z > v.threshold) v.consistent = false;
  }
  return v;
}

}  // namespace vlab
