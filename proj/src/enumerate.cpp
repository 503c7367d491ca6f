#include "vlab/enumerate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>

#include "vlab/error.hpp"
#include "vlab/kernels.hpp"

namespace vlab {

namespace {

Int floor_of(const Rat& r) {
  Int f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return f;
}

// x = U y, with U an n x n int64 matrix (row-major). Throws on int64 overflow.
std::vector<std::int64_t> transform_coords(const std::vector<std::int64_t>& u, std::span<const std::int64_t> y) {
  const std::size_t n = y.size();
  std::vector<std::int64_t> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += static_cast<__int128>(u[i * n + j]) * y[j];
    if (acc > INT64_MAX || acc < INT64_MIN) throw ResourceError("lattice coordinates exceed 64 bits");
    x[i] = static_cast<std::int64_t>(acc);
  }
  return x;
}

RatMatrix to_rat_matrix(const std::vector<std::int64_t>& u, std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n * n; ++i) m(i / n, i % n) = Rat(static_cast<long>(u[i]));
  return m;
}

// Exact values of the candidates, grouped into layers with radius <= bound.
std::vector<Layer> collect(const QForm& q, const Rat& bound, std::vector<IntVector> candidates) {
  std::map<Int, std::vector<IntVector>> by_value;
  const Rat limit = bound * q.denominator();
  for (auto& v : candidates) {
    Int num = eval_numerator(q, v.span());
    if (num > limit) continue;
    by_value[num].push_back(std::move(v));
  }
  std::vector<Layer> layers;
  layers.reserve(by_value.size());
  for (auto& [num, vecs] : by_value) {
    std::sort(vecs.begin(), vecs.end());
    vecs.erase(std::unique(vecs.begin(), vecs.end()), vecs.end());
    layers.push_back({make_rat(num, q.denominator()), std::move(vecs)});
  }
  return layers;
}

// Float LLL on the Gram matrix, U tracked in int64. The Gram of the current
// basis is recomputed from U after every change.
class Lll {
 public:
  explicit Lll(const QForm& q) : n_(q.dim()), g_(q.gram_double()), u_(n_ * n_, 0) {
    for (std::size_t i = 0; i < n_; ++i) u_[i * n_ + i] = 1;
  }

  std::vector<std::int64_t> run() {
    refresh();
    std::size_t k = 1;
    std::size_t guard = 0;
    while (k < n_) {
      if (++guard > 1'000'000) throw ResourceError("LLL did not terminate");
      for (std::size_t j = k; j-- > 0;) {
        const double r = std::nearbyint(mu_(k, j));
        if (r != 0.0) {
          add_column(k, j, -static_cast<std::int64_t>(r));
          refresh();
        }
      }
      if (b_[k] < (0.99 - mu_(k, k - 1) * mu_(k, k - 1)) * b_[k - 1]) {
        for (std::size_t i = 0; i < n_; ++i) std::swap(u_[i * n_ + k], u_[i * n_ + k - 1]);
        refresh();
        k = std::max<std::size_t>(k - 1, 1);
      } else {
        ++k;
      }
    }
    return u_;
  }

 private:
  double& mu_(std::size_t i, std::size_t j) { return mu_data_[i * n_ + j]; }

  void add_column(std::size_t k, std::size_t j, std::int64_t r) {
    for (std::size_t i = 0; i < n_; ++i) {
      const __int128 v = static_cast<__int128>(u_[i * n_ + k]) + static_cast<__int128>(r) * u_[i * n_ + j];
      if (v > INT64_MAX || v < INT64_MIN) throw ResourceError("LLL transform exceeds 64 bits");
      u_[i * n_ + k] = static_cast<std::int64_t>(v);
    }
  }

  void refresh() {
    Eigen::MatrixXd u(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) u(i, j) = static_cast<double>(u_[i * n_ + j]);
    const Eigen::MatrixXd gc = u.transpose() * g_ * u;
    mu_data_.assign(n_ * n_, 0.0);
    b_.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double v = gc(i, j);
        for (std::size_t l = 0; l < j; ++l) v -= mu_(j, l) * mu_(i, l) * b_[l];
        mu_(i, j) = v / b_[j];
      }
      double v = gc(i, i);
      for (std::size_t l = 0; l < i; ++l) v -= mu_(i, l) * mu_(i, l) * b_[l];
      b_[i] = v;
    }
  }

  std::size_t n_;
  Eigen::MatrixXd g_;
  std::vector<std::int64_t> u_;
  std::vector<double> mu_data_;
  std::vector<double> b_;
};

}  // namespace

RatVector to_rational(const IntVector& v) {
  RatVector r;
  r.reserve(v.size());
  for (auto c : v.coords) r.emplace_back(static_cast<long>(c));
  return r;
}

IntVector canonical_sign(IntVector v) {
  for (auto c : v.coords) {
    if (c == 0) continue;
    if (c < 0) {
      for (auto& x : v.coords) x = -x;
    }
    break;
  }
  return v;
}

std::uint64_t default_node_budget() {
  constexpr std::uint64_t fallback = 100'000'000;
  const char* env = std::getenv("VLAB_NODE_BUDGET");
  if (env == nullptr || *env == '\0') return fallback;
  std::uint64_t v = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || ptr != end || v == 0) {
    throw ParseError(std::string("VLAB_NODE_BUDGET must be a positive integer, got \"") + env + "\"");
  }
  return v;
}

std::vector<std::int64_t> lll_transform(const QForm& q) { return Lll(q).run(); }

std::vector<Layer> vectors_up_to(const QForm& q, const Rat& bound, const EnumOptions& opts) {
  if (bound <= 0) throw PreconditionError("enumeration bound must be positive");
  const std::size_t n = q.dim();
  const auto u = lll_transform(q);
  const RatMatrix ur = to_rat_matrix(u, n);
  const RatMatrix gr = transpose(ur) * q.gram() * ur;

  kernels::TreeProblem p;
  p.n = n;
  p.diag.assign(n, 0.0);
  p.mu.assign(n * n, 0.0);
  const Eigen::MatrixXd a = to_eigen(gr);
  for (std::size_t i = 0; i < n; ++i) {
    double d = a(i, i);
    for (std::size_t k = 0; k < i; ++k) d -= p.diag[k] * p.mu[i * n + k] * p.mu[i * n + k];
    p.diag[i] = d;
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = a(j, i);
      for (std::size_t k = 0; k < i; ++k) v -= p.diag[k] * p.mu[j * n + k] * p.mu[i * n + k];
      p.mu[j * n + i] = v / d;
    }
  }
  p.bound = bound.get_d() * (1.0 + 1e-9);

  auto ys = opts.parallel ? kernels::tree_search_parallel(p, opts.node_budget)
                          : kernels::tree_search_serial(p, opts.node_budget);
  std::vector<IntVector> candidates;
  candidates.reserve(ys.size());
  for (const auto& y : ys) candidates.push_back(canonical_sign(IntVector{transform_coords(u, y)}));
  return collect(q, bound, std::move(candidates));
}

Layer minimal_vectors(const QForm& q, const EnumOptions& opts) {
  const std::size_t n = q.dim();
  const auto u = lll_transform(q);
  const RatMatrix ur = to_rat_matrix(u, n);
  const RatMatrix gr = transpose(ur) * q.gram() * ur;
  Rat bound = gr(0, 0);
  for (std::size_t i = 1; i < n; ++i) bound = std::min(bound, gr(i, i));
  auto layers = vectors_up_to(q, bound, opts);
  if (layers.empty()) throw Error("internal: no vector found below a basis vector's value");
  return std::move(layers.front());
}

std::vector<Layer> brute_force_oracle(const QForm& q, const Rat& bound, const OracleLimits& limits) {
  if (bound <= 0) throw PreconditionError("enumeration bound must be positive");
  const std::size_t n = q.dim();
  if (n > limits.max_dim) {
    throw ResourceError("brute-force oracle limited to dimension " + std::to_string(limits.max_dim));
  }

  // Pairwise reduction of the dual Gram D by column operations M; the primal
  // basis change is W = M^{-T}, and D becomes the inverse Gram of that basis.
  RatMatrix d = inverse(q.gram());
  RatMatrix m = RatMatrix::identity(n);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const Rat two = 2 * abs(d(i, j));
        if (two <= d(j, j)) continue;
        const Int r = floor_of(d(i, j) / d(j, j) + Rat(1, 2));
        if (r == 0) continue;
        for (std::size_t k = 0; k < n; ++k) d(k, i) -= r * d(k, j);
        for (std::size_t k = 0; k < n; ++k) d(i, k) -= r * d(j, k);
        for (std::size_t k = 0; k < n; ++k) m(k, i) -= r * m(k, j);
        changed = true;
      }
    }
  }
  const RatMatrix w = transpose(inverse(m));
  std::vector<std::int64_t> wi(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    const Rat& e = w(i / n, i % n);
    if (!is_integer(e)) throw Error("internal: reduction transform is not unimodular");
    wi[i] = to_int64(e.get_num());
  }
  const RatMatrix gw = transpose(w) * q.gram() * w;

  kernels::BoxProblem p;
  p.n = n;
  std::uint64_t box = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t r = to_int64(floor_sqrt(bound * d(i, i)));
    p.radius.push_back(r);
    const auto side = static_cast<std::uint64_t>(2 * r + 1);
    if (box > limits.max_box / side) {
      throw ResourceError("brute-force box exceeds " + std::to_string(limits.max_box) + " points");
    }
    box *= side;
  }
  for (const auto& e : gw.data()) p.gram.push_back(to_int64(Rat(e * q.denominator()).get_num()));
  p.limit = to_int64(floor_of(bound * q.denominator()));

  auto ys = limits.parallel ? kernels::box_scan_parallel(p) : kernels::box_scan_serial(p);
  std::vector<IntVector> candidates;
  for (const auto& y : ys) {
    IntVector x{transform_coords(wi, y)};
    if (canonical_sign(x) == x) candidates.push_back(std::move(x));
  }
  return collect(q, bound, std::move(candidates));
}

json layers_to_json(const std::vector<Layer>& layers) {
  json radii = json::array();
  json counts = json::array();
  json vectors = json::object();
  for (const auto& l : layers) {
    radii.push_back(rat_to_json(l.radius));
    counts.push_back(l.count());
    json vs = json::array();
    for (const auto& v : l.vectors) vs.push_back(v.coords);
    vectors[to_string(l.radius)] = std::move(vs);
  }
  return {{"radii", radii}, {"counts", counts}, {"vectors", vectors}};
}

std::vector<Layer> layers_from_json(const json& j) {
  if (!j.is_object() || !j.contains("radii") || !j.contains("vectors")) {
    throw ParseError("layer JSON needs \"radii\" and \"vectors\"");
  }
  std::vector<Layer> layers;
  for (const auto& r : j.at("radii")) {
    Layer l{rat_from_json(r), {}};
    const auto key = to_string(l.radius);
    if (!j.at("vectors").contains(key)) throw ParseError("layer JSON has no vectors for radius " + key);
    for (const auto& v : j.at("vectors").at(key)) l.vectors.push_back({v.get<std::vector<std::int64_t>>()});
    layers.push_back(std::move(l));
  }
  if (j.contains("counts")) {
    const auto& c = j.at("counts");
    if (!c.is_array() || c.size() != layers.size()) throw ParseError("layer JSON: counts do not match radii");
    for (std::size_t i = 0; i < layers.size(); ++i) {
      if (c[i].get<std::size_t>() != layers[i].count()) throw ParseError("layer JSON: count mismatch");
    }
  }
  return layers;
}

}  // namespace vlab
