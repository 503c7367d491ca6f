#include "vlab/zeta.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "vlab/designs.hpp"
#include "vlab/error.hpp"
#include "vlab/extremality.hpp"
#include "vlab/kernels.hpp"

namespace vlab {

namespace {

void require_convergent(const QForm& q, double s) {
  const double half = static_cast<double>(q.dim()) / 2.0;
  if (!(s > half)) {
    throw PreconditionError("Epstein zeta diverges for s <= n/2 (s = " + std::to_string(s) +
                            ", n/2 = " + std::to_string(half) + ")");
  }
}

std::vector<double> flatten_points(const std::vector<Layer>& layers, std::size_t n) {
  std::vector<double> pts;
  for (const auto& l : layers)
    for (const auto& v : l.vectors)
      for (std::size_t i = 0; i < n; ++i) pts.push_back(static_cast<double>(v.coords[i]));
  return pts;
}

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

Rat max_abs_entry(const RatMatrix& m) {
  Rat best = 0;
  for (const auto& x : m.data()) best = std::max(best, Rat(abs(x)));
  return best;
}

}  // namespace

ZetaResult zeta_from_layers(const QForm& q, double s, const Rat& bound, const std::vector<Layer>& layers) {
  require_convergent(q, s);
  const double half = static_cast<double>(q.dim()) / 2.0;
  ZetaResult r;
  r.s = s;
  r.bound = bound;
  r.layers_used = layers.size();
  std::vector<double> radius, count;
  for (const auto& l : layers) {
    if (l.radius > bound) throw PreconditionError("layer beyond the summation bound");
    radius.push_back(to_double(l.radius));
    count.push_back(static_cast<double>(l.count()));
  }
  r.value = kernels::power_sum_parallel(radius, count, s);

  // Least squares for N(r) = c r^(n/2) on the upper half of the shells.
  if (!layers.empty()) {
    double cumulative = 0, num = 0, den = 0;
    const std::size_t from = layers.size() / 2;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      cumulative += count[i];
      if (i < from) continue;
      const double p = std::pow(radius[i], half);
      num += cumulative * p;
      den += p * p;
    }
    r.fitted_constant = num / den;
    const double b = to_double(bound);
    r.tail_estimate = 2.0 * r.fitted_constant * half * std::pow(b, half - s) / (s - half);
  }
  return r;
}

ZetaResult zeta_direct(const QForm& q, double s, const Rat& bound, const EnumOptions& opts) {
  require_convergent(q, s);
  return zeta_from_layers(q, s, bound, vectors_up_to(q, bound, opts));
}

Directional zeta_directional(const QForm& q, const SymEndo& h, double s, const std::vector<Layer>& layers) {
  require_convergent(q, s);
  if (h.dim() != q.dim()) throw DimensionError("direction and form differ in dimension");
  const std::size_t n = q.dim();
  const Eigen::MatrixXd g = q.gram_double();
  const Eigen::MatrixXd gh = g * to_eigen(h.matrix());
  const Eigen::MatrixXd hd = to_eigen(h.matrix());
  kernels::KahanSum a, b;
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (const auto& l : layers) {
    const double r = to_double(l.radius);
    const double w = 2.0 * std::pow(r, -s);
    for (const auto& v : l.vectors) {
      for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i)) = static_cast<double>(v.coords[i]);
      const double eps = x.dot(gh * x) / r;
      const Eigen::VectorXd hx = hd * x;
      const double gamma = hx.dot(g * hx) / r;
      a.add(-s * w * eps);
      b.add(w * (s * s / 2.0 * eps * eps - s / 2.0 * (gamma - eps * eps)));
    }
  }
  return {a.value(), b.value()};
}

Directional zeta_directional(const QForm& q, const SymEndo& h, double s, const Rat& bound, const EnumOptions& opts) {
  require_convergent(q, s);
  return zeta_directional(q, h, s, vectors_up_to(q, bound, opts));
}

double zeta_deformed(const QForm& q, const SymEndo& h, double t, double s, const std::vector<Layer>& layers,
                     bool parallel) {
  require_convergent(q, s);
  const Eigen::MatrixXd m = deformed_gram(Deformation{q, h, t});
  const Eigen::MatrixXd sym = (m + m.transpose()) / 2.0;
  const auto pts = flatten_points(layers, q.dim());
  const auto mm = row_major(sym);
  return parallel ? kernels::quadratic_power_sum_parallel(pts, q.dim(), mm, s)
                  : kernels::quadratic_power_sum_serial(pts, q.dim(), mm, s);
}

std::string to_string(ZetaCheck k) { return k == ZetaCheck::delone_ryshkov ? "delone_ryshkov" : "coulangeon"; }

ZetaVerdict delone_ryshkov_check(const QForm& q, const Rat& bound, const EnumOptions& opts) {
  ZetaVerdict v;
  v.kind = ZetaCheck::delone_ryshkov;
  v.certified_bound = bound;
  v.s_threshold = static_cast<double>(q.dim()) / 2.0;
  const auto layers = vectors_up_to(q, bound, opts);
  if (layers.empty()) throw PreconditionError("bound lies below the minimum; no layer to check");
  v.holds_to_bound = true;
  for (const auto& l : layers) {
    ++v.layers_checked;
    const bool minimal = &l == &layers.front();
    const auto lv = layer_voronoi(q, l, {.rank = minimal});
    if (!lv.strongly_eutactic) {
      v.holds_to_bound = false;
      v.failing_layer = l.radius;
      v.failing_leg = "strong_eutaxy";
      break;
    }
    if (minimal && !lv.perfect) {
      v.holds_to_bound = false;
      v.failing_layer = l.radius;
      v.failing_leg = "perfection";
      break;
    }
  }
  v.statement = v.holds_to_bound
                    ? "finally zeta-extreme, certified for layers up to " + to_string(bound)
                    : "criterion fails: layer " + to_string(*v.failing_layer) + " (" + v.failing_leg + ")";
  return v;
}

ZetaVerdict coulangeon_check(const QForm& q, const Rat& bound, const EnumOptions& opts) {
  ZetaVerdict v;
  v.kind = ZetaCheck::coulangeon;
  v.certified_bound = bound;
  v.s_threshold = static_cast<double>(q.dim()) / 2.0;
  const auto layers = vectors_up_to(q, bound, opts);
  if (layers.empty()) throw PreconditionError("bound lies below the minimum; no layer to check");
  v.holds_to_bound = true;
  for (const auto& l : layers) {
    ++v.layers_checked;
    if (!test_layer_design(q, l, Strength::Four).holds) {
      v.holds_to_bound = false;
      v.failing_layer = l.radius;
      v.failing_leg = "design";
      break;
    }
  }
  std::ostringstream s1;
  s1 << v.s_threshold;
  v.statement = v.holds_to_bound ? "zeta-extreme for every s > " + s1.str() + ", certified for layers up to " +
                                       to_string(bound)
                                 : "criterion fails: layer " + to_string(*v.failing_layer) + " is not a 4-design";
  return v;
}

RatMatrix random_traceless_direction(const QForm& q, std::uint64_t seed, std::size_t index) {
  const std::size_t n = q.dim();
  std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(sseq);
  std::uniform_int_distribution<long> entry(-6, 6);
  const RatMatrix gi = inverse(q.gram());
  while (true) {
    RatMatrix sym(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) sym(i, j) = sym(j, i) = entry(rng);
    RatMatrix h = gi * sym;
    h = h - (trace(h) / static_cast<long>(n)) * RatMatrix::identity(n);
    const Rat m = max_abs_entry(h);
    if (m != 0) return (1 / m) * h;
  }
}

ProbeReport zeta_local_probe(const QForm& q, double s, std::size_t directions, double step, std::uint64_t seed,
                             const Rat& bound, const EnumOptions& opts) {
  require_convergent(q, s);
  if (!(step > 0)) throw PreconditionError("probe step must be positive");
  ProbeReport r;
  r.s = s;
  r.step = step;
  r.bound = bound;
  r.seed = seed;
  const auto layers = vectors_up_to(q, bound, opts);
  const SymEndo zero = SymEndo::make(RatMatrix(q.dim(), q.dim()), q.gram());
  r.value = zeta_deformed(q, zero, 0.0, s, layers);
  for (std::size_t k = 0; k < directions; ++k) {
    ProbeDirection d;
    d.h = random_traceless_direction(q, seed, k);
    const SymEndo h = SymEndo::make(d.h, q.gram());
    for (double t : {-2 * step, -step, 0.0, step, 2 * step}) d.values.push_back(zeta_deformed(q, h, t, s, layers));
    d.second_difference = d.values[3] - 2 * d.values[2] + d.values[1];
    d.second_difference_wide = d.values[4] - 2 * d.values[2] + d.values[0];
    d.finite_difference = (d.values[3] - d.values[1]) / (2 * step);
    const auto ab = zeta_directional(q, h, s, layers);
    d.analytic_a = ab.a;
    d.analytic_b = ab.b;
    const double scale = s * r.value;
    d.first_order_vanishes = std::abs(ab.a) <= 1e-9 * scale;
    if (d.first_order_vanishes) {
      r.first_differences_consistent = r.first_differences_consistent && std::abs(d.finite_difference) <= 1e-4 * scale;
    } else {
      d.relative_error = std::abs(d.finite_difference - ab.a) / std::abs(ab.a);
      r.first_differences_consistent = r.first_differences_consistent && d.relative_error <= 1e-4;
    }
    r.all_second_differences_positive =
        r.all_second_differences_positive && d.second_difference > 0 && d.second_difference_wide > 0;
    r.max_relative_error = std::max(r.max_relative_error, d.relative_error);
    r.directions.push_back(std::move(d));
  }
  return r;
}

json zeta_to_json(const ZetaResult& r) {
  return json{{"s", r.s},
              {"value", r.value},
              {"bound", rat_to_json(r.bound)},
              {"tail_estimate", r.tail_estimate},
              {"fitted_constant", r.fitted_constant},
              {"layers_used", r.layers_used},
              {"tail_model", "heuristic: N(r) ~ c r^(n/2) fitted on the upper half of the shells, tail bounded "
                             "with 2c"}};
}

json zeta_verdict_to_json(const ZetaVerdict& v) {
  json j{{"kind", to_string(v.kind)},
         {"holds_to_bound", v.holds_to_bound},
         {"certified_bound", rat_to_json(v.certified_bound)},
         {"s_threshold", v.s_threshold},
         {"layers_checked", v.layers_checked},
         {"statement", v.statement}};
  j["failing_layer"] = v.failing_layer ? rat_to_json(*v.failing_layer) : json(nullptr);
  j["failing_leg"] = v.failing_leg.empty() ? json(nullptr) : json(v.failing_leg);
  return j;
}

json probe_to_json(const ProbeReport& r) {
  json dirs = json::array();
  for (const auto& d : r.directions) {
    dirs.push_back({{"h", matrix_to_json(d.h)},
                    {"values", d.values},
                    {"second_difference", d.second_difference},
                    {"second_difference_wide", d.second_difference_wide},
                    {"finite_difference", d.finite_difference},
                    {"analytic_a", d.analytic_a},
                    {"analytic_b", d.analytic_b},
                    {"first_order_vanishes", d.first_order_vanishes},
                    {"relative_error", d.relative_error}});
  }
  return json{{"kind", "probe"},
              {"s", r.s},
              {"step", r.step},
              {"bound", rat_to_json(r.bound)},
              {"seed", r.seed},
              {"value", r.value},
              {"directions", dirs},
              {"all_second_differences_positive", r.all_second_differences_positive},
              {"first_differences_consistent", r.first_differences_consistent},
              {"max_relative_error", r.max_relative_error}};
}

}  // namespace vlab
