#include "vlab/invariants.hpp"

#include <map>

#include "vlab/error.hpp"
#include "vlab/modular.hpp"

namespace vlab {

namespace {

using Exponent = std::vector<unsigned>;
using Poly = std::map<Exponent, Rat>;

void fill(std::size_t n, std::size_t i, unsigned left, Exponent& cur, std::vector<Exponent>& out) {
  if (i + 1 == n) {
    cur[i] = left;
    out.push_back(cur);
    return;
  }
  for (unsigned e = left + 1; e-- > 0;) {
    cur[i] = e;
    fill(n, i + 1, left - e, cur, out);
  }
}

// p * (sum_j h(i, j) x_j).
Poly times_linear(const Poly& p, const RatMatrix& h, std::size_t i) {
  Poly out;
  for (const auto& [e, c] : p) {
    for (std::size_t j = 0; j < h.cols(); ++j) {
      if (h(i, j) == 0) continue;
      Exponent f = e;
      ++f[j];
      out[f] += c * h(i, j);
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

void require_checked(const GroupGenSet& f) {
  if (!f.checked) throw PreconditionError("group generators must be checked against a form first");
}

}  // namespace

std::vector<std::vector<unsigned>> monomials(std::size_t n, std::size_t d) {
  std::vector<Exponent> out;
  if (n == 0) return out;
  Exponent cur(n, 0);
  fill(n, 0, static_cast<unsigned>(d), cur, out);
  return out;
}

RatMatrix sym_power_action(const RatMatrix& g, std::size_t d) {
  if (d != 2 && d != 4) throw PreconditionError("symmetric power degree must be 2 or 4");
  if (g.rows() != g.cols()) throw DimensionError("group element must be square");
  const std::size_t n = g.rows();
  const RatMatrix h = inverse(g);
  const auto mons = monomials(n, d);
  std::map<Exponent, std::size_t> index;
  for (std::size_t k = 0; k < mons.size(); ++k) index[mons[k]] = k;

  RatMatrix a(mons.size(), mons.size());
  for (std::size_t col = 0; col < mons.size(); ++col) {
    // prod_i (h x)_i^{e_i}
    Poly p{{Exponent(n, 0), Rat(1)}};
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned t = 0; t < mons[col][i]; ++t) p = times_linear(p, h, i);
    for (const auto& [e, c] : p) a(index.at(e), col) = c;
  }
  return a;
}

FixedSpace fixed_space(const GroupGenSet& f, std::size_t d) {
  require_checked(f);
  const std::size_t size = monomials(f.dim, d).size();
  RatMatrix stacked(0, size);
  for (const auto& g : f.generators) {
    const RatMatrix a = sym_power_action(g, d) - RatMatrix::identity(size);
    for (std::size_t i = 0; i < size; ++i) stacked.append_row(a.row(i));
  }
  FixedSpace out;
  out.degree = d;
  if (stacked.rows() == 0) {
    for (std::size_t i = 0; i < size; ++i) {
      RatVector e(size, Rat(0));
      e[i] = 1;
      out.basis.push_back(std::move(e));
    }
    return out;
  }
  out.basis = certified_kernel(stacked).basis;
  return out;
}

std::size_t fixed_dim(const GroupGenSet& f, std::size_t d) { return fixed_space(f, d).dim(); }

InvarianceVerdict invariance_criterion(const GroupGenSet& f) {
  InvarianceVerdict v;
  v.degree2 = fixed_space(f, 2);
  v.degree4 = fixed_space(f, 4);
  v.passes_Fc4 = v.degree2.dim() == 1 && v.degree4.dim() == 1;

  // dim(I4 n P) = dim I4 + dim P - dim(I4 + P), P = span of products of two
  // quadratic monomials.
  const auto m2 = monomials(f.dim, 2);
  const auto m4 = monomials(f.dim, 4);
  std::map<Exponent, std::size_t> index;
  for (std::size_t k = 0; k < m4.size(); ++k) index[m4[k]] = k;
  EchelonBasis products(m4.size());
  for (std::size_t a = 0; a < m2.size(); ++a)
    for (std::size_t b = a; b < m2.size(); ++b) {
      Exponent e(f.dim);
      for (std::size_t i = 0; i < f.dim; ++i) e[i] = m2[a][i] + m2[b][i];
      RatVector vec(m4.size(), Rat(0));
      vec[index.at(e)] = 1;
      products.add(vec);
    }
  const std::size_t dim_p = products.dim();
  EchelonBasis sum = products;
  for (const auto& b : v.degree4.basis) sum.add(b);
  v.fc22_dim = v.degree4.dim() + dim_p - sum.dim();
  v.passes_Fc22 = v.passes_Fc4 || (v.degree2.dim() == 1 && v.fc22_dim == 1);
  return v;
}

json invariance_to_json(const InvarianceVerdict& v) {
  auto space = [](const FixedSpace& s) {
    json basis = json::array();
    for (const auto& b : s.basis) basis.push_back(vector_to_json(b));
    return json{{"degree", s.degree}, {"dim", s.dim()}, {"basis", basis}};
  };
  return json{{"fixed_degree2", space(v.degree2)},
              {"fixed_degree4", space(v.degree4)},
              {"fixed_dims", {v.degree2.dim(), v.degree4.dim()}},
              {"fc22_dim", v.fc22_dim},
              {"passes_Fc22", v.passes_Fc22},
              {"passes_Fc4", v.passes_Fc4}};
}

}  // namespace vlab
