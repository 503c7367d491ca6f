#include "vlab/catalog.hpp"

#include <algorithm>
#include <charconv>

#include "vlab/enumerate.hpp"
#include "vlab/error.hpp"

namespace vlab {

namespace {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

RatMatrix cartan(std::size_t n, const Edges& edges) {
  RatMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) g(i, i) = 2;
  for (auto [a, b] : edges) g(a, b) = g(b, a) = -1;
  return g;
}

// Reflection in the i-th simple root (norm 2): x -> x - (e_i^T G x) e_i.
RatMatrix reflection(const RatMatrix& g, std::size_t i) {
  RatMatrix s = RatMatrix::identity(g.rows());
  for (std::size_t j = 0; j < g.cols(); ++j) s(i, j) -= g(i, j);
  return s;
}

RatMatrix permutation(const std::vector<std::size_t>& sigma) {
  RatMatrix p(sigma.size(), sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) p(sigma[i], i) = 1;
  return p;
}

RatMatrix swap_permutation(std::size_t n, std::size_t a, std::size_t b) {
  std::vector<std::size_t> sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[i] = i;
  std::swap(sigma[a], sigma[b]);
  return permutation(sigma);
}

GroupGenSet weyl(const RatMatrix& g) {
  GroupGenSet f{g.rows(), {}, false};
  for (std::size_t i = 0; i < g.rows(); ++i) f.generators.push_back(reflection(g, i));
  return f;
}

Edges chain(std::size_t n) {
  Edges e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

// Row-style Hermite normal form over Z; returns the nonzero rows.
std::vector<std::vector<Int>> hermite_rows(std::vector<std::vector<Int>> rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::size_t top = 0;
  for (std::size_t c = 0; c < cols && top < rows.size(); ++c) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = top; r < rows.size(); ++r) {
        if (rows[r][c] != 0 && (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c]))) best = r;
      }
      if (best == rows.size()) break;
      std::swap(rows[top], rows[best]);
      bool done = true;
      for (std::size_t r = top + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        const Int qt = rows[r][c] / rows[top][c];
        for (std::size_t k = c; k < cols; ++k) rows[r][k] -= qt * rows[top][k];
        if (rows[r][c] != 0) done = false;
      }
      if (done) {
        ++top;
        break;
      }
    }
  }
  rows.resize(top);
  return rows;
}

// (1/sqrt 2) {x in Z^16 : x mod 2 in RM(1,4), sum x = 0 mod 4}.
RatMatrix barnes_wall_16() {
  std::vector<std::vector<Int>> gens;
  gens.emplace_back(16, Int(1));
  for (std::size_t bit = 0; bit < 4; ++bit) {
    std::vector<Int> w(16);
    for (std::size_t i = 0; i < 16; ++i) w[i] = (i >> bit) & 1U;
    gens.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < 16; ++i) {
    std::vector<Int> v(16);
    v[i] = 2;
    v[(i + 1) % 16] = i + 1 < 16 ? 2 : -2;
    gens.push_back(std::move(v));
  }
  {
    std::vector<Int> v(16);
    v[0] = 2;
    v[1] = -2;
    gens.push_back(std::move(v));
  }
  const auto basis = hermite_rows(std::move(gens));
  if (basis.size() != 16) throw Error("internal: BW16 generators do not span rank 16");
  RatMatrix g(16, 16);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) {
      Int s = 0;
      for (std::size_t k = 0; k < 16; ++k) s += basis[i][k] * basis[j][k];
      g(i, j) = Rat(s, 2);
      g(i, j).canonicalize();
    }
  // LLL for a short basis.
  const QForm raw = QForm::from_gram(g);
  const auto u = lll_transform(raw);
  RatMatrix um(16, 16);
  for (std::size_t i = 0; i < 256; ++i) um(i / 16, i % 16) = Rat(static_cast<long>(u[i]));
  return transpose(um) * g * um;
}

std::size_t parse_rank(const std::string& name, std::size_t prefix) {
  std::size_t n = 0;
  const char* b = name.data() + prefix;
  const char* e = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(b, e, n);
  if (ec != std::errc() || ptr != e || b == e) throw ParseError("unknown catalog entry \"" + name + "\"");
  return n;
}

CatalogEntry finish(std::string name, RatMatrix g, std::optional<GroupGenSet> aut, std::string notes,
                    std::size_t kissing, Rat det, Rat min) {
  CatalogEntry e{name, QForm::from_gram(std::move(g), name), std::move(aut), std::move(notes), kissing, det, min};
  if (e.aut) check_generators(e.form, *e.aut);
  return e;
}

}  // namespace

CatalogEntry catalog_entry(const std::string& name) {
  if (name == "BW16") {
    return finish(name, barnes_wall_16(), std::nullopt,
                  "Barnes-Wall lattice; no automorphism generators shipped", 4320, 256, 4);
  }
  if (name == "E6" || name == "E7" || name == "E8") {
    const std::size_t n = static_cast<std::size_t>(name[1] - '0');
    Edges edges;
    for (auto e : Edges{{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}}) {
      if (e.first < n && e.second < n) edges.push_back(e);
    }
    const RatMatrix g = cartan(n, edges);
    GroupGenSet aut = weyl(g);
    if (n == 6) aut.generators.push_back(Rat(-1) * RatMatrix::identity(n));
    const std::size_t kiss = n == 6 ? 72 : n == 7 ? 126 : 240;
    const Rat det = n == 6 ? 3 : n == 7 ? 2 : 1;
    return finish(name, g, aut, "root lattice, Cartan matrix in Bourbaki order", kiss, det, 2);
  }
  if (name.size() < 2) throw ParseError("unknown catalog entry \"" + name + "\"");
  const std::size_t n = parse_rank(name, 1);
  switch (name[0]) {
    case 'Z': {
      if (n < 1) break;
      GroupGenSet aut{n, {}, false};
      RatMatrix flip = RatMatrix::identity(n);
      flip(0, 0) = -1;
      aut.generators.push_back(flip);
      if (n >= 2) {
        aut.generators.push_back(swap_permutation(n, 0, 1));
        std::vector<std::size_t> cycle(n);
        for (std::size_t i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
        aut.generators.push_back(permutation(cycle));
      }
      return finish(name, RatMatrix::identity(n), aut, "cubic lattice; signed permutations", 2 * n, 1, 1);
    }
    case 'A': {
      if (n < 1) break;
      const RatMatrix g = cartan(n, chain(n));
      GroupGenSet aut = weyl(g);
      if (n >= 2) aut.generators.push_back(Rat(-1) * RatMatrix::identity(n));
      return finish(name, g, aut, "root lattice; Weyl group and -1", n * (n + 1), n + 1, 2);
    }
    case 'D': {
      if (n < 4) break;
      Edges edges = chain(n - 1);
      edges.emplace_back(n - 3, n - 1);
      const RatMatrix g = cartan(n, edges);
      GroupGenSet aut = weyl(g);
      aut.generators.push_back(swap_permutation(n, n - 2, n - 1));
      if (n == 4) aut.generators.push_back(swap_permutation(n, 0, 2));
      return finish(name, g, aut, n == 4 ? "root lattice; Weyl group and triality" : "root lattice; Weyl group and diagram swap",
                    2 * n * (n - 1), 4, 2);
    }
    default:
      break;
  }
  throw ParseError("unknown catalog entry \"" + name + "\"");
}

std::vector<std::string> catalog_names() {
  return {"Z1", "Z2", "Z3", "Z4", "Z5", "Z8", "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8",
          "D4", "D5", "D6", "D7", "D8", "E6", "E7", "E8", "BW16"};
}

}  // namespace vlab
