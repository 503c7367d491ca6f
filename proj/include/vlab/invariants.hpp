#pragma once

#include <cstddef>
#include <vector>

#include "vlab/group.hpp"
#include "vlab/json_io.hpp"
#include "vlab/matrix.hpp"

namespace vlab {

// Exponent vectors of the degree-d monomials in n variables, x_0^d first
// (descending lexicographic order).
std::vector<std::vector<unsigned>> monomials(std::size_t n, std::size_t d);

// Matrix of p -> p o g^{-1} on the degree-d monomial basis, d in {2, 4}; column
// j holds the coefficients of monomial j composed with g^{-1}. Multiplicative:
// action(g h) = action(g) action(h).
RatMatrix sym_power_action(const RatMatrix& g, std::size_t d);

// Common fixed space of the generators on degree-d forms, as coefficient
// vectors over monomials(n, d). It is the fixed space of the generated group.
struct FixedSpace {
  std::size_t degree = 0;
  std::vector<RatVector> basis;
  std::size_t dim() const { return basis.size(); }
};

FixedSpace fixed_space(const GroupGenSet& f, std::size_t d);
std::size_t fixed_dim(const GroupGenSet& f, std::size_t d);

struct InvarianceVerdict {
  FixedSpace degree2;
  FixedSpace degree4;
  std::size_t fc22_dim = 0;  // invariant quartics inside span{q1 q2 : q1, q2 quadratic}
  bool passes_Fc22 = false;
  bool passes_Fc4 = false;
};

// passes_Fc4 iff the fixed dims are (1, 1): Q and Q^2 are the only invariants.
// passes_Fc22 follows from it, or from fixed_dim(2) = 1 with fc22_dim = 1.
// Generators must be checked.
InvarianceVerdict invariance_criterion(const GroupGenSet& f);

json invariance_to_json(const InvarianceVerdict& v);

}  // namespace vlab
