#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vlab/enumerate.hpp"
#include "vlab/group.hpp"
#include "vlab/qform.hpp"

namespace vlab {

enum class SpaceKind { classic, invariant, isodual, duality_product, exterior };

std::string to_string(SpaceKind k);
SpaceKind space_kind_from_string(const std::string& s);

struct SpacePoint {
  RatVector coords;  // ambient coordinates
  Rat value;         // ambient form evaluated at coords
};

// A Voronoi space at a fixed form: the ambient form, a basis of its tangent
// space gp (selfadjoint endomorphisms of the ambient space), and the candidate
// points, one per antipodal pair.
struct SpaceDescriptor {
  SpaceKind kind = SpaceKind::classic;
  std::string label;
  std::size_t ambient_dim = 0;
  RatMatrix gram;                       // ambient Gram matrix
  std::vector<SymEndo> gp_basis;
  std::vector<SymEndo> extended_basis;  // gp_basis followed by the identity
  RatVector tau;                        // 0 on gp_basis, 1 on the identity
  std::vector<SpacePoint> points;

  RatMatrix base_gram;                  // Gram matrix of the underlying form
  std::size_t base_dim = 0;             // n of the underlying form
  std::size_t wedge = 1;                // m for exterior powers
  std::size_t primal_points = 0;        // duality product: points [0, primal_points) lie in V x 0

  std::size_t gp_dim() const { return gp_basis.size(); }
};

// Throws Error when an invariant fails: gp entries selfadjoint for gram and
// independent, identity outside their span, point values exact.
void validate(const SpaceDescriptor& s);

std::vector<SpacePoint> points_from_layer(const QForm& q, const Layer& layer);

// Traceless selfadjoint endomorphisms.
SpaceDescriptor classic_space(const QForm& q, std::vector<SpacePoint> points);

// Traceless selfadjoint H commuting with every generator. The generator set is
// checked (integral, Q-orthogonal) first.
SpaceDescriptor invariant_family_space(const QForm& q, std::vector<SpacePoint> points, GroupGenSet generators);

// Traceless selfadjoint H with sigma H + H sigma = 0. sigma must be Q-orthogonal.
SpaceDescriptor isodual_family_space(const QForm& q, std::vector<SpacePoint> points, const RatMatrix& sigma);

// Ambient form Q x Q^{-1} on V x V*. Points (x, 0) for the minimal vectors of Q
// and (0, y) for those of Q^{-1}. gp = {blockdiag(H, -H^T) : H selfadjoint}.
// epsilon is invariant under rescaling either factor, so the balancing constant
// never has to be materialized.
SpaceDescriptor duality_product_space(const QForm& q, const EnumOptions& opts = {});

// Compound form C_m(G) on the m-th exterior power. Points are Pluecker vectors
// of m-tuples of vectors of value <= bound whose Gram determinant is minimal.
SpaceDescriptor exterior_power_space(const QForm& q, std::size_t m, const Rat& bound, const EnumOptions& opts = {});

struct RankinResult {
  std::size_t m = 0;
  Rat bound;              // tuples were drawn from vectors of value <= bound
  Rat min_det;            // minimal Gram determinant found
  std::size_t tuples = 0; // Pluecker classes attaining it
  double value = 0.0;     // min_det / det(Q)^(m/n)
  std::optional<Rat> exact;
};

RankinResult rankin_invariant(const QForm& q, std::size_t m, const Rat& bound, const EnumOptions& opts = {});

// m x m minors of g indexed by increasing m-subsets in lexicographic order.
RatMatrix compound_matrix(const RatMatrix& g, std::size_t m);

// Matrix of the derivation x1^...^xm -> sum_i x1^..^H xi^..^xm.
RatMatrix derivation_action(const RatMatrix& h, std::size_t m);

// m-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t m);

}  // namespace vlab
