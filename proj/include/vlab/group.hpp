#pragma once

#include <string>
#include <vector>

#include "vlab/json_io.hpp"
#include "vlab/matrix.hpp"
#include "vlab/qform.hpp"

namespace vlab {

// Generators of a finite group of lattice automorphisms, acting on coordinates
// in the lattice basis (x -> g x).
struct GroupGenSet {
  std::size_t dim = 0;
  std::vector<RatMatrix> generators;
  bool checked = false;
};

// Throws ParseError naming the first generator that is not square of the right
// size, not integral, or not Q-orthogonal (g^T G g = G). Sets checked.
void check_generators(const QForm& q, GroupGenSet& f);

// {"dim": n, "generators": [ [[...]], ... ]}
json group_to_json(const GroupGenSet& f);
GroupGenSet group_from_json(const json& j);

}  // namespace vlab
