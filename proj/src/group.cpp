#include "vlab/group.hpp"

#include "vlab/error.hpp"

namespace vlab {

void check_generators(const QForm& q, GroupGenSet& f) {
  if (f.dim != q.dim()) {
    throw ParseError("generator set has dim " + std::to_string(f.dim) + " but the form has dim " +
                     std::to_string(q.dim()));
  }
  for (std::size_t k = 0; k < f.generators.size(); ++k) {
    const auto& g = f.generators[k];
    const std::string id = "generator " + std::to_string(k);
    if (g.rows() != f.dim || g.cols() != f.dim) throw ParseError(id + " has the wrong size");
    if (!is_integral(g)) throw ParseError(id + " does not map the lattice to itself (non-integral entry)");
    if (transpose(g) * q.gram() * g != q.gram()) throw ParseError(id + " is not orthogonal for the form");
  }
  f.checked = true;
}

json group_to_json(const GroupGenSet& f) {
  json gens = json::array();
  for (const auto& g : f.generators) gens.push_back(matrix_to_json(g));
  return {{"dim", f.dim}, {"generators", gens}};
}

GroupGenSet group_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("generators")) {
    throw ParseError("generator JSON must have \"dim\" and \"generators\"");
  }
  GroupGenSet f;
  f.dim = j.at("dim").get<std::size_t>();
  for (const auto& g : j.at("generators")) f.generators.push_back(matrix_from_json(g));
  return f;
}

}  // namespace vlab
