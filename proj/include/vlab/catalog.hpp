#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vlab/group.hpp"
#include "vlab/qform.hpp"

namespace vlab {

struct CatalogEntry {
  std::string name;
  QForm form;
  std::optional<GroupGenSet> aut;  // checked generators of the automorphism group
  std::string notes;
  std::size_t kissing = 0;         // expected size of the minimal layer
  Rat det;                         // expected determinant
  Rat min;                         // expected minimum
};

// Names: Z<n> (n >= 1), A<n> (n >= 1), D<n> (n >= 4), E6, E7, E8, BW16.
// Throws ParseError for unknown names.
CatalogEntry catalog_entry(const std::string& name);

// The entries validated by catalog_check and listed by `vlab catalog`.
std::vector<std::string> catalog_names();

}  // namespace vlab
