// Validates every catalog entry against enumeration: determinant, minimum and
// kissing number. Runs after the build; a nonzero exit fails it.

#include <iostream>

#include "vlab/catalog.hpp"
#include "vlab/enumerate.hpp"
#include "vlab/error.hpp"

int main() {
  using namespace vlab;
  int failures = 0;
  for (const auto& name : catalog_names()) {
    const CatalogEntry e = catalog_entry(name);
    const QForm& q = e.form;
    // The box oracle is independent of the tree search; it is affordable up to dimension 8.
    const Layer l = q.dim() <= 8 ? brute_force_oracle(q, e.min).front() : minimal_vectors(q);
    const bool ok = determinant(q) == e.det && l.radius == e.min && l.count() == e.kissing;
    std::cout << (ok ? "ok    " : "FAIL  ") << name << "  det " << to_string(determinant(q)) << "  min "
              << to_string(l.radius) << "  kissing " << l.count() << (q.dim() <= 8 ? "  (box oracle)" : "  (tree search)")
              << '\n';
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
