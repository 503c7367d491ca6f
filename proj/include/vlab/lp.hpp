#pragma once

#include "vlab/matrix.hpp"

namespace vlab {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  RatVector x;     // primal solution when optimal
  Rat objective;
};

// maximize c^T x subject to a x = b, x >= 0. Exact two-phase simplex on a dense
// tableau with Bland's rule; redundant equality rows are dropped after phase I.
LpResult simplex_max(const RatMatrix& a, const RatVector& b, const RatVector& c);

}  // namespace vlab
