#include "vlab/lp.hpp"

#include <optional>

#include "vlab/error.hpp"

namespace vlab {

namespace {

class Tableau {
 public:
  Tableau(RatMatrix a, RatVector b, std::vector<std::size_t> basis)
      : a_(std::move(a)), b_(std::move(b)), basis_(std::move(basis)) {}

  // Runs Bland's rule on objective c (maximize). Returns false when unbounded.
  // Columns with allowed[j] == false never enter.
  bool optimize(const RatVector& c, const std::vector<bool>& allowed) {
    const std::size_t n = a_.cols();
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < n && !enter; ++j) {
        if (!allowed[j] || is_basic(j)) continue;
        Rat reduced = c[j];
        for (std::size_t i = 0; i < basis_.size(); ++i) {
          if (a_(i, j) != 0) reduced -= c[basis_[i]] * a_(i, j);
        }
        if (reduced > 0) enter = j;
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rat best;
      for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (a_(i, *enter) <= 0) continue;
        Rat ratio = b_[i] / a_(i, *enter);
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    const Rat p = a_(r, col);
    for (std::size_t j = 0; j < a_.cols(); ++j) a_(r, j) /= p;
    b_[r] /= p;
    for (std::size_t i = 0; i < a_.rows(); ++i) {
      if (i == r || a_(i, col) == 0) continue;
      const Rat f = a_(i, col);
      for (std::size_t j = 0; j < a_.cols(); ++j) {
        if (a_(r, j) != 0) a_(i, j) -= f * a_(r, j);
      }
      b_[i] -= f * b_[r];
    }
    basis_[r] = col;
  }

  void drop_row(std::size_t r) {
    RatMatrix next(0, a_.cols());
    for (std::size_t i = 0; i < a_.rows(); ++i)
      if (i != r) next.append_row(a_.row(i));
    a_ = std::move(next);
    b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  bool is_basic(std::size_t j) const {
    for (auto v : basis_)
      if (v == j) return true;
    return false;
  }

  RatMatrix& a() { return a_; }
  const RatVector& b() const { return b_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

 private:
  RatMatrix a_;
  RatVector b_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult simplex_max(const RatMatrix& a, const RatVector& b, const RatVector& c) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m || c.size() != n) throw DimensionError("simplex: inconsistent sizes");

  // Phase I on [a | I] with artificials, rows sign-normalized so that b >= 0.
  RatMatrix t(m, n + m);
  RatVector rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = flip ? Rat(-a(i, j)) : a(i, j);
    t(i, n + i) = 1;
    rhs[i] = flip ? Rat(-b[i]) : b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  Tableau tab(std::move(t), std::move(rhs), std::move(basis));

  RatVector phase1(n + m, Rat(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1;
  tab.optimize(phase1, std::vector<bool>(n + m, true));
  Rat infeas = 0;
  for (std::size_t i = 0; i < tab.basis().size(); ++i)
    if (tab.basis()[i] >= n) infeas += tab.b()[i];
  if (infeas != 0) return {LpStatus::infeasible, {}, 0};

  // Drive zero-valued artificials out of the basis; rows where that is
  // impossible are linear combinations of the others.
  for (std::size_t i = tab.basis().size(); i-- > 0;) {
    if (tab.basis()[i] < n) continue;
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n && !col; ++j)
      if (tab.a()(i, j) != 0) col = j;
    if (col) {
      tab.pivot(i, *col);
    } else {
      tab.drop_row(i);
    }
  }

  RatVector phase2(n + m, Rat(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  std::vector<bool> allowed(n + m, false);
  for (std::size_t j = 0; j < n; ++j) allowed[j] = true;
  if (!tab.optimize(phase2, allowed)) return {LpStatus::unbounded, {}, 0};

  LpResult out{LpStatus::optimal, RatVector(n, Rat(0)), 0};
  for (std::size_t i = 0; i < tab.basis().size(); ++i) {
    if (tab.basis()[i] < n) out.x[tab.basis()[i]] = tab.b()[i];
  }
  for (std::size_t j = 0; j < n; ++j) out.objective += c[j] * out.x[j];
  return out;
}

}  // namespace vlab
