#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>

#include "vlab/matrix.hpp"

namespace vlab {

// A positive definite quadratic form on R^n, given by its exact Gram matrix in
// the lattice basis. Immutable after construction.
class QForm {
 public:
  // Validates symmetry and positive definiteness; throws ParseError naming the
  // offending entry or leading principal minor.
  static QForm from_gram(RatMatrix gram, std::string name = {});

  std::size_t dim() const { return gram_.rows(); }
  const RatMatrix& gram() const { return gram_; }
  const std::string& name() const { return name_; }

  // gram = integer_gram / denominator, integer_gram integral.
  const std::vector<Int>& integer_gram() const { return int_gram_; }
  const Int& denominator() const { return den_; }

  Eigen::MatrixXd gram_double() const;

  QForm scaled(const Rat& c) const;

 private:
  QForm() = default;
  RatMatrix gram_;
  std::string name_;
  std::vector<Int> int_gram_;
  Int den_ = 1;
};

// Matrix of a Q-selfadjoint endomorphism H (gram * H symmetric).
class SymEndo {
 public:
  // Throws PreconditionError when gram * m is not symmetric.
  static SymEndo make(RatMatrix m, const RatMatrix& gram);
  static SymEndo identity(std::size_t n);

  std::size_t dim() const { return m_.rows(); }
  const RatMatrix& matrix() const { return m_; }

  friend bool operator==(const SymEndo& a, const SymEndo& b) { return a.m_ == b.m_; }

 private:
  explicit SymEndo(RatMatrix m) : m_(std::move(m)) {}
  RatMatrix m_;
};

bool is_selfadjoint(const RatMatrix& m, const RatMatrix& gram);

// The form Q_{tH}(x) = Q(x, exp(tH) x).
struct Deformation {
  QForm base;
  SymEndo direction;
  double t = 0.0;
};

Rat eval(const QForm& q, std::span<const Rat> x);
Rat eval(const QForm& q, std::span<const std::int64_t> x);
Rat bilinear(const QForm& q, std::span<const Rat> x, std::span<const Rat> y);

// Integer numerator x^T (integer_gram) x, so that Q(x) = numerator / denominator.
Int eval_numerator(const QForm& q, std::span<const std::int64_t> x);

QForm dual_form(const QForm& q);
Rat determinant(const QForm& q);

// exp(a) by scaling and squaring with the degree-13 Pade approximant; the
// scaled matrix has 1-norm at most 1/2.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a);

// Gram matrix of Q_{tH} as a (non-symmetric in general) double matrix
// G exp(tH); Q_{tH}(x) = x^T M x.
Eigen::MatrixXd deformed_gram(const Deformation& d);

double deform_eval(const Deformation& d, std::span<const Rat> x);

// gamma / det(Q)^(1/n).
double hermite_invariant(const QForm& q, const Rat& gamma);

Eigen::MatrixXd to_eigen(const RatMatrix& m);

}  // namespace vlab
