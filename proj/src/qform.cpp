#include "vlab/qform.hpp"

#include <cmath>

#include "vlab/error.hpp"

namespace vlab {

QForm QForm::from_gram(RatMatrix gram, std::string name) {
  if (!gram.square() || gram.rows() == 0) throw ParseError("gram must be a nonempty square matrix");
  for (std::size_t i = 0; i < gram.rows(); ++i) {
    for (std::size_t j = i + 1; j < gram.cols(); ++j) {
      if (gram(i, j) != gram(j, i)) {
        throw ParseError("gram is not symmetric: entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") = " + to_string(gram(i, j)) + " but (" + std::to_string(j) + "," +
                         std::to_string(i) + ") = " + to_string(gram(j, i)));
      }
    }
  }
  Rat minor;
  if (auto k = first_nonpositive_minor(gram, &minor); k != 0) {
    throw ParseError("gram is not positive definite: leading principal minor " + std::to_string(k) + " = " +
                     to_string(minor));
  }
  QForm q;
  q.gram_ = std::move(gram);
  q.name_ = std::move(name);
  q.den_ = lcm_of_denominators(q.gram_.data().data(), q.gram_.data().size());
  q.int_gram_.reserve(q.gram_.data().size());
  for (const auto& g : q.gram_.data()) {
    Rat s = g * q.den_;
    q.int_gram_.push_back(s.get_num());
  }
  return q;
}

Eigen::MatrixXd QForm::gram_double() const { return to_eigen(gram_); }

QForm QForm::scaled(const Rat& c) const {
  if (c <= 0) throw PreconditionError("scale factor must be positive");
  return from_gram(c * gram_, name_);
}

bool is_selfadjoint(const RatMatrix& m, const RatMatrix& gram) {
  if (!m.square() || m.rows() != gram.rows()) return false;
  return is_symmetric(gram * m);
}

SymEndo SymEndo::make(RatMatrix m, const RatMatrix& gram) {
  if (!m.square() || m.rows() != gram.rows()) throw DimensionError("SymEndo: size does not match the form");
  if (!is_selfadjoint(m, gram)) throw PreconditionError("endomorphism is not selfadjoint for the form");
  return SymEndo(std::move(m));
}

SymEndo SymEndo::identity(std::size_t n) { return SymEndo(RatMatrix::identity(n)); }

Rat eval(const QForm& q, std::span<const Rat> x) {
  if (x.size() != q.dim()) throw DimensionError("eval: vector length differs from form dimension");
  return dot(x, q.gram() * x);
}

Int eval_numerator(const QForm& q, std::span<const std::int64_t> x) {
  const std::size_t n = q.dim();
  if (x.size() != n) throw DimensionError("eval: vector length differs from form dimension");
  const auto& g = q.integer_gram();
  Int acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    Int row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j] != 0) row += g[i * n + j] * static_cast<long>(x[j]);
    }
    acc += row * static_cast<long>(x[i]);
  }
  return acc;
}

Rat eval(const QForm& q, std::span<const std::int64_t> x) { return make_rat(eval_numerator(q, x), q.denominator()); }

Rat bilinear(const QForm& q, std::span<const Rat> x, std::span<const Rat> y) {
  if (x.size() != q.dim() || y.size() != q.dim()) throw DimensionError("bilinear: vector length mismatch");
  return dot(x, q.gram() * y);
}

QForm dual_form(const QForm& q) {
  return QForm::from_gram(inverse(q.gram()), q.name().empty() ? std::string() : q.name() + "*");
}

Rat determinant(const QForm& q) { return determinant(q.gram()); }

Eigen::MatrixXd to_eigen(const RatMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  const auto n = a.rows();
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd s = a / std::ldexp(1.0, squarings);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd s2 = s * s;
  const Eigen::MatrixXd s4 = s2 * s2;
  const Eigen::MatrixXd s6 = s4 * s2;
  const Eigen::MatrixXd u =
      s * (s6 * (b[13] * s6 + b[11] * s4 + b[9] * s2) + b[7] * s6 + b[5] * s4 + b[3] * s2 + b[1] * id);
  const Eigen::MatrixXd v = s6 * (b[12] * s6 + b[10] * s4 + b[8] * s2) + b[6] * s6 + b[4] * s4 + b[2] * s2 + b[0] * id;
  Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

Eigen::MatrixXd deformed_gram(const Deformation& d) {
  if (d.direction.dim() != d.base.dim()) throw DimensionError("deformation: direction size differs from form");
  return d.base.gram_double() * matrix_exp(d.t * to_eigen(d.direction.matrix()));
}

double deform_eval(const Deformation& d, std::span<const Rat> x) {
  if (x.size() != d.base.dim()) throw DimensionError("deform_eval: vector length mismatch");
  const Eigen::MatrixXd m = deformed_gram(d);
  Eigen::VectorXd v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v(static_cast<Eigen::Index>(i)) = x[i].get_d();
  return v.dot(m * v);
}

double hermite_invariant(const QForm& q, const Rat& gamma) {
  if (gamma <= 0) throw PreconditionError("hermite_invariant: gamma must be positive");
  const double log_det = std::log(determinant(q).get_d());
  return std::exp(std::log(gamma.get_d()) - log_det / static_cast<double>(q.dim()));
}

}  // namespace vlab
