#pragma once

#include <vector>

#include <Eigen/Dense>

namespace induced {

/// Determinant via LU with partial pivoting; the empty matrix has determinant 1.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  switch (m.rows()) {
    case 0:
      return Scalar(1);
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      break;
  }
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense = m;
  return dense.partialPivLu().determinant();
}

/// Determinant of the principal submatrix left after deleting rows and
/// columns listed in `drop`.
template <typename Derived>
typename Derived::Scalar principal_minor(const Eigen::MatrixBase<Derived>& m,
                                         std::initializer_list<Eigen::Index> drop) {
  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    bool dropped = false;
    for (auto d : drop) dropped = dropped || d == i;
    if (!dropped) keep.push_back(i);
  }
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sub = m(keep, keep);
  return determinant(sub);
}

/// det(M - x I) for a square M.
template <typename Derived>
typename Derived::Scalar shifted_determinant(const Eigen::MatrixBase<Derived>& m,
                                             typename Derived::Scalar x) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = m;
  a.diagonal().array() -= x;
  return determinant(a);
}

/// d/dx det(M - x I) = -sum of the (N-1) principal minors of M - x I.
template <typename Derived>
typename Derived::Scalar shifted_determinant_dx(const Eigen::MatrixBase<Derived>& m,
                                                typename Derived::Scalar x) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = m;
  a.diagonal().array() -= x;
  Scalar sum(0);
  for (Eigen::Index j = 0; j < a.rows(); ++j) sum += principal_minor(a, {j});
  return -sum;
}

}  // namespace induced
