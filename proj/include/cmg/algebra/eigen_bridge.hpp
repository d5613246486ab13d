#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "cmg/algebra/matrix.hpp"

namespace cmg {

inline Eigen::MatrixXcd to_eigen(const Matrix<Cplx>& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline Matrix<Cplx> from_eigen(const Eigen::MatrixXcd& e) {
  Matrix<Cplx> m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

inline Matrix<Cplx> matrix_exp(const Matrix<Cplx>& m) { return from_eigen(to_eigen(m).exp()); }

}  // namespace cmg
