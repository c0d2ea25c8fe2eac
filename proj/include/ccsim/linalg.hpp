// SPDX-License-Identifier: Apache-2.0
//
// Small dense complex linear algebra kernels. Everything in this project
// operates on matrices of a few rows/columns (delta x delta user matrices,
// L-dimensional beamformers), so plain row-major storage and O(n^3)
// algorithms are sufficient.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ccsim {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

class CMat {
 public:
  CMat() = default;
  CMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

  static CMat identity(std::size_t n);

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  CVec col(std::size_t j) const;
  CVec row(std::size_t i) const;
  void set_col(std::size_t j, const CVec& v);

  // New matrix formed by the given columns, in the given order.
  CMat select_cols(const std::vector<int>& idx) const;
  // New matrix with row i removed.
  CMat drop_row(std::size_t i) const;

  bool same_shape(const CMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

// Hermitian inner product, conjugate on the first argument.
cplx vdot(const CVec& a, const CVec& b);
double norm_sq(const CVec& v);
double norm(const CVec& v);
void scale(CVec& v, cplx s);
CVec scaled(const CVec& v, cplx s);

CMat matmul(const CMat& a, const CMat& b);
CMat adjoint(const CMat& a);
CVec matvec(const CMat& a, const CVec& x);

// Determinant by LU with partial pivoting. The determinant of the empty
// (0 x 0) matrix is 1.
cplx det(const CMat& a);

// Solves a x = b for square a; throws on (numerically) singular input.
CVec solve(const CMat& a, const CVec& b);
// Solves a^T x = b (plain transpose, no conjugation).
CVec solve_transpose(const CMat& a, const CVec& b);

// Modified Gram-Schmidt with reorthogonalization. Returns an orthonormal
// basis of span(vs); vectors whose residual falls below tol (relative to
// their own norm) are dropped, so the result is rank-revealing.
std::vector<CVec> orthonormal_basis(const std::vector<CVec>& vs,
                                    double tol = 1e-10);

// Orthonormal basis of the orthogonal complement of span(vs) in C^dim.
std::vector<CVec> orth_complement(const std::vector<CVec>& vs,
                                  std::size_t dim, double tol = 1e-10);

// v minus its projection onto the orthonormal set q.
CVec project_out(const CVec& v, const std::vector<CVec>& q);

struct EigResult {
  std::vector<double> values;  // ascending
  CMat vectors;                // columns are eigenvectors, a = V diag(w) V^H
};

// Cyclic Jacobi eigensolver for Hermitian matrices.
EigResult hermitian_eig(const CMat& a);

// Spectral (2-norm) condition number; infinity for singular input.
double cond2(const CMat& a);

}  // namespace ccsim
