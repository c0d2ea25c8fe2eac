// SPDX-License-Identifier: Apache-2.0
#include "ccsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ccsim {

CMat CMat::identity(std::size_t n) {
  CMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CVec CMat::col(std::size_t j) const {
  CVec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

CVec CMat::row(std::size_t i) const {
  CVec v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

void CMat::set_col(std::size_t j, const CVec& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

CMat CMat::select_cols(const std::vector<int>& idx) const {
  CMat m(rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t i = 0; i < rows_; ++i)
      m(i, j) = (*this)(i, static_cast<std::size_t>(idx[j]));
  return m;
}

CMat CMat::drop_row(std::size_t r) const {
  CMat m(rows_ - 1, cols_);
  for (std::size_t i = 0, o = 0; i < rows_; ++i) {
    if (i == r) continue;
    for (std::size_t j = 0; j < cols_; ++j) m(o, j) = (*this)(i, j);
    ++o;
  }
  return m;
}

cplx vdot(const CVec& a, const CVec& b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm_sq(const CVec& v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return s;
}

double norm(const CVec& v) { return std::sqrt(norm_sq(v)); }

void scale(CVec& v, cplx s) {
  for (cplx& x : v) x *= s;
}

CVec scaled(const CVec& v, cplx s) {
  CVec r = v;
  scale(r, s);
  return r;
}

CMat matmul(const CMat& a, const CMat& b) {
  CMat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CMat adjoint(const CMat& a) {
  CMat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

CVec matvec(const CMat& a, const CVec& x) {
  CVec y(a.rows(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

namespace {

// In-place LU with partial pivoting; returns the pivot sign, or 0 if a
// pivot column is exactly zero. perm[i] records the chosen row per step.
int lu_factor(CMat& m, std::vector<std::size_t>& perm) {
  const std::size_t n = m.rows();
  perm.resize(n);
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        p = i;
      }
    }
    perm[k] = p;
    if (best == 0.0) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = m(i, k) / m(k, k);
      m(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return sign;
}

}  // namespace

cplx det(const CMat& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("det: matrix must be square");
  if (a.rows() == 0) return cplx{1.0, 0.0};
  CMat m = a;
  std::vector<std::size_t> perm;
  const int sign = lu_factor(m, perm);
  if (sign == 0) return cplx{0.0, 0.0};
  cplx d{static_cast<double>(sign), 0.0};
  for (std::size_t i = 0; i < m.rows(); ++i) d *= m(i, i);
  return d;
}

CVec solve(const CMat& a, const CVec& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("solve: shape mismatch");
  const std::size_t n = a.rows();
  CMat m = a;
  std::vector<std::size_t> perm;
  if (lu_factor(m, perm) == 0)
    throw std::runtime_error("solve: singular matrix");
  CVec x = b;
  // All row swaps first; the stored multipliers refer to final positions.
  for (std::size_t k = 0; k < n; ++k)
    if (perm[k] != k) std::swap(x[k], x[perm[k]]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = k + 1; i < n; ++i) x[i] -= m(i, k) * x[k];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= m(i, j) * x[j];
    x[i] /= m(i, i);
  }
  return x;
}

CVec solve_transpose(const CMat& a, const CVec& b) {
  CMat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return solve(t, b);
}

CVec project_out(const CVec& v, const std::vector<CVec>& q) {
  CVec r = v;
  for (const CVec& u : q) {
    const cplx c = vdot(u, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * u[i];
  }
  return r;
}

std::vector<CVec> orthonormal_basis(const std::vector<CVec>& vs, double tol) {
  std::vector<CVec> q;
  for (const CVec& v : vs) {
    const double v0 = norm(v);
    if (v0 == 0.0) continue;
    CVec r = project_out(v, q);
    r = project_out(r, q);  // second pass guards against cancellation
    const double rn = norm(r);
    if (rn > tol * v0) {
      scale(r, cplx{1.0 / rn, 0.0});
      q.push_back(std::move(r));
    }
  }
  return q;
}

std::vector<CVec> orth_complement(const std::vector<CVec>& vs,
                                  std::size_t dim, double tol) {
  std::vector<CVec> q = orthonormal_basis(vs, tol);
  std::vector<CVec> comp;
  for (std::size_t i = 0; i < dim && q.size() < dim; ++i) {
    CVec e(dim, cplx{0.0, 0.0});
    e[i] = 1.0;
    CVec r = project_out(e, q);
    r = project_out(r, q);
    const double rn = norm(r);
    if (rn > tol) {
      scale(r, cplx{1.0 / rn, 0.0});
      q.push_back(r);
      comp.push_back(std::move(r));
    }
  }
  return comp;
}

EigResult hermitian_eig(const CMat& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("hermitian_eig: matrix must be square");
  const std::size_t n = a.rows();
  CMat m = a;
  CMat v = CMat::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += std::norm(m(i, j));
    return std::sqrt(s);
  };

  double scale_ref = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      scale_ref = std::max(scale_ref, std::abs(m(i, j)));
  const double stop = 1e-14 * std::max(scale_ref, 1e-300);

  for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = m(p, q);
        const double mag = std::abs(apq);
        if (mag <= stop / n) continue;
        const cplx phase = apq / mag;
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t =
            (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        // Unitary J acting on the (p,q) plane: J_pp = c, J_pq = s*phase,
        // J_qp = -s*conj(phase), J_qq = c; apply m <- J^H m J, v <- v J.
        for (std::size_t i = 0; i < n; ++i) {
          const cplx mip = m(i, p), miq = m(i, q);
          m(i, p) = c * mip - s * std::conj(phase) * miq;
          m(i, q) = s * phase * mip + c * miq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const cplx mpj = m(p, j), mqj = m(q, j);
          m(p, j) = c * mpj - s * phase * mqj;
          m(q, j) = s * std::conj(phase) * mpj + c * mqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * std::conj(phase) * viq;
          v(i, q) = s * phase * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return m(i, i).real() < m(j, j).real();
  });

  EigResult res;
  res.values.resize(n);
  res.vectors = CMat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    res.values[j] = m(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
  }
  return res;
}

double cond2(const CMat& a) {
  const CMat g = matmul(adjoint(a), a);
  const EigResult e = hermitian_eig(g);
  const double lo = e.values.front();
  const double hi = e.values.back();
  if (lo <= 0.0 || hi <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(hi / lo);
}

}  // namespace ccsim
