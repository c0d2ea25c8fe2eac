// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used as test oracles. These stay
// deliberately naive (cofactor expansion, explicit Gram inverses) so they
// share no code path with the library.
#pragma once

#include <cstdint>
#include <vector>

#include "ccsim/linalg.hpp"
#include "ccsim/rng.hpp"

namespace testutil {

using ccsim::CMat;
using ccsim::cplx;
using ccsim::CVec;

inline cplx det_cofactor(const CMat& a) {
  const std::size_t n = a.rows();
  if (n == 0) return cplx{1.0, 0.0};
  if (n == 1) return a(0, 0);
  cplx sum{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    CMat minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(i - 1, cc++) = a(i, c);
      }
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * a(0, j) * det_cofactor(minor);
  }
  return sum;
}

inline CMat random_cmat(std::size_t rows, std::size_t cols,
                        std::uint64_t seed) {
  ccsim::Rng rng(seed);
  CMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
  return m;
}

}  // namespace testutil
