// SPDX-License-Identifier: Apache-2.0
//
// Construction of the delta x |S^K| multicast coefficient matrix under the
// sparse / equal-distance / random strategies, plus the user submatrices
// and determinant machinery consumed by the SINR engine.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccsim/combinatorics.hpp"
#include "ccsim/linalg.hpp"

namespace ccsim {

enum class Strategy { sparse, equal_distance, random };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct GenStats {
  int reseeds = 0;       // redraws / reseeds spent to reach decodability
  bool converged = true;  // equal-distance solver reached its tolerance
  double coherence = 0.0;         // max pairwise |inner product|
  double coherence_spread = 0.0;  // max - min pairwise |inner product|
  double welch_bound = 0.0;
};

struct CoefficientMatrix {
  CMat entries;  // delta rows, one column per group in global order
  Strategy strategy = Strategy::sparse;
  GroupIndex index;
  GenStats stats;
};

// The ordered candidate pool E of Algorithm 1: every nonzero {0,1} vector
// of length delta as a bitmask (bit l set = basis vector e_{l+1}), sorted
// by ascending popcount, lexicographic on the index tuples within a tier.
std::vector<std::uint32_t> sparse_basis_pool(int delta);

// Greedy sparse construction. Users are visited in `priority` order; each
// of a user's unassigned groups (in global group order) receives the first
// still-admissible pool vector. Admissibility tracks, per user, the GF(2)
// span of the vectors already assigned to that user's groups, so every
// user submatrix stays invertible by construction. Within the singleton
// tier the scan resumes cyclically after the last assigned basis vector,
// which keeps a user's consecutive groups on distinct basis vectors.
CoefficientMatrix sparse_generate(const GroupIndex& index,
                                  const std::vector<UserId>& priority);

// I.i.d. uniform draws over {0,...,q-1}, embedded as real values; redraws
// the whole matrix until every user submatrix is well conditioned.
CoefficientMatrix random_generate(const GroupIndex& index, int q,
                                  std::uint64_t seed, int max_retries = 100);

struct FrameResult {
  CMat frame;  // delta x n, unit-norm columns
  GenStats stats;
};

// Near-equiangular unit-norm frame via alternating projection between the
// set of Gram matrices with unit diagonal and off-diagonal magnitudes at
// most the Welch bound and the set of rank-delta PSD matrices.
FrameResult equal_distance_frame(int delta, int n, double tol, int max_iters,
                                 std::uint64_t seed);

CoefficientMatrix equal_distance_generate(const GroupIndex& index, double tol,
                                          int max_iters, std::uint64_t seed,
                                          int max_reseeds = 20);

// A_k: columns of user k's intended groups, in global group order.
CMat user_submatrix(const CoefficientMatrix& a, UserId k);

// B_{n,m}: A_k with intended column n replaced by interfering column m.
// Indices are 0-based.
CMat interference_submatrix(const CoefficientMatrix& a, UserId k, int n,
                            int m);

// sum_j |det N_{n,j}|^2 where N_{n,j} removes row j from the intended
// columns of user k excluding column n. Equals 1 for delta == 1.
double noise_amplification(const CoefficientMatrix& a, UserId k, int n);

struct DecodabilityReport {
  struct PerUser {
    UserId user;
    double abs_det;
    double cond;
    bool ok;
  };
  std::vector<PerUser> users;
  bool pass = false;
  double det_threshold;
  double cond_threshold;
};

constexpr double kDetThreshold = 1e-9;
constexpr double kCondThreshold = 1e9;

DecodabilityReport validate_decodability(const CoefficientMatrix& a,
                                         double det_threshold = kDetThreshold,
                                         double cond_threshold = kCondThreshold);

// Plain-text CSV with a header row of group labels and one row per
// sub-interval; entries are "re+imj" tokens.
void write_matrix_csv(const CoefficientMatrix& a, std::ostream& os);
void write_matrix_csv(const CoefficientMatrix& a, const std::string& path);
CoefficientMatrix read_matrix_csv(std::istream& is, const GroupIndex& index);
CoefficientMatrix read_matrix_csv(const std::string& path,
                                  const GroupIndex& index);

}  // namespace ccsim
