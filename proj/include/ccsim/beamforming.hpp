// SPDX-License-Identifier: Apache-2.0
//
// Multicast beamformer design: closed-form zero forcing and the SCA loop
// for the convexified max-min rate problem under the per-interval power
// budget sum_d sum_T |A_T(d)|^2 ||w_T||^2 <= delta * P_T.
#pragma once

#include <cstdint>
#include <vector>

#include "ccsim/channel.hpp"
#include "ccsim/coefficients.hpp"
#include "ccsim/combinatorics.hpp"
#include "ccsim/linalg.hpp"

namespace ccsim {

struct BeamformerSet {
  std::vector<CVec> w;  // one L-dimensional vector per group, global order
};

// sum_d sum_T |A_T(d)|^2 ||w_T||^2
double beamformer_power(const CoefficientMatrix& a, const BeamformerSet& w);

// Unit-norm ZF directions: w_T spans the (one-dimensional) null space of
// the non-members' channels, with the first nonzero coordinate rotated to
// the positive real axis. Throws DegenerateChannel when the null space is
// not one-dimensional.
BeamformerSet zf_directions(const ChannelRealization& ch,
                            const GroupIndex& index);

// ZF directions with equal power per group, scaled so the power budget
// holds with equality.
BeamformerSet zf_beamformers(const ChannelRealization& ch,
                             const GroupIndex& index,
                             const CoefficientMatrix& a, double P_T);

// First-order Taylor lower bound of f(w, gamma) = |c h^H w|^2 / gamma at
// the expansion point (w_bar, gamma_bar > 0). f is jointly convex, so the
// bound is global.
double taylor_lower_bound(const CVec& w, double gamma, const CVec& w_bar,
                          double gamma_bar, cplx c, const CVec& h);

struct ScaOptions {
  int max_iters = 50;
  double tol = 1e-4;          // stop when the objective gain drops below
  double gamma_floor = 1e-6;  // floor for expansion-point SINRs
};

struct ScaIterate {
  int iter;
  double r;  // bits/s/Hz, log2(1 + min achievable stream SINR bound)
  bool feasible;
};

struct ScaTrace {
  std::vector<ScaIterate> iters;
  bool solver_failure = false;
};

struct ScaResult {
  BeamformerSet w;
  ScaTrace trace;
};

// Successive convex approximation from `init` (ZF beamformers when null).
// Each subproblem maximizes the common rate bound with the SINR fractions
// replaced by their Taylor lower bounds at the previous iterate; it is
// solved to high accuracy by a log-barrier Newton method on the
// equivalent max-min concave quadratic program.
ScaResult sca_optimize(const ChannelRealization& ch, const GroupIndex& index,
                       const CoefficientMatrix& a, double P_T, double N0,
                       const ScaOptions& opts = {},
                       const BeamformerSet* init = nullptr);

}  // namespace ccsim
