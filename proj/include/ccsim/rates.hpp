// SPDX-License-Identifier: Apache-2.0
//
// SINR and rate evaluation. stream_sinr implements the determinant form;
// oracle_sinr_via_elimination rebuilds the per-user linear system and
// eliminates the other intended streams with an explicitly computed
// combining row, so the two routes are independent implementations of the
// same quantity.
#pragma once

#include <cstdint>
#include <vector>

#include "ccsim/beamforming.hpp"
#include "ccsim/channel.hpp"
#include "ccsim/coefficients.hpp"
#include "ccsim/combinatorics.hpp"

namespace ccsim {

// |det(A_k) h_k^H w_{T_k^n}|^2 over the interference determinants plus the
// aggregated noise term. n is 0-based.
double stream_sinr(const CoefficientMatrix& a, UserId k, int n,
                   const ChannelRealization& ch, const BeamformerSet& w,
                   double N0);

// Ground-truth SINR via Cramer-style elimination of the other delta-1
// intended streams; no determinant identities are used on the
// interference/noise side.
double oracle_sinr_via_elimination(const CoefficientMatrix& a, UserId k, int n,
                                   const ChannelRealization& ch,
                                   const BeamformerSet& w, double N0);

struct DecodeResult {
  // Per user (serving-set order), per stream: worst-case symbol residual
  // and the empirical SNR of the estimates (only meaningful with noise).
  std::vector<std::vector<double>> max_residual;
  std::vector<std::vector<double>> empirical_snr;
  double worst_residual = 0.0;
};

// Simulates the per-symbol linear system of one interval and decodes each
// user's intended symbols with the elimination combining rows.
DecodeResult decode_oracle(const CoefficientMatrix& a,
                           const ChannelRealization& ch,
                           const BeamformerSet& w, std::uint64_t seed,
                           bool noise_on, int n_symbols, double N0);

struct RateReport {
  std::vector<std::vector<double>> gamma;  // [user][stream], linear SINR
  std::vector<std::vector<double>> rate;   // log2(1 + gamma), bits/s/Hz
  std::vector<double> user_min_rate;       // R_k^LIN
  double interval_goodput = 0.0;           // delta * min_k R_k^LIN
};

RateReport interval_rate_report(const CoefficientMatrix& a,
                                const ChannelRealization& ch,
                                const BeamformerSet& w, double N0);

// Symmetric per-stream rate of a delta-stream Gaussian MAC decoded with
// SIC: min over nonempty subsets S of (1/|S|) log2(1 + sum_S gain/N0).
double mac_symmetric_rate(const std::vector<double>& gains, double N0);

// One-shot baseline: ZF multicast beamformers with equal power sharing
// P_T, each user SIC-decodes its delta streams. Returns delta * min_k R_k.
double sic_zf_baseline_rate(const ChannelRealization& ch,
                            const GroupIndex& index, double N0, double P_T);

// Unicast baseline without coded caching: K cyclic slots of L users each,
// per-slot unicast ZF with power P_T/L per user; the local caching gain
// rescales by 1/(1 - M/N).
double no_cc_baseline_rate(const ChannelRealization& ch, int L,
                           double cache_fraction, double N0, double P_T);

}  // namespace ccsim
