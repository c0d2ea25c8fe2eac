// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo sweep driver: wires channel draws, user ordering, matrix
// generation, beamforming and rate evaluation into reproducible SNR
// sweeps with CSV output. N0 is fixed to 1, so SNR in dB sets P_T.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccsim/coefficients.hpp"

namespace ccsim {

enum class BeamformerKind { zf, sca };
enum class OrderingMode {
  fixed,
  successive_projection,
  successive_projection_no_reverse
};

std::string to_string(BeamformerKind b);
std::string to_string(OrderingMode o);

struct SweepConfig {
  int K = 0, L = 0, t = 0;
  std::optional<double> m_over_n;  // cache fraction, defaults to t/K
  std::vector<double> snr_db;
  int draws = 200;
  Strategy strategy = Strategy::sparse;
  BeamformerKind beamformer = BeamformerKind::zf;
  OrderingMode ordering = OrderingMode::fixed;
  bool baseline_sic_zf = false;
  bool baseline_no_cc = false;
  int serving_set_samples = 10;  // used when K > t+L
  std::uint64_t master_seed = 1;
  int q = 17;  // field size for the random strategy
  int sca_max_iters = 50;
  double sca_tol = 1e-4;

  void validate() const;
  double cache_fraction() const;
  std::string scheme_label() const;  // e.g. "sparse+zf", "sparse+sca+sp"
};

// Line-based `key = value` format; lists are comma-separated; '#' starts
// a comment. Unknown keys are errors.
SweepConfig parse_sweep_config(std::istream& is);
SweepConfig parse_sweep_config_file(const std::string& path);

struct DrawOutcome {
  bool ok = false;
  double value = 0.0;
  std::string error;
};

struct SchemeSamples {
  std::string scheme;
  std::vector<DrawOutcome> per_draw;
};

struct SnrSamples {
  double snr_db = 0.0;
  std::vector<SchemeSamples> schemes;
};

// Per-draw goodput samples for every requested scheme; all schemes of one
// draw share the channel and serving-set realizations, so comparisons are
// paired. Fully deterministic in (config, master_seed).
std::vector<SnrSamples> run_draws(const SweepConfig& config,
                                  const std::string& sca_trace_dir = "");

struct SweepRow {
  double snr_db;
  std::string scheme;
  double mean_rate;
  double std_err;
  int draws;
  int failed;
  std::uint64_t seed;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// Mean and standard error per (snr, scheme); throws SolverError when more
// than 5% of a scheme's draws failed.
SweepResult aggregate_samples(const std::vector<SnrSamples>& samples,
                              const SweepConfig& config);

SweepResult run_sweep(const SweepConfig& config,
                      const std::string& sca_trace_dir = "");

// Header `snr_db,scheme,mean_rate,std_err,draws,failed,seed`; 6 significant
// digits; rows ordered by snr ascending then scheme lexicographic.
void emit_csv(const SweepResult& result, std::ostream& os);
void emit_csv(const SweepResult& result, const std::string& path);

}  // namespace ccsim
