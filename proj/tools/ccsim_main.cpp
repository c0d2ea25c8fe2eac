// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: coefficient-matrix generation and validation,
// channel ordering, and Monte Carlo SNR sweeps.
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccsim/beamforming.hpp"
#include "ccsim/channel.hpp"
#include "ccsim/coefficients.hpp"
#include "ccsim/errors.hpp"
#include "ccsim/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct GenMatrixArgs {
  int k = 0, l = 0, t = 0;
  std::string strategy = "sparse";
  std::vector<int> priority;
  std::uint64_t seed = 1;
  int q = 17;
  std::string out;
};

int run_gen_matrix(const GenMatrixArgs& args) {
  if (args.k != args.t + args.l)
    throw ccsim::ConfigError(
        "gen-matrix operates on the full serving set {1..k}; need k == t + l");
  std::vector<ccsim::UserId> serving(static_cast<std::size_t>(args.k));
  std::iota(serving.begin(), serving.end(), 1);
  const ccsim::GroupIndex index =
      ccsim::enumerate_multicast_groups(serving, args.t);

  std::vector<ccsim::UserId> priority = args.priority;
  if (priority.empty()) priority = serving;

  ccsim::CoefficientMatrix a;
  switch (ccsim::strategy_from_string(args.strategy)) {
    case ccsim::Strategy::sparse:
      a = ccsim::sparse_generate(index, priority);
      break;
    case ccsim::Strategy::random:
      a = ccsim::random_generate(index, args.q, args.seed);
      break;
    case ccsim::Strategy::equal_distance:
      a = ccsim::equal_distance_generate(index, 1e-6, 5000, args.seed);
      break;
  }
  ccsim::write_matrix_csv(a, args.out);
  std::printf("wrote %dx%d %s matrix to %s\n", index.delta, index.n_groups(),
              args.strategy.c_str(), args.out.c_str());
  return kExitOk;
}

struct ValidateArgs {
  std::string matrix;
  int k = 0, l = 0, t = 0;
};

int run_validate(const ValidateArgs& args) {
  if (args.k != args.t + args.l)
    throw ccsim::ConfigError("validate expects k == t + l");
  std::vector<ccsim::UserId> serving(static_cast<std::size_t>(args.k));
  std::iota(serving.begin(), serving.end(), 1);
  const ccsim::GroupIndex index =
      ccsim::enumerate_multicast_groups(serving, args.t);
  const ccsim::CoefficientMatrix a = ccsim::read_matrix_csv(args.matrix, index);
  const ccsim::DecodabilityReport rep = ccsim::validate_decodability(a);
  for (const auto& u : rep.users)
    std::printf("user %d: |det(A_k)| = %.6g, cond = %.6g -> %s\n", u.user,
                u.abs_det, u.cond, u.ok ? "ok" : "SINGULAR");
  std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
  return rep.pass ? kExitOk : kExitValidationFailure;
}

int run_order_users(const std::string& channels_path) {
  const ccsim::ChannelRealization ch = ccsim::read_channel_csv(channels_path);
  std::vector<ccsim::UserId> users(ch.H.rows());
  std::iota(users.begin(), users.end(), 1);
  const ccsim::UserOrdering ord =
      ccsim::successive_projection_order(ch, users);
  std::printf("order:");
  for (ccsim::UserId k : ord.order) std::printf(" %d", k);
  std::printf("\npriority:");
  for (ccsim::UserId k : ord.priority_for_sparse) std::printf(" %d", k);
  std::printf("\n");
  return kExitOk;
}

struct SweepArgs {
  std::string config;
  std::string out;
  std::string sca_trace;
};

int run_sweep_cmd(const SweepArgs& args) {
  const ccsim::SweepConfig config =
      ccsim::parse_sweep_config_file(args.config);
  const ccsim::SweepResult result = ccsim::run_sweep(config, args.sca_trace);
  ccsim::emit_csv(result, args.out);
  std::printf("wrote %zu rows to %s\n", result.rows.size(), args.out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SIC-free multi-antenna coded caching delivery simulator"};
  app.require_subcommand(1);

  GenMatrixArgs gen;
  CLI::App* cmd_gen = app.add_subcommand(
      "gen-matrix", "Generate a multicast coefficient matrix as CSV");
  cmd_gen->add_option("--k", gen.k, "user count (must equal t + l)")->required();
  cmd_gen->add_option("--l", gen.l, "transmit antennas")->required();
  cmd_gen->add_option("--t", gen.t, "coded-caching gain")->required();
  cmd_gen->add_option("--strategy", gen.strategy,
                      "sparse | equal_distance | random");
  cmd_gen->add_option("--priority", gen.priority,
                      "user priority order for the sparse strategy")
      ->delimiter(',');
  cmd_gen->add_option("--seed", gen.seed, "generation seed");
  cmd_gen->add_option("--q", gen.q, "field size for the random strategy");
  cmd_gen->add_option("--out", gen.out, "output CSV path")->required();

  ValidateArgs val;
  CLI::App* cmd_val = app.add_subcommand(
      "validate", "Check per-user decodability of a matrix CSV");
  cmd_val->add_option("--matrix", val.matrix, "matrix CSV path")->required();
  cmd_val->add_option("--k", val.k, "user count")->required();
  cmd_val->add_option("--l", val.l, "transmit antennas")->required();
  cmd_val->add_option("--t", val.t, "coded-caching gain")->required();

  std::string channels_path;
  CLI::App* cmd_ord = app.add_subcommand(
      "order-users", "Successive-projection order for a channel CSV");
  cmd_ord->add_option("--channels", channels_path, "channel CSV path")
      ->required();

  SweepArgs sweep;
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "Run a Monte Carlo SNR sweep");
  cmd_sweep->add_option("--config", sweep.config, "sweep config file")
      ->required();
  cmd_sweep->add_option("--out", sweep.out, "output CSV path")->required();
  cmd_sweep->add_option("--sca-trace", sweep.sca_trace,
                        "directory for per-iteration SCA traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (cmd_gen->parsed()) return run_gen_matrix(gen);
    if (cmd_val->parsed()) return run_validate(val);
    if (cmd_ord->parsed()) return run_order_users(channels_path);
    if (cmd_sweep->parsed()) return run_sweep_cmd(sweep);
  } catch (const ccsim::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  } catch (const ccsim::InvalidParameters& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  } catch (const ccsim::FileError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  } catch (const ccsim::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntimeError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntimeError;
  }
  return kExitOk;
}
