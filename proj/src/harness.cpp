// SPDX-License-Identifier: Apache-2.0
#include "ccsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "ccsim/beamforming.hpp"
#include "ccsim/channel.hpp"
#include "ccsim/errors.hpp"
#include "ccsim/rates.hpp"
#include "ccsim/rng.hpp"

namespace ccsim {

namespace {

// Seed-derivation purposes; keep stable, they define reproducibility.
constexpr std::uint64_t kSeedChannel = 1;
constexpr std::uint64_t kSeedServing = 2;
constexpr std::uint64_t kSeedMatrix = 3;
constexpr std::uint64_t kSeedFrame = 4;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  }
}

int parse_int(const std::string& v, const std::string& key) {
  const double d = parse_double(v, key);
  const int i = static_cast<int>(std::llround(d));
  if (std::abs(d - i) > 1e-9)
    throw ConfigError("expected integer for '" + key + "': " + v);
  return i;
}

}  // namespace

std::string to_string(BeamformerKind b) {
  return b == BeamformerKind::zf ? "zf" : "sca";
}

std::string to_string(OrderingMode o) {
  switch (o) {
    case OrderingMode::fixed: return "fixed";
    case OrderingMode::successive_projection: return "successive_projection";
    case OrderingMode::successive_projection_no_reverse:
      return "successive_projection_no_reverse";
  }
  return "?";
}

void SweepConfig::validate() const {
  if (t < 0 || L < 1 || K < 1) throw ConfigError("need K >= 1, L >= 1, t >= 0");
  if (K < t + L) throw ConfigError("need K >= t + L");
  if (snr_db.empty()) throw ConfigError("snr_db must be a nonempty list");
  if (draws < 1) throw ConfigError("draws must be at least 1");
  if (serving_set_samples < 1)
    throw ConfigError("serving_set_samples must be at least 1");
  if (q < 2) throw ConfigError("q must be at least 2");
  if (sca_max_iters < 1) throw ConfigError("sca_max_iters must be at least 1");
  if (sca_tol <= 0.0) throw ConfigError("sca_tol must be positive");
  if (m_over_n && (*m_over_n < 0.0 || *m_over_n >= 1.0))
    throw ConfigError("m_over_n must lie in [0, 1)");
  if (baseline_no_cc && K < L) throw ConfigError("no_cc baseline needs K >= L");
}

double SweepConfig::cache_fraction() const {
  return m_over_n ? *m_over_n
                  : static_cast<double>(t) / static_cast<double>(K);
}

std::string SweepConfig::scheme_label() const {
  std::string s = to_string(strategy) + "+" + to_string(beamformer);
  if (ordering == OrderingMode::successive_projection) s += "+sp";
  if (ordering == OrderingMode::successive_projection_no_reverse)
    s += "+sp_noreverse";
  return s;
}

SweepConfig parse_sweep_config(std::istream& is) {
  SweepConfig c;
  std::string line;
  int lineno = 0;
  bool have_snr = false;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "k") {
      c.K = parse_int(val, key);
    } else if (key == "l") {
      c.L = parse_int(val, key);
    } else if (key == "t") {
      c.t = parse_int(val, key);
    } else if (key == "m_over_n") {
      c.m_over_n = parse_double(val, key);
    } else if (key == "snr_db") {
      c.snr_db.clear();
      for (const std::string& v : split_list(val))
        c.snr_db.push_back(parse_double(v, key));
      have_snr = true;
    } else if (key == "draws") {
      c.draws = parse_int(val, key);
    } else if (key == "strategy") {
      c.strategy = strategy_from_string(val);
    } else if (key == "beamformer") {
      if (val == "zf")
        c.beamformer = BeamformerKind::zf;
      else if (val == "sca")
        c.beamformer = BeamformerKind::sca;
      else
        throw ConfigError("unknown beamformer: " + val);
    } else if (key == "ordering") {
      if (val == "fixed")
        c.ordering = OrderingMode::fixed;
      else if (val == "successive_projection")
        c.ordering = OrderingMode::successive_projection;
      else if (val == "successive_projection_no_reverse")
        c.ordering = OrderingMode::successive_projection_no_reverse;
      else
        throw ConfigError("unknown ordering: " + val);
    } else if (key == "baselines") {
      for (const std::string& v : split_list(val)) {
        if (v == "sic_zf")
          c.baseline_sic_zf = true;
        else if (v == "no_cc")
          c.baseline_no_cc = true;
        else
          throw ConfigError("unknown baseline: " + v);
      }
    } else if (key == "serving_set_samples") {
      c.serving_set_samples = parse_int(val, key);
    } else if (key == "master_seed") {
      try {
        c.master_seed = std::stoull(val);
      } catch (const std::exception&) {
        throw ConfigError("bad master_seed: " + val);
      }
    } else if (key == "q") {
      c.q = parse_int(val, key);
    } else if (key == "sca_max_iters") {
      c.sca_max_iters = parse_int(val, key);
    } else if (key == "sca_tol") {
      c.sca_tol = parse_double(val, key);
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  if (!have_snr) throw ConfigError("missing required key snr_db");
  c.validate();
  return c;
}

SweepConfig parse_sweep_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError("cannot open config: " + path);
  return parse_sweep_config(f);
}

namespace {

std::vector<UserId> sample_serving_set(int K, int m, Rng& rng) {
  std::vector<UserId> pool(static_cast<std::size_t>(K));
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < m; ++i) {
    const int j = i + rng.uniform_int(K - i);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(m));
  std::sort(pool.begin(), pool.end());
  return pool;
}

void dump_sca_trace(const std::string& dir, double snr_db, int draw, int set,
                    const ScaTrace& trace) {
  char name[128];
  std::snprintf(name, sizeof(name), "/sca_snr%g_draw%d_set%d.csv", snr_db,
                draw, set);
  std::ofstream f(dir + name);
  if (!f) throw FileError("cannot write SCA trace in " + dir);
  f << "iter,r,feasible\n";
  for (const ScaIterate& it : trace.iters)
    f << it.iter << ',' << it.r << ',' << (it.feasible ? 1 : 0) << '\n';
}

}  // namespace

std::vector<SnrSamples> run_draws(const SweepConfig& config,
                                  const std::string& sca_trace_dir) {
  config.validate();
  const int m = config.t + config.L;

  std::vector<double> snrs = config.snr_db;
  std::sort(snrs.begin(), snrs.end());
  snrs.erase(std::unique(snrs.begin(), snrs.end()), snrs.end());

  std::vector<std::string> scheme_names{config.scheme_label()};
  if (config.baseline_sic_zf) scheme_names.push_back("sic_zf");
  if (config.baseline_no_cc) scheme_names.push_back("no_cc");

  // The equal-distance frame is channel-independent; build it once.
  CMat frame_entries;
  bool have_frame = false;

  std::vector<SnrSamples> out;
  for (const double snr : snrs) {
    const double N0 = 1.0;
    const double P_T = N0 * std::pow(10.0, snr / 10.0);

    SnrSamples block;
    block.snr_db = snr;
    for (const std::string& name : scheme_names) {
      block.schemes.push_back(
          {name, std::vector<DrawOutcome>(static_cast<std::size_t>(config.draws))});
    }

    for (int d = 0; d < config.draws; ++d) {
      const ChannelRealization ch = draw_channel(
          config.K, config.L, mix_seed(config.master_seed, kSeedChannel, d));

      // Serving sets are shared by every scheme of this draw.
      std::vector<std::vector<UserId>> sets;
      if (config.K == m) {
        std::vector<UserId> all(static_cast<std::size_t>(config.K));
        std::iota(all.begin(), all.end(), 1);
        sets.push_back(std::move(all));
      } else {
        Rng rng(mix_seed(config.master_seed, kSeedServing, d));
        for (int s = 0; s < config.serving_set_samples; ++s)
          sets.push_back(sample_serving_set(config.K, m, rng));
      }

      auto record = [&](std::size_t scheme_idx, auto&& eval) {
        DrawOutcome& slot =
            block.schemes[scheme_idx].per_draw[static_cast<std::size_t>(d)];
        try {
          slot.value = eval();
          slot.ok = true;
        } catch (const Error& e) {
          slot.ok = false;
          slot.error = e.what();
        }
      };

      record(0, [&]() {
        double sum = 0.0;
        for (std::size_t si = 0; si < sets.size(); ++si) {
          const GroupIndex index = enumerate_multicast_groups(sets[si], config.t);
          std::vector<UserId> priority = index.serving_set;
          if (config.ordering != OrderingMode::fixed) {
            const UserOrdering ord =
                successive_projection_order(ch, index.serving_set);
            priority = config.ordering == OrderingMode::successive_projection
                           ? ord.priority_for_sparse
                           : ord.order;
          }

          CoefficientMatrix a;
          switch (config.strategy) {
            case Strategy::sparse:
              a = sparse_generate(index, priority);
              break;
            case Strategy::random:
              a = random_generate(
                  index, config.q,
                  mix_seed(mix_seed(config.master_seed, kSeedMatrix, d),
                           static_cast<std::uint64_t>(si)));
              break;
            case Strategy::equal_distance:
              if (!have_frame) {
                CoefficientMatrix tmp = equal_distance_generate(
                    index, 1e-6, 5000, mix_seed(config.master_seed, kSeedFrame));
                frame_entries = tmp.entries;
                have_frame = true;
              }
              a.entries = frame_entries;
              a.strategy = Strategy::equal_distance;
              a.index = index;
              break;
          }

          BeamformerSet w;
          if (config.beamformer == BeamformerKind::zf) {
            w = zf_beamformers(ch, index, a, P_T);
          } else {
            ScaOptions opts;
            opts.max_iters = config.sca_max_iters;
            opts.tol = config.sca_tol;
            ScaResult res = sca_optimize(ch, index, a, P_T, N0, opts);
            if (!sca_trace_dir.empty())
              dump_sca_trace(sca_trace_dir, snr, d, static_cast<int>(si),
                             res.trace);
            w = std::move(res.w);
          }
          sum += interval_rate_report(a, ch, w, N0).interval_goodput;
        }
        return sum / static_cast<double>(sets.size());
      });

      std::size_t idx = 1;
      if (config.baseline_sic_zf) {
        record(idx++, [&]() {
          double sum = 0.0;
          for (const std::vector<UserId>& s : sets) {
            const GroupIndex index = enumerate_multicast_groups(s, config.t);
            sum += sic_zf_baseline_rate(ch, index, N0, P_T);
          }
          return sum / static_cast<double>(sets.size());
        });
      }
      if (config.baseline_no_cc) {
        record(idx++, [&]() {
          return no_cc_baseline_rate(ch, config.L, config.cache_fraction(), N0,
                                     P_T);
        });
      }
    }
    out.push_back(std::move(block));
  }
  return out;
}

SweepResult aggregate_samples(const std::vector<SnrSamples>& samples,
                              const SweepConfig& config) {
  SweepResult result;
  for (const SnrSamples& block : samples) {
    for (const SchemeSamples& sch : block.schemes) {
      int failed = 0;
      double sum = 0.0;
      int n = 0;
      for (const DrawOutcome& o : sch.per_draw) {
        if (o.ok) {
          sum += o.value;
          ++n;
        } else {
          ++failed;
        }
      }
      const int total = static_cast<int>(sch.per_draw.size());
      if (failed * 20 > total)
        throw SolverError("sweep: more than 5% of draws failed for scheme " +
                          sch.scheme + " at snr " + std::to_string(block.snr_db));
      const double mean = n > 0 ? sum / n : 0.0;
      double var = 0.0;
      for (const DrawOutcome& o : sch.per_draw)
        if (o.ok) var += (o.value - mean) * (o.value - mean);
      const double stderr_ = n > 1 ? std::sqrt(var / (n - 1)) / std::sqrt(n) : 0.0;
      result.rows.push_back({block.snr_db, sch.scheme, mean, stderr_, total,
                             failed, config.master_seed});
    }
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
              return a.scheme < b.scheme;
            });
  return result;
}

SweepResult run_sweep(const SweepConfig& config,
                      const std::string& sca_trace_dir) {
  return aggregate_samples(run_draws(config, sca_trace_dir), config);
}

void emit_csv(const SweepResult& result, std::ostream& os) {
  os << "snr_db,scheme,mean_rate,std_err,draws,failed,seed\n";
  char buf[64];
  for (const SweepRow& r : result.rows) {
    std::snprintf(buf, sizeof(buf), "%.6g", r.snr_db);
    os << buf << ',' << r.scheme << ',';
    std::snprintf(buf, sizeof(buf), "%.6g", r.mean_rate);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.6g", r.std_err);
    os << buf << ',' << r.draws << ',' << r.failed << ',' << r.seed << '\n';
  }
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw FileError("cannot open for writing: " + path);
  emit_csv(result, f);
  if (!f) throw FileError("write failed: " + path);
}

}  // namespace ccsim
