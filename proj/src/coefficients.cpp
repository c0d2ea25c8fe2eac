// SPDX-License-Identifier: Apache-2.0
#include "ccsim/coefficients.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ccsim/errors.hpp"
#include "ccsim/rng.hpp"

namespace ccsim {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::sparse: return "sparse";
    case Strategy::equal_distance: return "equal_distance";
    case Strategy::random: return "random";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "sparse") return Strategy::sparse;
  if (s == "equal_distance") return Strategy::equal_distance;
  if (s == "random") return Strategy::random;
  throw ConfigError("unknown strategy: " + s);
}

std::vector<std::uint32_t> sparse_basis_pool(int delta) {
  if (delta < 1 || delta > 22)
    throw InvalidParameters("sparse strategy supports 1 <= delta <= 22");
  std::vector<std::uint32_t> pool;
  pool.reserve((1u << delta) - 1);
  std::vector<int> comb;
  for (int m = 1; m <= delta; ++m) {
    comb.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) comb[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::uint32_t mask = 0;
      for (int c : comb) mask |= 1u << c;
      pool.push_back(mask);
      int i = m - 1;
      while (i >= 0 && comb[static_cast<std::size_t>(i)] == delta - m + i) --i;
      if (i < 0) break;
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < m; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return pool;
}

namespace {

CMat masks_to_matrix(const std::vector<std::uint32_t>& cols, int delta) {
  CMat m(static_cast<std::size_t>(delta), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < delta; ++i)
      if (cols[j] & (1u << i)) m(static_cast<std::size_t>(i), j) = 1.0;
  return m;
}

}  // namespace

CoefficientMatrix sparse_generate(const GroupIndex& index,
                                  const std::vector<UserId>& priority) {
  {
    std::vector<UserId> p = priority;
    std::sort(p.begin(), p.end());
    if (p != index.serving_set)
      throw InvalidParameters(
          "priority must be a permutation of the serving set");
  }
  const int delta = index.delta;
  const int n_groups = index.n_groups();
  const std::vector<std::uint32_t> pool = sparse_basis_pool(delta);
  const std::size_t span_size = 1u << delta;

  // forbidden[u][mask]: mask lies in the GF(2) span of the vectors already
  // assigned to groups containing user u.
  std::vector<std::vector<bool>> forbidden(
      static_cast<std::size_t>(index.n_users()),
      std::vector<bool>(span_size, false));
  std::vector<std::uint32_t> assigned(static_cast<std::size_t>(n_groups), 0);
  std::vector<bool> group_done(static_cast<std::size_t>(n_groups), false);
  std::vector<bool> user_done(static_cast<std::size_t>(index.n_users()), false);

  int scan_ptr = delta - 1;  // last assigned singleton index; scan starts past it

  for (UserId k : priority) {
    const int kp = index.user_pos(k);
    for (int col : index.intended[static_cast<std::size_t>(kp)]) {
      if (group_done[static_cast<std::size_t>(col)]) continue;
      const Group& g = index.groups[static_cast<std::size_t>(col)];

      auto admissible = [&](std::uint32_t mask) {
        for (UserId u : g)
          if (forbidden[static_cast<std::size_t>(index.user_pos(u))][mask])
            return false;
        return true;
      };

      std::uint32_t chosen = 0;
      bool found = false;
      for (int i = 0; i < delta && !found; ++i) {
        const int idx = (scan_ptr + 1 + i) % delta;
        const std::uint32_t mask = 1u << idx;
        if (admissible(mask)) {
          chosen = mask;
          scan_ptr = idx;
          found = true;
        }
      }
      for (std::size_t pi = static_cast<std::size_t>(delta);
           !found && pi < pool.size(); ++pi) {
        if (admissible(pool[pi])) {
          chosen = pool[pi];
          found = true;
        }
      }
      if (!found)
        throw GenerationInfeasible("no admissible vector left for group " +
                                   index.group_label(col));

      assigned[static_cast<std::size_t>(col)] = chosen;
      group_done[static_cast<std::size_t>(col)] = true;
      for (UserId u : g) {
        const std::size_t up = static_cast<std::size_t>(index.user_pos(u));
        if (user_done[up]) continue;
        std::vector<bool>& f = forbidden[up];
        for (std::size_t m = 1; m < span_size; ++m)
          if (f[m]) f[m ^ chosen] = true;
        f[chosen] = true;
      }
    }
    user_done[static_cast<std::size_t>(kp)] = true;
  }

  CoefficientMatrix a;
  a.entries = masks_to_matrix(assigned, delta);
  a.strategy = Strategy::sparse;
  a.index = index;
  return a;
}

CoefficientMatrix random_generate(const GroupIndex& index, int q,
                                  std::uint64_t seed, int max_retries) {
  if (q < 2) throw InvalidParameters("field size q must be at least 2");
  Rng rng(seed);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    CoefficientMatrix a;
    a.entries = CMat(static_cast<std::size_t>(index.delta),
                     static_cast<std::size_t>(index.n_groups()));
    for (std::size_t i = 0; i < a.entries.rows(); ++i)
      for (std::size_t j = 0; j < a.entries.cols(); ++j)
        a.entries(i, j) = static_cast<double>(rng.uniform_int(q));
    a.strategy = Strategy::random;
    a.index = index;
    a.stats.reseeds = attempt;
    if (validate_decodability(a).pass) return a;
  }
  throw GenerationInfeasible("random strategy: retry budget exhausted");
}

FrameResult equal_distance_frame(int delta, int n, double tol, int max_iters,
                                 std::uint64_t seed) {
  if (delta < 1 || n < delta)
    throw InvalidParameters("equal-distance frame needs n >= delta >= 1");
  Rng rng(seed);

  CMat a(static_cast<std::size_t>(delta), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = rng.cgaussian();

  auto normalize_cols = [](CMat& m) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) s += std::norm(m(i, j));
      s = std::sqrt(s);
      if (s > 0.0)
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) /= s;
    }
  };
  normalize_cols(a);

  FrameResult out;
  if (n == delta) {
    // Orthonormal frame: the pairwise inner products are all zero.
    std::vector<CVec> cols;
    for (std::size_t j = 0; j < a.cols(); ++j) cols.push_back(a.col(j));
    const std::vector<CVec> q = orthonormal_basis(cols, 1e-12);
    if (static_cast<int>(q.size()) != delta)
      throw GenerationInfeasible("degenerate random start for square frame");
    CMat b(static_cast<std::size_t>(delta), static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < q.size(); ++j) b.set_col(j, q[j]);
    out.frame = b;
    out.stats.converged = true;
    return out;
  }

  const double welch =
      std::sqrt(static_cast<double>(n - delta) /
                (static_cast<double>(delta) * static_cast<double>(n - 1)));
  out.stats.welch_bound = welch;

  auto coherence_stats = [&](const CMat& m, double& maxc, double& minc) {
    maxc = 0.0;
    minc = 2.0;
    for (std::size_t i = 0; i < m.cols(); ++i)
      for (std::size_t j = i + 1; j < m.cols(); ++j) {
        const double c = std::abs(vdot(m.col(i), m.col(j)));
        maxc = std::max(maxc, c);
        minc = std::min(minc, c);
      }
  };

  // Alternating projection between {diag = 1, |G_ij| <= welch} and the
  // rank-delta PSD set drives the frame toward a Welch-equality ETF when
  // one exists; the coherence then decays steadily while the off-diagonal
  // magnitudes stay equal. When no such frame exists the iteration stalls
  // at an unequal configuration, in which case a second phase equalizes
  // the magnitudes toward their achievable common value and the remaining
  // slack above the Welch bound is reported in the stats.
  auto gram_step = [&](const CMat& m, bool equalize) {
    CMat g = matmul(adjoint(m), m);
    double target = welch;
    if (equalize) {
      double mean = 0.0;
      int cnt = 0;
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = i + 1; j < g.cols(); ++j) {
          mean += std::abs(g(i, j));
          ++cnt;
        }
      target = mean / cnt;
    }
    for (std::size_t i = 0; i < g.rows(); ++i) {
      g(i, i) = 1.0;
      for (std::size_t j = 0; j < g.cols(); ++j) {
        if (i == j) continue;
        const double mag = std::abs(g(i, j));
        if (equalize)
          g(i, j) = mag < 1e-15 ? cplx{target, 0.0} : g(i, j) * (target / mag);
        else if (mag > target)
          g(i, j) *= target / mag;
      }
    }
    const EigResult e = hermitian_eig(g);
    CMat next(static_cast<std::size_t>(delta), static_cast<std::size_t>(n));
    for (int r = 0; r < delta; ++r) {
      const std::size_t ei = e.values.size() - 1 - static_cast<std::size_t>(r);
      const double s = std::sqrt(std::max(e.values[ei], 0.0));
      for (std::size_t j = 0; j < next.cols(); ++j)
        next(static_cast<std::size_t>(r), j) = s * std::conj(e.vectors(j, ei));
    }
    normalize_cols(next);
    return next;
  };

  bool equalize = false;
  double stall_ref = 2.0;  // coherence at the last stall checkpoint
  double maxc = 0.0, minc = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    coherence_stats(a, maxc, minc);
    if (maxc - minc <= tol && maxc - welch <= tol) break;  // Welch-tight ETF
    if (!equalize && it % 64 == 0) {
      if (stall_ref - maxc < 1e-12) equalize = true;  // cap phase stalled
      stall_ref = maxc;
    }
    if (equalize && maxc - minc <= tol) break;
    a = gram_step(a, equalize);
  }
  coherence_stats(a, maxc, minc);
  out.frame = a;
  out.stats.coherence = maxc;
  out.stats.coherence_spread = maxc - minc;
  out.stats.converged = maxc - minc <= tol;
  return out;
}

CoefficientMatrix equal_distance_generate(const GroupIndex& index, double tol,
                                          int max_iters, std::uint64_t seed,
                                          int max_reseeds) {
  for (int attempt = 0; attempt <= max_reseeds; ++attempt) {
    FrameResult fr = equal_distance_frame(index.delta, index.n_groups(), tol,
                                          max_iters, mix_seed(seed, attempt));
    CoefficientMatrix a;
    a.entries = std::move(fr.frame);
    a.strategy = Strategy::equal_distance;
    a.index = index;
    a.stats = fr.stats;
    a.stats.reseeds = attempt;
    if (validate_decodability(a).pass) return a;
  }
  throw GenerationInfeasible(
      "equal-distance strategy: singular user submatrix after max reseeds");
}

CMat user_submatrix(const CoefficientMatrix& a, UserId k) {
  return a.entries.select_cols(a.index.intended_of(k));
}

CMat interference_submatrix(const CoefficientMatrix& a, UserId k, int n,
                            int m) {
  const std::vector<int>& intended = a.index.intended_of(k);
  const std::vector<int>& interfering = a.index.interfering_of(k);
  if (n < 0 || n >= static_cast<int>(intended.size()))
    throw LookupError("stream index n out of range");
  if (m < 0 || m >= static_cast<int>(interfering.size()))
    throw LookupError("interferer index m out of range");
  CMat b = a.entries.select_cols(intended);
  b.set_col(static_cast<std::size_t>(n),
            a.entries.col(static_cast<std::size_t>(interfering[static_cast<std::size_t>(m)])));
  return b;
}

double noise_amplification(const CoefficientMatrix& a, UserId k, int n) {
  const std::vector<int>& intended = a.index.intended_of(k);
  if (n < 0 || n >= static_cast<int>(intended.size()))
    throw LookupError("stream index n out of range");
  std::vector<int> rest;
  for (int j = 0; j < static_cast<int>(intended.size()); ++j)
    if (j != n) rest.push_back(intended[static_cast<std::size_t>(j)]);
  const CMat m = a.entries.select_cols(rest);
  double sum = 0.0;
  for (std::size_t j = 0; j < a.entries.rows(); ++j)
    sum += std::norm(det(m.drop_row(j)));
  return sum;
}

DecodabilityReport validate_decodability(const CoefficientMatrix& a,
                                         double det_threshold,
                                         double cond_threshold) {
  DecodabilityReport rep;
  rep.det_threshold = det_threshold;
  rep.cond_threshold = cond_threshold;
  rep.pass = true;
  for (UserId k : a.index.serving_set) {
    const CMat ak = user_submatrix(a, k);
    DecodabilityReport::PerUser u;
    u.user = k;
    u.abs_det = std::abs(det(ak));
    u.cond = cond2(ak);
    u.ok = u.abs_det > det_threshold && u.cond < cond_threshold;
    rep.pass = rep.pass && u.ok;
    rep.users.push_back(u);
  }
  return rep;
}

namespace {

std::string format_cplx(cplx v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gj", v.real(), v.imag());
  return buf;
}

cplx parse_cplx(const std::string& tok) {
  std::string s = tok;
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw FileError("empty matrix entry");
  if (s.back() != 'j') {  // tolerate plain reals
    std::size_t pos = 0;
    const double re = std::stod(s, &pos);
    if (pos != s.size()) throw FileError("bad matrix entry: " + tok);
    return cplx{re, 0.0};
  }
  s.pop_back();
  // Split at the sign of the imaginary part: the last +/- that is not an
  // exponent sign and not leading.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) throw FileError("bad matrix entry: " + tok);
  std::size_t p1 = 0, p2 = 0;
  const std::string res = s.substr(0, split), ims = s.substr(split);
  const double re = std::stod(res, &p1);
  const double im = std::stod(ims, &p2);
  if (p1 != res.size() || p2 != ims.size())
    throw FileError("bad matrix entry: " + tok);
  return cplx{re, im};
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_matrix_csv(const CoefficientMatrix& a, std::ostream& os) {
  for (int j = 0; j < a.index.n_groups(); ++j)
    os << (j ? "," : "") << a.index.group_label(j);
  os << '\n';
  for (std::size_t i = 0; i < a.entries.rows(); ++i) {
    for (std::size_t j = 0; j < a.entries.cols(); ++j)
      os << (j ? "," : "") << format_cplx(a.entries(i, j));
    os << '\n';
  }
}

void write_matrix_csv(const CoefficientMatrix& a, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw FileError("cannot open for writing: " + path);
  write_matrix_csv(a, f);
  if (!f) throw FileError("write failed: " + path);
}

CoefficientMatrix read_matrix_csv(std::istream& is, const GroupIndex& index) {
  std::string line;
  if (!std::getline(is, line)) throw FileError("matrix CSV: missing header");
  const std::vector<std::string> header = split_csv_line(line);
  if (static_cast<int>(header.size()) != index.n_groups())
    throw FileError("matrix CSV: column count does not match group count");
  for (int j = 0; j < index.n_groups(); ++j)
    if (header[static_cast<std::size_t>(j)] != index.group_label(j))
      throw FileError("matrix CSV: header label mismatch at column " +
                      std::to_string(j + 1) + " (expected " +
                      index.group_label(j) + ")");
  CoefficientMatrix a;
  a.index = index;
  a.entries = CMat(static_cast<std::size_t>(index.delta),
                   static_cast<std::size_t>(index.n_groups()));
  for (int i = 0; i < index.delta; ++i) {
    if (!std::getline(is, line))
      throw FileError("matrix CSV: expected " + std::to_string(index.delta) +
                      " data rows");
    const std::vector<std::string> toks = split_csv_line(line);
    if (static_cast<int>(toks.size()) != index.n_groups())
      throw FileError("matrix CSV: bad column count in row " +
                      std::to_string(i + 1));
    for (int j = 0; j < index.n_groups(); ++j)
      a.entries(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          parse_cplx(toks[static_cast<std::size_t>(j)]);
  }
  return a;
}

CoefficientMatrix read_matrix_csv(const std::string& path,
                                  const GroupIndex& index) {
  std::ifstream f(path);
  if (!f) throw FileError("cannot open: " + path);
  return read_matrix_csv(f, index);
}

}  // namespace ccsim
