// SPDX-License-Identifier: Apache-2.0
//
// SCA beamformer optimization. For a fixed expansion point the convex
// subproblem
//
//   max r  s.t.  r <= log2(1 + gamma_kn),
//                L(w, gamma_kn; expansion) >= interference + noise,
//                sum_d sum_T |A_T(d)|^2 ||w_T||^2 <= delta P_T
//
// collapses (gamma at its bound, log2 monotone) to maximizing the minimum
// of concave quadratics u_kn(w) over an ellipsoid, which is solved here by
// a log-barrier Newton method on (w, s): max s, s.t. u_kn(w) >= s.
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ccsim/beamforming.hpp"
#include "ccsim/errors.hpp"
#include "ccsim/rates.hpp"

namespace ccsim {

namespace {

// Dense real row acting on the coordinates of one beamformer block.
struct BlockRow {
  int offset;
  std::vector<double> v;

  double dot(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += v[i] * x[static_cast<std::size_t>(offset) + i];
    return s;
  }
  void add_to(std::vector<double>& g, double f) const {
    for (std::size_t i = 0; i < v.size(); ++i)
      g[static_cast<std::size_t>(offset) + i] += f * v[i];
  }
};

// Real/imaginary parts of a complex linear form r^T w over block g, laid
// out as [Re w_0..Re w_{L-1}, Im w_0..Im w_{L-1}].
BlockRow real_part_row(const CVec& r, int offset) {
  const std::size_t L = r.size();
  BlockRow row{offset, std::vector<double>(2 * L)};
  for (std::size_t l = 0; l < L; ++l) {
    row.v[l] = r[l].real();
    row.v[L + l] = -r[l].imag();
  }
  return row;
}

BlockRow imag_part_row(const CVec& r, int offset) {
  const std::size_t L = r.size();
  BlockRow row{offset, std::vector<double>(2 * L)};
  for (std::size_t l = 0; l < L; ++l) {
    row.v[l] = r[l].imag();
    row.v[L + l] = r[l].real();
  }
  return row;
}

struct StreamConstraint {
  // u(x) = lin.dot(x) - q2 * sum_r (row.dot(x))^2 - cst, c(x) = u(x) - s.
  BlockRow lin{0, {}};
  std::vector<BlockRow> quad_rows;  // iteration-independent
  double q2 = 0.0;
  double cst = 0.0;
  // Static data to rebuild lin/q2/cst at each expansion point.
  CVec signal_row;   // det(A_k) * conj(h_k), acting on the signal block
  int signal_block = 0;  // x-offset of the signal group's block
  double noise_term = 0.0;  // N0 * noise amplification
};

class Subproblem {
 public:
  Subproblem(int n_groups, int L, double power_budget,
             std::vector<double> power_diag)
      : L_(L),
        dim_(2 * n_groups * L + 1),
        s_idx_(2 * n_groups * L),
        budget_(power_budget),
        power_diag_(std::move(power_diag)) {}

  std::vector<StreamConstraint>& cons() { return cons_; }
  int dim() const { return dim_; }
  int s_index() const { return s_idx_; }

  double u_value(const StreamConstraint& c, const std::vector<double>& x) const {
    double q = 0.0;
    for (const BlockRow& r : c.quad_rows) {
      const double d = r.dot(x);
      q += d * d;
    }
    return c.lin.dot(x) - c.q2 * q - c.cst;
  }

  double power_value(const std::vector<double>& x) const {
    double p = 0.0;
    for (int i = 0; i < s_idx_; ++i)
      p += power_diag_[static_cast<std::size_t>(i)] *
           x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    return p;
  }

  bool strictly_feasible(const std::vector<double>& x) const {
    if (power_value(x) >= budget_) return false;
    const double s = x[static_cast<std::size_t>(s_idx_)];
    for (const StreamConstraint& c : cons_)
      if (u_value(c, x) - s <= 0.0) return false;
    return true;
  }

  // Minimizes t*(-s) - sum log c_i(x) by damped Newton from a strictly
  // feasible x. Returns false if no progress could be made.
  bool center(double t, std::vector<double>& x) const;

  // Full barrier solve; x must be strictly feasible on entry.
  bool maximize(std::vector<double>& x) const {
    double t = 1.0;
    const double m = static_cast<double>(cons_.size()) + 1.0;
    for (int stage = 0; stage < 64; ++stage) {
      if (!center(t, x)) return false;
      const double s = x[static_cast<std::size_t>(s_idx_)];
      if (m / t <= 1e-6 * (1.0 + std::abs(s))) break;
      t *= 20.0;
    }
    return true;
  }

 private:
  double barrier_value(double t, const std::vector<double>& x) const {
    const double s = x[static_cast<std::size_t>(s_idx_)];
    double phi = -t * s;
    for (const StreamConstraint& c : cons_) {
      const double ci = u_value(c, x) - s;
      if (ci <= 0.0) return std::numeric_limits<double>::infinity();
      phi -= std::log(ci);
    }
    const double cp = budget_ - power_value(x);
    if (cp <= 0.0) return std::numeric_limits<double>::infinity();
    return phi - std::log(cp);
  }

  int L_;
  int dim_;
  int s_idx_;
  double budget_;
  std::vector<double> power_diag_;  // per w-coordinate, > 0
  std::vector<StreamConstraint> cons_;
};

// In-place Cholesky solve; adds a diagonal ridge on failure.
bool solve_spd(std::vector<double>& h, std::vector<double>& b, int n) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<double> a = h;
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      double d = a[static_cast<std::size_t>(j * n + j)];
      for (int k = 0; k < j; ++k) {
        const double l = a[static_cast<std::size_t>(j * n + k)];
        d -= l * l;
      }
      if (d <= 0.0) {
        ok = false;
        break;
      }
      const double dj = std::sqrt(d);
      a[static_cast<std::size_t>(j * n + j)] = dj;
      for (int i = j + 1; i < n; ++i) {
        double v = a[static_cast<std::size_t>(i * n + j)];
        for (int k = 0; k < j; ++k)
          v -= a[static_cast<std::size_t>(i * n + k)] *
               a[static_cast<std::size_t>(j * n + k)];
        a[static_cast<std::size_t>(i * n + j)] = v / dj;
      }
    }
    if (ok) {
      // forward/backward substitution on b
      for (int i = 0; i < n; ++i) {
        double v = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k)
          v -= a[static_cast<std::size_t>(i * n + k)] * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = v / a[static_cast<std::size_t>(i * n + i)];
      }
      for (int i = n - 1; i >= 0; --i) {
        double v = b[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k)
          v -= a[static_cast<std::size_t>(k * n + i)] * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = v / a[static_cast<std::size_t>(i * n + i)];
      }
      return true;
    }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += h[static_cast<std::size_t>(i * n + i)];
    const double ridge = std::max(tr / n, 1.0) * 1e-12 * std::pow(1e4, attempt + 1);
    for (int i = 0; i < n; ++i) h[static_cast<std::size_t>(i * n + i)] += ridge;
  }
  return false;
}

bool Subproblem::center(double t, std::vector<double>& x) const {
  const int n = dim_;
  std::vector<double> grad(static_cast<std::size_t>(n));
  std::vector<double> hess(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  std::vector<double> gc(static_cast<std::size_t>(n));

  for (int iter = 0; iter < 120; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(hess.begin(), hess.end(), 0.0);
    grad[static_cast<std::size_t>(s_idx_)] = -t;

    for (const StreamConstraint& c : cons_) {
      const double s = x[static_cast<std::size_t>(s_idx_)];
      const double ci = u_value(c, x) - s;
      // gradient of c_i
      std::fill(gc.begin(), gc.end(), 0.0);
      c.lin.add_to(gc, 1.0);
      for (const BlockRow& r : c.quad_rows) r.add_to(gc, -2.0 * c.q2 * r.dot(x));
      gc[static_cast<std::size_t>(s_idx_)] = -1.0;

      const double inv = 1.0 / ci;
      for (int i = 0; i < n; ++i) grad[static_cast<std::size_t>(i)] -= gc[static_cast<std::size_t>(i)] * inv;
      // rank-one term grad_c grad_c^T / c^2
      const double inv2 = inv * inv;
      for (int i = 0; i < n; ++i) {
        const double gi = gc[static_cast<std::size_t>(i)];
        if (gi == 0.0) continue;
        for (int j = 0; j <= i; ++j)
          hess[static_cast<std::size_t>(i * n + j)] += gi * gc[static_cast<std::size_t>(j)] * inv2;
      }
      // convexity term 2 q2 / c * sum rows rows^T (block-local)
      const double f = 2.0 * c.q2 * inv;
      for (const BlockRow& r : c.quad_rows) {
        const int off = r.offset;
        for (std::size_t i = 0; i < r.v.size(); ++i) {
          const double ri = f * r.v[i];
          if (ri == 0.0) continue;
          for (std::size_t j = 0; j <= i; ++j)
            hess[static_cast<std::size_t>((off + static_cast<int>(i)) * n + off +
                                          static_cast<int>(j))] += ri * r.v[j];
        }
      }
    }
    // power barrier
    {
      const double cp = budget_ - power_value(x);
      const double inv = 1.0 / cp;
      std::fill(gc.begin(), gc.end(), 0.0);
      for (int i = 0; i < s_idx_; ++i)
        gc[static_cast<std::size_t>(i)] =
            -2.0 * power_diag_[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      for (int i = 0; i < n; ++i) grad[static_cast<std::size_t>(i)] -= gc[static_cast<std::size_t>(i)] * inv;
      const double inv2 = inv * inv;
      for (int i = 0; i < s_idx_; ++i) {
        const double gi = gc[static_cast<std::size_t>(i)];
        for (int j = 0; j <= i; ++j)
          hess[static_cast<std::size_t>(i * n + j)] += gi * gc[static_cast<std::size_t>(j)] * inv2;
        hess[static_cast<std::size_t>(i * n + i)] +=
            2.0 * power_diag_[static_cast<std::size_t>(i)] * inv;
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        hess[static_cast<std::size_t>(i * n + j)] = hess[static_cast<std::size_t>(j * n + i)];

    std::vector<double> step(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) step[static_cast<std::size_t>(i)] = -grad[static_cast<std::size_t>(i)];
    if (!solve_spd(hess, step, n)) return iter > 0;

    double lambda2 = 0.0;
    for (int i = 0; i < n; ++i) lambda2 -= grad[static_cast<std::size_t>(i)] * step[static_cast<std::size_t>(i)];
    const double s_abs = std::abs(x[static_cast<std::size_t>(s_idx_)]);
    if (lambda2 / 2.0 <= 1e-9 * t * (1.0 + s_abs)) return true;

    const double phi0 = barrier_value(t, x);
    double alpha = 1.0;
    std::vector<double> xn(static_cast<std::size_t>(n));
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (int i = 0; i < n; ++i)
        xn[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + alpha * step[static_cast<std::size_t>(i)];
      const double phi = barrier_value(t, xn);
      if (phi < phi0 - 0.01 * alpha * lambda2) {
        x = xn;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) return true;  // stalled at numerical precision
  }
  return true;
}

struct StaticStream {
  UserId user;
  int n;                // stream index
  int signal_col;       // global column of T_k^n
  cplx det_ak;
  CVec h;
  double noise_term;    // N0 * amplification
  std::vector<int> interf_cols;
  std::vector<cplx> det_b;  // per interferer
};

}  // namespace

ScaResult sca_optimize(const ChannelRealization& ch, const GroupIndex& index,
                       const CoefficientMatrix& a, double P_T, double N0,
                       const ScaOptions& opts, const BeamformerSet* init) {
  const int G = index.n_groups();
  const int L = static_cast<int>(ch.H.cols());
  const int delta = index.delta;
  const double budget = static_cast<double>(delta) * P_T;

  // Static per-stream data.
  std::vector<StaticStream> streams;
  for (UserId k : index.serving_set) {
    const cplx dak = det(user_submatrix(a, k));
    const std::vector<int>& intended = index.intended_of(k);
    const std::vector<int>& interfering = index.interfering_of(k);
    for (int n = 0; n < delta; ++n) {
      StaticStream s;
      s.user = k;
      s.n = n;
      s.signal_col = intended[static_cast<std::size_t>(n)];
      s.det_ak = dak;
      s.h = ch.user_row(k);
      s.noise_term = N0 * noise_amplification(a, k, n);
      s.interf_cols = interfering;
      for (int m = 0; m < static_cast<int>(interfering.size()); ++m)
        s.det_b.push_back(det(interference_submatrix(a, k, n, m)));
      streams.push_back(std::move(s));
    }
  }

  // Subproblem skeleton (everything except the expansion-dependent parts).
  std::vector<double> power_diag(static_cast<std::size_t>(2 * G * L));
  for (int g = 0; g < G; ++g) {
    double colsq = 0.0;
    for (int d = 0; d < delta; ++d)
      colsq += std::norm(a.entries(static_cast<std::size_t>(d), static_cast<std::size_t>(g)));
    for (int i = 0; i < 2 * L; ++i)
      power_diag[static_cast<std::size_t>(g * 2 * L + i)] = colsq;
  }
  Subproblem sub(G, L, budget, std::move(power_diag));
  for (const StaticStream& s : streams) {
    StreamConstraint c;
    c.signal_block = s.signal_col * 2 * L;
    c.signal_row.resize(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l)
      c.signal_row[static_cast<std::size_t>(l)] =
          s.det_ak * std::conj(s.h[static_cast<std::size_t>(l)]);
    c.noise_term = s.noise_term;
    for (std::size_t m = 0; m < s.interf_cols.size(); ++m) {
      CVec r(static_cast<std::size_t>(L));
      for (int l = 0; l < L; ++l)
        r[static_cast<std::size_t>(l)] =
            s.det_b[m] * std::conj(s.h[static_cast<std::size_t>(l)]);
      const int off = s.interf_cols[m] * 2 * L;
      c.quad_rows.push_back(real_part_row(r, off));
      c.quad_rows.push_back(imag_part_row(r, off));
    }
    sub.cons().push_back(std::move(c));
  }

  // Initial beamformers, pulled strictly inside the power budget.
  BeamformerSet w_bar = init ? *init : zf_beamformers(ch, index, a, P_T);
  {
    const double p0 = beamformer_power(a, w_bar);
    if (p0 > budget * (1.0 + 1e-9))
      throw SolverError("sca_optimize: initialization violates the power budget");
    if (p0 > budget * (1.0 - 1e-9)) {
      const double f = std::sqrt(budget * (1.0 - 1e-9) / p0);
      for (CVec& v : w_bar.w) scale(v, cplx{f, 0.0});
    }
  }

  std::vector<double> gamma_bar;
  for (const StaticStream& s : streams)
    gamma_bar.push_back(
        std::max(stream_sinr(a, s.user, s.n, ch, w_bar, N0), opts.gamma_floor));

  auto pack = [&](const BeamformerSet& w, std::vector<double>& x) {
    for (int g = 0; g < G; ++g)
      for (int l = 0; l < L; ++l) {
        x[static_cast<std::size_t>(g * 2 * L + l)] =
            w.w[static_cast<std::size_t>(g)][static_cast<std::size_t>(l)].real();
        x[static_cast<std::size_t>(g * 2 * L + L + l)] =
            w.w[static_cast<std::size_t>(g)][static_cast<std::size_t>(l)].imag();
      }
  };
  auto unpack = [&](const std::vector<double>& x) {
    BeamformerSet w;
    w.w.assign(static_cast<std::size_t>(G), CVec(static_cast<std::size_t>(L)));
    for (int g = 0; g < G; ++g)
      for (int l = 0; l < L; ++l)
        w.w[static_cast<std::size_t>(g)][static_cast<std::size_t>(l)] =
            cplx{x[static_cast<std::size_t>(g * 2 * L + l)],
                 x[static_cast<std::size_t>(g * 2 * L + L + l)]};
    return w;
  };

  ScaResult out;
  out.w = w_bar;
  ScaTrace& trace = out.trace;
  double r_prev = -std::numeric_limits<double>::infinity();

  for (int it = 0; it < opts.max_iters; ++it) {
    // Refresh the expansion-dependent constraint pieces.
    bool expansion_ok = true;
    for (std::size_t i = 0; i < streams.size(); ++i) {
      StreamConstraint& c = sub.cons()[i];
      const StaticStream& s = streams[i];
      const cplx alpha_bar =
          s.det_ak * vdot(s.h, out.w.w[static_cast<std::size_t>(s.signal_col)]);
      const double a2 = std::norm(alpha_bar);
      if (a2 < 1e-300) {
        expansion_ok = false;
        break;
      }
      const double gb = gamma_bar[i];
      c.q2 = gb * gb / a2;
      c.cst = c.q2 * s.noise_term;
      CVec lin_row(c.signal_row.size());
      for (std::size_t l = 0; l < lin_row.size(); ++l)
        lin_row[l] = (2.0 * gb / a2) * std::conj(alpha_bar) * c.signal_row[l];
      c.lin = real_part_row(lin_row, c.signal_block);
    }
    if (!expansion_ok) {
      if (it == 0)
        throw SolverError("sca_optimize: zero signal at the initial point");
      trace.solver_failure = true;
      break;
    }

    std::vector<double> x(static_cast<std::size_t>(sub.dim()), 0.0);
    pack(out.w, x);
    double umin = std::numeric_limits<double>::infinity();
    for (const StreamConstraint& c : sub.cons())
      umin = std::min(umin, sub.u_value(c, x));
    x[static_cast<std::size_t>(sub.s_index())] =
        umin - std::max(1e-12, 1e-6 * (1.0 + std::abs(umin)));
    if (!sub.strictly_feasible(x)) {
      if (it == 0) throw SolverError("sca_optimize: infeasible initialization");
      trace.solver_failure = true;
      break;
    }

    if (!sub.maximize(x)) {
      trace.solver_failure = true;
      break;
    }
    const double s_star = x[static_cast<std::size_t>(sub.s_index())];
    if (!(s_star > -1.0)) {
      trace.solver_failure = true;
      break;
    }
    const double r = std::log2(1.0 + s_star);
    if (it > 0 && r < r_prev - 1e-9) break;  // numerical stall; keep previous

    out.w = unpack(x);
    trace.iters.push_back({it, r, true});
    for (std::size_t i = 0; i < streams.size(); ++i)
      gamma_bar[i] =
          std::max(sub.u_value(sub.cons()[i], x), opts.gamma_floor);

    if (it > 0 && r - r_prev < opts.tol) break;
    r_prev = r;
  }
  return out;
}

}  // namespace ccsim
