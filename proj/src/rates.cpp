// SPDX-License-Identifier: Apache-2.0
#include "ccsim/rates.hpp"

#include <algorithm>
#include <cmath>

#include "ccsim/errors.hpp"
#include "ccsim/rng.hpp"

namespace ccsim {

double stream_sinr(const CoefficientMatrix& a, UserId k, int n,
                   const ChannelRealization& ch, const BeamformerSet& w,
                   double N0) {
  const std::vector<int>& intended = a.index.intended_of(k);
  const std::vector<int>& interfering = a.index.interfering_of(k);
  if (n < 0 || n >= static_cast<int>(intended.size()))
    throw LookupError("stream index n out of range");
  const CVec h = ch.user_row(k);

  const cplx det_ak = det(user_submatrix(a, k));
  const int col_n = intended[static_cast<std::size_t>(n)];
  const double signal =
      std::norm(det_ak * vdot(h, w.w[static_cast<std::size_t>(col_n)]));

  double interf = 0.0;
  for (int m = 0; m < static_cast<int>(interfering.size()); ++m) {
    const cplx det_b = det(interference_submatrix(a, k, n, m));
    const int col_m = interfering[static_cast<std::size_t>(m)];
    interf += std::norm(det_b * vdot(h, w.w[static_cast<std::size_t>(col_m)]));
  }
  const double noise = N0 * noise_amplification(a, k, n);
  return signal / (interf + noise);
}

namespace {

// Combining row c with c^T a_j = 0 for every intended column j != n,
// computed as the orthogonal complement of the conjugated columns. The
// returned row is unique up to scale, which cancels in every SINR use.
CVec elimination_row(const CoefficientMatrix& a, UserId k, int n) {
  const std::vector<int>& intended = a.index.intended_of(k);
  const std::size_t delta = static_cast<std::size_t>(a.index.delta);
  std::vector<CVec> conj_cols;
  for (int j = 0; j < static_cast<int>(intended.size()); ++j) {
    if (j == n) continue;
    CVec c = a.entries.col(static_cast<std::size_t>(intended[static_cast<std::size_t>(j)]));
    for (cplx& x : c) x = std::conj(x);
    conj_cols.push_back(std::move(c));
  }
  // A complement vector u of the conjugated columns satisfies
  // <conj(a_j), u> = a_j^T u = 0, which is exactly the combining condition.
  const std::vector<CVec> comp = orth_complement(conj_cols, delta);
  if (comp.empty())
    throw DecodabilityError("user " + std::to_string(k) +
                            ": intended columns span the whole space");
  return comp.front();
}

}  // namespace

double oracle_sinr_via_elimination(const CoefficientMatrix& a, UserId k, int n,
                                   const ChannelRealization& ch,
                                   const BeamformerSet& w, double N0) {
  const std::vector<int>& intended = a.index.intended_of(k);
  const std::vector<int>& interfering = a.index.interfering_of(k);
  if (n < 0 || n >= static_cast<int>(intended.size()))
    throw LookupError("stream index n out of range");
  const CVec h = ch.user_row(k);
  const CVec c = elimination_row(a, k, n);

  auto combine = [&](int col) {  // c^T a_col
    cplx s{0.0, 0.0};
    const CVec acol = a.entries.col(static_cast<std::size_t>(col));
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * acol[i];
    return s;
  };

  const int col_n = intended[static_cast<std::size_t>(n)];
  const cplx sig_coef = combine(col_n);
  const double h_gain =
      std::norm(vdot(h, w.w[static_cast<std::size_t>(col_n)]));
  const double signal = std::norm(sig_coef) * h_gain;
  if (std::norm(sig_coef) <= 1e-24 * norm_sq(c))
    throw DecodabilityError("user " + std::to_string(k) +
                            ": singular intended submatrix");

  double interf = 0.0;
  for (int col_m : interfering)
    interf += std::norm(combine(col_m)) *
              std::norm(vdot(h, w.w[static_cast<std::size_t>(col_m)]));
  const double noise = N0 * norm_sq(c);
  return signal / (interf + noise);
}

DecodeResult decode_oracle(const CoefficientMatrix& a,
                           const ChannelRealization& ch,
                           const BeamformerSet& w, std::uint64_t seed,
                           bool noise_on, int n_symbols, double N0) {
  const int delta = a.index.delta;
  const int n_groups = a.index.n_groups();
  const int n_users = a.index.n_users();
  Rng rng(seed);

  DecodeResult res;
  res.max_residual.assign(static_cast<std::size_t>(n_users),
                          std::vector<double>(static_cast<std::size_t>(delta), 0.0));
  res.empirical_snr = res.max_residual;

  // Precompute combining rows and effective gains.
  std::vector<std::vector<CVec>> rows(static_cast<std::size_t>(n_users));
  for (int u = 0; u < n_users; ++u)
    for (int n = 0; n < delta; ++n)
      rows[static_cast<std::size_t>(u)].push_back(
          elimination_row(a, a.index.serving_set[static_cast<std::size_t>(u)], n));

  std::vector<std::vector<double>> err_energy(
      static_cast<std::size_t>(n_users),
      std::vector<double>(static_cast<std::size_t>(delta), 0.0));

  for (int sym = 0; sym < n_symbols; ++sym) {
    CVec x(static_cast<std::size_t>(n_groups));
    for (cplx& v : x) v = rng.cgaussian();

    for (int u = 0; u < n_users; ++u) {
      const UserId k = a.index.serving_set[static_cast<std::size_t>(u)];
      const CVec h = ch.user_row(k);
      // y_k(d) = sum_T A_T(d) (h^H w_T) X_T + z_k(d)
      CVec y(static_cast<std::size_t>(delta), cplx{0.0, 0.0});
      for (int d = 0; d < delta; ++d) {
        for (int g = 0; g < n_groups; ++g)
          y[static_cast<std::size_t>(d)] +=
              a.entries(static_cast<std::size_t>(d), static_cast<std::size_t>(g)) *
              vdot(h, w.w[static_cast<std::size_t>(g)]) *
              x[static_cast<std::size_t>(g)];
        if (noise_on)
          y[static_cast<std::size_t>(d)] += std::sqrt(N0) * rng.cgaussian();
      }
      const std::vector<int>& intended = a.index.intended_of(k);
      for (int n = 0; n < delta; ++n) {
        const CVec& c = rows[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)];
        const int col_n = intended[static_cast<std::size_t>(n)];
        cplx num{0.0, 0.0};
        for (int d = 0; d < delta; ++d)
          num += c[static_cast<std::size_t>(d)] * y[static_cast<std::size_t>(d)];
        cplx coef{0.0, 0.0};
        for (int d = 0; d < delta; ++d)
          coef += c[static_cast<std::size_t>(d)] *
                  a.entries(static_cast<std::size_t>(d), static_cast<std::size_t>(col_n));
        const cplx gain = coef * vdot(h, w.w[static_cast<std::size_t>(col_n)]);
        if (std::abs(coef) <= 1e-12 * norm(c))
          throw DecodabilityError("decode_oracle: singular user submatrix");
        const cplx est = num / gain;
        const double err = std::abs(est - x[static_cast<std::size_t>(col_n)]);
        auto& mr = res.max_residual[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)];
        mr = std::max(mr, err);
        res.worst_residual = std::max(res.worst_residual, err);
        err_energy[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] += err * err;
      }
    }
  }

  for (int u = 0; u < n_users; ++u)
    for (int n = 0; n < delta; ++n) {
      const double e =
          err_energy[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] /
          std::max(1, n_symbols);
      res.empirical_snr[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] =
          e > 0.0 ? 1.0 / e : std::numeric_limits<double>::infinity();
    }
  return res;
}

RateReport interval_rate_report(const CoefficientMatrix& a,
                                const ChannelRealization& ch,
                                const BeamformerSet& w, double N0) {
  const int delta = a.index.delta;
  RateReport rep;
  rep.gamma.resize(static_cast<std::size_t>(a.index.n_users()));
  rep.rate.resize(static_cast<std::size_t>(a.index.n_users()));
  double min_rate = std::numeric_limits<double>::infinity();
  for (int u = 0; u < a.index.n_users(); ++u) {
    const UserId k = a.index.serving_set[static_cast<std::size_t>(u)];
    double user_min = std::numeric_limits<double>::infinity();
    for (int n = 0; n < delta; ++n) {
      const double g = stream_sinr(a, k, n, ch, w, N0);
      const double r = std::log2(1.0 + g);
      rep.gamma[static_cast<std::size_t>(u)].push_back(g);
      rep.rate[static_cast<std::size_t>(u)].push_back(r);
      user_min = std::min(user_min, r);
    }
    rep.user_min_rate.push_back(user_min);
    min_rate = std::min(min_rate, user_min);
  }
  rep.interval_goodput = static_cast<double>(delta) * min_rate;
  return rep;
}

double mac_symmetric_rate(const std::vector<double>& gains, double N0) {
  const int n = static_cast<int>(gains.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      if (s & (1u << i)) sum += gains[static_cast<std::size_t>(i)] / N0;
    const double r =
        std::log2(1.0 + sum) / static_cast<double>(std::popcount(s));
    best = std::min(best, r);
  }
  return best;
}

double sic_zf_baseline_rate(const ChannelRealization& ch,
                            const GroupIndex& index, double N0, double P_T) {
  BeamformerSet w = zf_directions(ch, index);
  const double per_group = P_T / static_cast<double>(index.n_groups());
  for (CVec& v : w.w) scale(v, cplx{std::sqrt(per_group), 0.0});

  double worst = std::numeric_limits<double>::infinity();
  for (UserId k : index.serving_set) {
    const CVec h = ch.user_row(k);
    std::vector<double> gains;
    for (int col : index.intended_of(k))
      gains.push_back(std::norm(vdot(h, w.w[static_cast<std::size_t>(col)])));
    worst = std::min(worst, mac_symmetric_rate(gains, N0));
  }
  return static_cast<double>(index.delta) * worst;
}

double no_cc_baseline_rate(const ChannelRealization& ch, int L,
                           double cache_fraction, double N0, double P_T) {
  const int K = static_cast<int>(ch.H.rows());
  if (L > K) throw InvalidParameters("no_cc baseline needs K >= L");
  if (cache_fraction < 0.0 || cache_fraction >= 1.0)
    throw InvalidParameters("cache fraction must lie in [0, 1)");
  if (static_cast<int>(ch.H.cols()) != L)
    throw InvalidParameters("channel width does not match L");

  double rate_sum = 0.0;
  for (int s = 0; s < K; ++s) {
    std::vector<UserId> served;
    for (int j = 0; j < L; ++j) served.push_back((s + j) % K + 1);
    double slot_min = std::numeric_limits<double>::infinity();
    for (UserId k : served) {
      std::vector<CVec> others;
      for (UserId u : served)
        if (u != k) others.push_back(ch.user_row(u));
      const std::vector<CVec> null =
          orth_complement(others, static_cast<std::size_t>(L));
      if (null.size() != 1)
        throw DegenerateChannel("no_cc: unicast null space for user " +
                                std::to_string(k));
      const double gain = std::norm(vdot(ch.user_row(k), null.front())) *
                          (P_T / static_cast<double>(L));
      slot_min = std::min(slot_min, std::log2(1.0 + gain / N0));
    }
    rate_sum += slot_min;
  }
  const double avg = rate_sum / static_cast<double>(K);
  return (static_cast<double>(L) / static_cast<double>(K)) * avg /
         (1.0 - cache_fraction);
}

}  // namespace ccsim
