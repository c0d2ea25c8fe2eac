// SPDX-License-Identifier: Apache-2.0
#include "ccsim/beamforming.hpp"

#include <cmath>

#include "ccsim/errors.hpp"

namespace ccsim {

double beamformer_power(const CoefficientMatrix& a, const BeamformerSet& w) {
  double p = 0.0;
  for (std::size_t g = 0; g < w.w.size(); ++g) {
    double col = 0.0;
    for (std::size_t d = 0; d < a.entries.rows(); ++d)
      col += std::norm(a.entries(d, g));
    p += col * norm_sq(w.w[g]);
  }
  return p;
}

BeamformerSet zf_directions(const ChannelRealization& ch,
                            const GroupIndex& index) {
  const std::size_t L = ch.H.cols();
  BeamformerSet set;
  set.w.reserve(static_cast<std::size_t>(index.n_groups()));
  for (int col = 0; col < index.n_groups(); ++col) {
    const Group& g = index.groups[static_cast<std::size_t>(col)];
    std::vector<CVec> others;
    for (UserId u : index.serving_set) {
      if (std::find(g.begin(), g.end(), u) == g.end())
        others.push_back(ch.user_row(u));
    }
    const std::vector<CVec> null = orth_complement(others, L);
    if (null.size() != 1)
      throw DegenerateChannel("zero-forcing null space for group " +
                              index.group_label(col) + " has dimension " +
                              std::to_string(null.size()));
    CVec w = null.front();
    for (const cplx& x : w) {
      if (std::abs(x) > 1e-12) {
        scale(w, std::conj(x) / std::abs(x));
        break;
      }
    }
    set.w.push_back(std::move(w));
  }
  return set;
}

BeamformerSet zf_beamformers(const ChannelRealization& ch,
                             const GroupIndex& index,
                             const CoefficientMatrix& a, double P_T) {
  if (P_T <= 0.0) throw InvalidParameters("P_T must be positive");
  BeamformerSet set = zf_directions(ch, index);
  double weight = 0.0;  // sum_T ||a_T||^2, with unit-norm directions
  for (std::size_t g = 0; g < set.w.size(); ++g)
    for (std::size_t d = 0; d < a.entries.rows(); ++d)
      weight += std::norm(a.entries(d, g));
  const double per_group = static_cast<double>(index.delta) * P_T / weight;
  for (CVec& w : set.w) scale(w, cplx{std::sqrt(per_group), 0.0});
  return set;
}

double taylor_lower_bound(const CVec& w, double gamma, const CVec& w_bar,
                          double gamma_bar, cplx c, const CVec& h) {
  if (gamma_bar <= 0.0)
    throw InvalidParameters("taylor_lower_bound: expansion point needs gamma_bar > 0");
  const cplx a_bar = c * vdot(h, w_bar);
  const cplx a_cur = c * vdot(h, w);
  return 2.0 * std::real(std::conj(a_bar) * a_cur) / gamma_bar -
         std::norm(a_bar) / (gamma_bar * gamma_bar) * gamma;
}

}  // namespace ccsim
