// SPDX-License-Identifier: Apache-2.0
#include "ccsim/channel.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ccsim/errors.hpp"
#include "ccsim/rng.hpp"

namespace ccsim {

ChannelRealization draw_channel(int K, int L, std::uint64_t seed) {
  if (K < 1 || L < 1) throw InvalidParameters("draw_channel: K, L >= 1");
  Rng rng(seed);
  ChannelRealization ch;
  ch.H = CMat(static_cast<std::size_t>(K), static_cast<std::size_t>(L));
  for (std::size_t i = 0; i < ch.H.rows(); ++i)
    for (std::size_t j = 0; j < ch.H.cols(); ++j)
      ch.H(i, j) = rng.cgaussian();
  return ch;
}

UserOrdering successive_projection_order(const ChannelRealization& ch,
                                         const std::vector<UserId>& users) {
  if (users.empty())
    throw InvalidParameters("successive_projection_order: no users");
  UserOrdering out;
  std::vector<UserId> remaining = users;
  std::sort(remaining.begin(), remaining.end());  // ties go to smaller ids
  std::vector<CVec> basis;  // orthonormal span of selected channels

  double scale_ref = 0.0;
  for (UserId k : remaining)
    scale_ref = std::max(scale_ref, norm_sq(ch.user_row(k)));

  while (!remaining.empty()) {
    double best = -1.0;
    std::vector<double> res(remaining.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      res[i] = norm_sq(project_out(ch.user_row(remaining[i]), basis));
      best = std::max(best, res[i]);
    }
    // Residuals of fully projected-out users are numerical noise around
    // zero; anything within the tolerance band of the maximum is a tie,
    // resolved toward the smallest user id.
    UserId pick = remaining.front();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (res[i] >= best - 1e-9 * scale_ref) {
        pick = remaining[i];
        break;
      }
    }
    out.order.push_back(pick);
    remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
    const CVec h = ch.user_row(pick);
    CVec r = project_out(h, basis);
    r = project_out(r, basis);
    const double rn = norm(r);
    if (rn > 1e-12 * std::max(norm(h), 1e-300)) {
      scale(r, cplx{1.0 / rn, 0.0});
      basis.push_back(std::move(r));
    }
  }
  out.priority_for_sparse.assign(out.order.rbegin(), out.order.rend());
  return out;
}

std::vector<UserId> priority_from_order(const UserOrdering& ordering) {
  return {ordering.order.rbegin(), ordering.order.rend()};
}

void write_channel_csv(const ChannelRealization& ch, std::ostream& os) {
  char buf[32];
  for (std::size_t i = 0; i < ch.H.rows(); ++i) {
    for (std::size_t j = 0; j < ch.H.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", ch.H(i, j).real());
      os << (j ? "," : "") << buf;
      std::snprintf(buf, sizeof(buf), "%.17g", ch.H(i, j).imag());
      os << ',' << buf;
    }
    os << '\n';
  }
}

ChannelRealization read_channel_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        vals.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw FileError("channel CSV: bad number: " + tok);
      }
    }
    if (vals.size() % 2 != 0)
      throw FileError("channel CSV: odd column count (need re/im pairs)");
    if (!rows.empty() && vals.size() != rows.front().size())
      throw FileError("channel CSV: inconsistent column count");
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw FileError("channel CSV: no data");
  ChannelRealization ch;
  const std::size_t L = rows.front().size() / 2;
  ch.H = CMat(rows.size(), L);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < L; ++j)
      ch.H(i, j) = cplx{rows[i][2 * j], rows[i][2 * j + 1]};
  return ch;
}

ChannelRealization read_channel_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError("cannot open: " + path);
  return read_channel_csv(f);
}

}  // namespace ccsim
