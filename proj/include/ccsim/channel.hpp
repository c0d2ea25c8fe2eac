// SPDX-License-Identifier: Apache-2.0
//
// Seeded i.i.d. complex Gaussian channels and the successive-projection
// user ordering that feeds Algorithm-1 priorities.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccsim/combinatorics.hpp"
#include "ccsim/linalg.hpp"

namespace ccsim {

struct ChannelRealization {
  CMat H;  // K x L, row k-1 is the channel of user k
  CVec user_row(UserId k) const { return H.row(static_cast<std::size_t>(k - 1)); }
};

// Entries i.i.d. CN(0, 1); deterministic in (K, L, seed).
ChannelRealization draw_channel(int K, int L, std::uint64_t seed);

struct UserOrdering {
  std::vector<UserId> order;  // first selected (strongest) to last
  std::vector<UserId> priority_for_sparse;  // reverse of `order`
};

// Greedy selection: start from the largest-norm user, then repeatedly pick
// the user with the largest residual energy after projecting out the span
// of the already-selected channels. Ties break toward the smaller user id;
// rank deficiency is handled by the projector itself (collinear users get
// residual 0), so the ordering never fails.
UserOrdering successive_projection_order(const ChannelRealization& ch,
                                         const std::vector<UserId>& users);

// Algorithm-1 priority: the reversal of the projection order, so the
// strongest user is processed last and absorbs the densest submatrix.
std::vector<UserId> priority_from_order(const UserOrdering& ordering);

// Channel CSV: one row per user, 2L real columns, re/im interleaved.
void write_channel_csv(const ChannelRealization& ch, std::ostream& os);
ChannelRealization read_channel_csv(std::istream& is);
ChannelRealization read_channel_csv(const std::string& path);

}  // namespace ccsim
