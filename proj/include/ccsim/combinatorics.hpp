// SPDX-License-Identifier: Apache-2.0
//
// Enumeration of serving sets, multicast groups and the per-user
// intended/interfering partitions. Group order is lexicographic on the
// sorted member tuples and is the canonical column order used everywhere.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccsim {

using UserId = int;
using Group = std::vector<UserId>;  // sorted, strictly increasing

struct SystemParams {
  int K = 0;        // user count
  int L = 0;        // transmit antennas
  int t = 0;        // coded-caching gain
  double P_T = 1.0;  // total power budget (linear)
  double N0 = 1.0;   // noise variance (linear)
  double theta = 1.0;   // codeword length, bits
  double F = 1.0;       // file size, bits
  std::optional<double> M;  // cache size, files
  std::optional<double> N;  // library size, files

  // Throws InvalidParameters on violation of K >= t+L >= 2, t >= 0,
  // P_T > 0, N0 > 0, and (if M,N set) t == K*M/N exactly.
  void validate() const;
  double cache_fraction() const;  // M/N, falling back to t/K
};

std::uint64_t binomial(int n, int k);

struct GroupIndex {
  std::vector<UserId> serving_set;  // sorted user ids
  int t = 0;
  int delta = 0;      // streams per user, C(|S|-1, t)
  int delta_bar = 0;  // interference terms per user, C(|S|-1, t+1)
  std::vector<Group> groups;  // lexicographic, size C(|S|, t+1)

  // Column indices into `groups`, per serving-set position, both in
  // global group order.
  std::vector<std::vector<int>> intended;
  std::vector<std::vector<int>> interfering;

  int n_groups() const { return static_cast<int>(groups.size()); }
  int n_users() const { return static_cast<int>(serving_set.size()); }

  // Position of user k in the serving set; throws LookupError if absent.
  int user_pos(UserId k) const;
  const std::vector<int>& intended_of(UserId k) const;
  const std::vector<int>& interfering_of(UserId k) const;

  // Printable column label, e.g. "a_12" for group {1,2}.
  std::string group_label(int col) const;
};

// All (t+1)-subsets of serving_set in lexicographic order plus the derived
// per-user partitions. Requires |serving_set| >= t+1.
GroupIndex enumerate_multicast_groups(std::vector<UserId> serving_set, int t);

// The (intended, interfering) column lists for one user.
std::pair<const std::vector<int>&, const std::vector<int>&> user_group_partition(
    UserId k, const GroupIndex& index);

// Streams the C(K, t+L) serving sets over users {1..K} in lexicographic
// order without materializing them.
class ServingSetEnumerator {
 public:
  ServingSetEnumerator(int K, int t, int L);
  // Writes the next set into `out`; false once exhausted.
  bool next(std::vector<UserId>& out);
  std::uint64_t total() const { return total_; }

 private:
  int K_, m_;
  bool done_ = false;
  std::vector<int> cur_;
  std::uint64_t total_;
};

// Convenience materialization for small cases.
std::vector<std::vector<UserId>> enumerate_serving_sets(int K, int t, int L);

}  // namespace ccsim
