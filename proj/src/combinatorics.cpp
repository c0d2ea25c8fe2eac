// SPDX-License-Identifier: Apache-2.0
#include "ccsim/combinatorics.hpp"

#include <algorithm>
#include <cmath>

#include "ccsim/errors.hpp"

namespace ccsim {

void SystemParams::validate() const {
  if (t < 0) throw InvalidParameters("t must be a nonnegative integer");
  if (L < 1) throw InvalidParameters("L must be at least 1");
  if (t + L < 2) throw InvalidParameters("t + L must be at least 2");
  if (K < t + L) throw InvalidParameters("K must be at least t + L");
  if (P_T <= 0.0) throw InvalidParameters("P_T must be positive");
  if (N0 <= 0.0) throw InvalidParameters("N0 must be positive");
  if (M.has_value() != N.has_value())
    throw InvalidParameters("M and N must be given together");
  if (M && N) {
    if (*N <= 0.0 || *M < 0.0) throw InvalidParameters("need N > 0, M >= 0");
    const double tt = static_cast<double>(K) * *M / *N;
    if (std::abs(tt - t) > 1e-9)
      throw InvalidParameters("t must equal K*M/N exactly");
  }
}

double SystemParams::cache_fraction() const {
  if (M && N) return *M / *N;
  return static_cast<double>(t) / static_cast<double>(K);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) /
        static_cast<std::uint64_t>(i);
  }
  return r;
}

namespace {

// Advances a k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == n - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

}  // namespace

int GroupIndex::user_pos(UserId k) const {
  const auto it =
      std::lower_bound(serving_set.begin(), serving_set.end(), k);
  if (it == serving_set.end() || *it != k)
    throw LookupError("user " + std::to_string(k) + " not in serving set");
  return static_cast<int>(it - serving_set.begin());
}

const std::vector<int>& GroupIndex::intended_of(UserId k) const {
  return intended[static_cast<std::size_t>(user_pos(k))];
}

const std::vector<int>& GroupIndex::interfering_of(UserId k) const {
  return interfering[static_cast<std::size_t>(user_pos(k))];
}

std::string GroupIndex::group_label(int col) const {
  const Group& g = groups[static_cast<std::size_t>(col)];
  const bool compact =
      std::all_of(g.begin(), g.end(), [](UserId u) { return u <= 9; });
  std::string s = "a_";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!compact && i > 0) s += '_';
    s += std::to_string(g[i]);
  }
  return s;
}

GroupIndex enumerate_multicast_groups(std::vector<UserId> serving_set, int t) {
  std::sort(serving_set.begin(), serving_set.end());
  if (std::adjacent_find(serving_set.begin(), serving_set.end()) !=
      serving_set.end())
    throw InvalidParameters("serving set has repeated users");
  const int n = static_cast<int>(serving_set.size());
  if (t < 0) throw InvalidParameters("t must be nonnegative");
  if (n < t + 1)
    throw InvalidParameters("serving set smaller than group size t+1");

  GroupIndex idx;
  idx.serving_set = std::move(serving_set);
  idx.t = t;
  idx.delta = static_cast<int>(binomial(n - 1, t));
  idx.delta_bar = static_cast<int>(binomial(n - 1, t + 1));

  std::vector<int> comb(static_cast<std::size_t>(t) + 1);
  for (int i = 0; i <= t; ++i) comb[static_cast<std::size_t>(i)] = i;
  do {
    Group g;
    g.reserve(comb.size());
    for (int c : comb) g.push_back(idx.serving_set[static_cast<std::size_t>(c)]);
    idx.groups.push_back(std::move(g));
  } while (next_combination(comb, n));

  idx.intended.assign(static_cast<std::size_t>(n), {});
  idx.interfering.assign(static_cast<std::size_t>(n), {});
  for (int col = 0; col < idx.n_groups(); ++col) {
    const Group& g = idx.groups[static_cast<std::size_t>(col)];
    std::size_t gi = 0;
    for (int p = 0; p < n; ++p) {
      if (gi < g.size() && g[gi] == idx.serving_set[static_cast<std::size_t>(p)]) {
        idx.intended[static_cast<std::size_t>(p)].push_back(col);
        ++gi;
      } else {
        idx.interfering[static_cast<std::size_t>(p)].push_back(col);
      }
    }
  }
  return idx;
}

std::pair<const std::vector<int>&, const std::vector<int>&> user_group_partition(
    UserId k, const GroupIndex& index) {
  const int p = index.user_pos(k);
  return {index.intended[static_cast<std::size_t>(p)],
          index.interfering[static_cast<std::size_t>(p)]};
}

ServingSetEnumerator::ServingSetEnumerator(int K, int t, int L)
    : K_(K), m_(t + L) {
  if (t < 0 || L < 1) throw InvalidParameters("need t >= 0 and L >= 1");
  if (K < m_) throw InvalidParameters("K must be at least t + L");
  cur_.resize(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) cur_[static_cast<std::size_t>(i)] = i;
  total_ = binomial(K, m_);
}

bool ServingSetEnumerator::next(std::vector<UserId>& out) {
  if (done_) return false;
  out.resize(cur_.size());
  for (std::size_t i = 0; i < cur_.size(); ++i) out[i] = cur_[i] + 1;
  done_ = !next_combination(cur_, K_);
  return true;
}

std::vector<std::vector<UserId>> enumerate_serving_sets(int K, int t, int L) {
  ServingSetEnumerator e(K, t, L);
  std::vector<std::vector<UserId>> out;
  std::vector<UserId> s;
  while (e.next(s)) out.push_back(s);
  return out;
}

}  // namespace ccsim
