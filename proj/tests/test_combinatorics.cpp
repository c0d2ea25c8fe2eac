// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <set>

#include "ccsim/combinatorics.hpp"
#include "ccsim/errors.hpp"

using namespace ccsim;

TEST_CASE("multicast groups for three users") {
  const GroupIndex idx = enumerate_multicast_groups({1, 2, 3}, 1);
  REQUIRE(idx.groups.size() == 3);
  CHECK(idx.groups[0] == Group{1, 2});
  CHECK(idx.groups[1] == Group{1, 3});
  CHECK(idx.groups[2] == Group{2, 3});
  CHECK(idx.delta == 2);
  CHECK(idx.delta_bar == 1);
}

TEST_CASE("serving set of size t+1 yields a single group") {
  const GroupIndex idx = enumerate_multicast_groups({1, 2}, 1);
  REQUIRE(idx.groups.size() == 1);
  CHECK(idx.groups[0] == Group{1, 2});
  CHECK(idx.delta == 1);
  CHECK(idx.delta_bar == 0);
  CHECK(idx.interfering_of(1).empty());
  CHECK(idx.interfering_of(2).empty());
}

TEST_CASE("five-user example ordering and partitions") {
  const GroupIndex idx = enumerate_multicast_groups({1, 2, 3, 4, 5}, 1);
  REQUIRE(idx.n_groups() == 10);
  CHECK(idx.delta == 4);
  CHECK(idx.delta_bar == 6);
  CHECK(idx.group_label(0) == "a_12");
  CHECK(idx.group_label(4) == "a_23");
  CHECK(idx.group_label(9) == "a_45");

  CHECK(idx.intended_of(1) == std::vector<int>{0, 1, 2, 3});
  CHECK(idx.interfering_of(1) == std::vector<int>{4, 5, 6, 7, 8, 9});
  // User 3: groups {13}, {23}, {34}, {35}.
  CHECK(idx.intended_of(3) == std::vector<int>{1, 4, 7, 8});

  const auto [intended, interfering] = user_group_partition(1, idx);
  CHECK(intended.size() == 4);
  CHECK(interfering.size() == 6);
}

TEST_CASE("delta and delta_bar match direct subset counting up to t+L = 10") {
  for (int n = 2; n <= 10; ++n) {
    for (int t = 0; t <= n - 1; ++t) {
      std::vector<UserId> serving;
      for (int u = 1; u <= n; ++u) serving.push_back(u);
      const GroupIndex idx = enumerate_multicast_groups(serving, t);

      CHECK(idx.n_groups() == static_cast<int>(binomial(n, t + 1)));
      CHECK(idx.delta == static_cast<int>(binomial(n - 1, t)));
      CHECK(idx.delta_bar == static_cast<int>(binomial(n - 1, t + 1)));

      for (UserId k : serving) {
        // Brute-force membership scan.
        int member = 0;
        for (const Group& g : idx.groups)
          if (std::find(g.begin(), g.end(), k) != g.end()) ++member;
        CHECK(member == idx.delta);
        CHECK(static_cast<int>(idx.intended_of(k).size()) == idx.delta);
        CHECK(static_cast<int>(idx.interfering_of(k).size()) == idx.delta_bar);

        // Partition property: every column in exactly one side.
        std::set<int> seen;
        for (int c : idx.intended_of(k)) seen.insert(c);
        for (int c : idx.interfering_of(k)) seen.insert(c);
        CHECK(static_cast<int>(seen.size()) == idx.n_groups());
      }
    }
  }
}

TEST_CASE("group order is deterministic") {
  const GroupIndex a = enumerate_multicast_groups({2, 5, 7, 9}, 2);
  const GroupIndex b = enumerate_multicast_groups({9, 7, 5, 2}, 2);
  CHECK(a.groups == b.groups);
  CHECK(a.intended == b.intended);
}

TEST_CASE("serving set enumeration") {
  CHECK(enumerate_serving_sets(5, 1, 4) ==
        std::vector<std::vector<UserId>>{{1, 2, 3, 4, 5}});

  const auto six = enumerate_serving_sets(6, 1, 4);
  REQUIRE(six.size() == 6);
  CHECK(six.front() == std::vector<UserId>{1, 2, 3, 4, 5});
  CHECK(six.back() == std::vector<UserId>{2, 3, 4, 5, 6});
  CHECK(std::is_sorted(six.begin(), six.end()));

  ServingSetEnumerator big(20, 1, 6);
  CHECK(big.total() == 77520);
  std::uint64_t count = 0;
  std::vector<UserId> s;
  while (big.next(s)) ++count;
  CHECK(count == 77520);
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(enumerate_multicast_groups({1, 2}, 2), InvalidParameters);
  CHECK_THROWS_AS(enumerate_multicast_groups({1, 1, 2}, 1), InvalidParameters);
  CHECK_THROWS_AS(ServingSetEnumerator(4, 1, 4), InvalidParameters);
  const GroupIndex idx = enumerate_multicast_groups({1, 2, 3}, 1);
  CHECK_THROWS_AS(idx.intended_of(9), LookupError);
  CHECK_THROWS_AS(user_group_partition(0, idx), LookupError);
}

TEST_CASE("system params invariants") {
  SystemParams p;
  p.K = 5;
  p.L = 4;
  p.t = 1;
  p.P_T = 10.0;
  p.N0 = 1.0;
  CHECK_NOTHROW(p.validate());
  CHECK(p.cache_fraction() == doctest::Approx(0.2));

  p.M = 1.0;
  p.N = 5.0;  // t = K*M/N = 1, consistent
  CHECK_NOTHROW(p.validate());
  p.N = 4.0;  // t would be 1.25
  CHECK_THROWS_AS(p.validate(), InvalidParameters);

  SystemParams bad = p;
  bad.N = 5.0;
  bad.K = 4;  // K < t + L
  CHECK_THROWS_AS(bad.validate(), InvalidParameters);
  bad = p;
  bad.N = 5.0;
  bad.P_T = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameters);
}
