#include "ansep/partitions.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"

using namespace ansep;

namespace {

// Oracle: conjugate by materializing the Young diagram as a boolean grid and
// transposing it. Deliberately naive.
Partition conjugate_grid_oracle(const Partition& lam) {
  if (lam.parts.empty()) return {};
  int rows = lam.length(), cols = lam.parts.front();
  std::vector<std::vector<bool>> grid(rows, std::vector<bool>(cols, false));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < lam.parts[i]; ++j) grid[i][j] = true;
  Partition out;
  for (int j = 0; j < cols; ++j) {
    int h = 0;
    for (int i = 0; i < rows; ++i)
      if (grid[i][j]) ++h;
    out.parts.push_back(h);
  }
  return out;
}

// Oracle: Euler's pentagonal-number recurrence, independent of the
// bounded-largest-part dynamic program used by partition_count.
std::vector<BigCount> pentagonal_counts(int up_to) {
  std::vector<BigCount> p(up_to + 1);
  p[0] = 1;
  for (int n = 1; n <= up_to; ++n) {
    BigCount acc = 0;
    for (int k = 1;; ++k) {
      long g1 = long(k) * (3 * k - 1) / 2;
      long g2 = long(k) * (3 * k + 1) / 2;
      if (g1 > n && g2 > n) break;
      int sign = (k % 2 == 1) ? 1 : -1;
      if (g1 <= n) acc += sign * p[n - g1];
      if (g2 <= n) acc += sign * p[n - g2];
    }
    p[n] = acc;
  }
  return p;
}

Partition P(std::initializer_list<int> v) { return Partition(std::vector<int>(v)); }

}  // namespace

TEST_SUITE_BEGIN("partitions");

TEST_CASE("conjugate matches known reflections") {
  CHECK(conjugate(P({5, 4, 1})) == P({3, 2, 2, 2, 1}));
  CHECK(conjugate(P({4, 4, 2, 2})) == P({4, 4, 2, 2}));  // self-conjugate
  CHECK(conjugate(P({1})) == P({1}));
  CHECK(conjugate(Partition{}) == Partition{});
  CHECK(conjugate(P({3})) == P({1, 1, 1}));
}

TEST_CASE("conjugate agrees with grid-transpose oracle and is an involution") {
  for (int k = 0; k <= 12; ++k) {
    for (const auto& lam : enumerate_partitions(k)) {
      auto c = conjugate(lam);
      CHECK(c == conjugate_grid_oracle(lam));
      CHECK(conjugate(c) == lam);
      CHECK(c.weight() == lam.weight());
      CHECK(c.valid());
    }
  }
}

TEST_CASE("doubly even detection matches the paired-parts characterization") {
  CHECK(is_doubly_even(Partition{}));
  CHECK(is_doubly_even(P({4, 4, 2, 2})));
  CHECK(is_doubly_even(P({2, 2})));
  CHECK_FALSE(is_doubly_even(P({2})));        // conjugate (1,1) has odd parts
  CHECK_FALSE(is_doubly_even(P({4, 2})));     // columns of odd height
  CHECK_FALSE(is_doubly_even(P({3, 3})));     // odd parts
  CHECK_FALSE(is_doubly_even(P({6, 2, 2})));

  // lam doubly even <=> lam = expand(mu) for some mu, checked exhaustively
  for (int w = 0; w <= 16; ++w) {
    std::set<std::vector<int>> expanded;
    if (w % 4 == 0)
      for (const auto& mu : enumerate_partitions(w / 4))
        expanded.insert(doubly_even_expand(mu).parts);
    for (const auto& lam : enumerate_partitions(w))
      CHECK(is_doubly_even(lam) == (expanded.count(lam.parts) > 0));
  }
}

TEST_CASE("expand produces doubly even partitions of quadrupled weight") {
  for (int k = 0; k <= 8; ++k) {
    for (const auto& mu : enumerate_partitions(k)) {
      auto lam = doubly_even_expand(mu);
      CHECK(lam.valid());
      CHECK(is_doubly_even(lam));
      CHECK(lam.weight() == 4 * k);
      CHECK(lam.length() == 2 * mu.length());
    }
  }
}

TEST_CASE("partition counts: small values frozen") {
  // p(0)..p(10)
  const long expect[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  for (int k = 0; k <= 10; ++k) CHECK(partition_count(k) == expect[k]);
  CHECK(partition_count(50) == BigCount("204226"));
  CHECK(partition_count(100) == BigCount("190569292"));
  CHECK(partition_count(200) == BigCount("3972999029388"));
}

TEST_CASE("partition counts agree with the pentagonal recurrence") {
  auto oracle = pentagonal_counts(400);
  for (int k : {0, 1, 7, 25, 64, 121, 250, 333, 400})
    CHECK(partition_count(k) == oracle[k]);
}

TEST_CASE("counts match explicit enumeration, restricted and not") {
  for (int k = 0; k <= 18; ++k) {
    CHECK(partition_count(k) == BigCount(long(enumerate_partitions(k).size())));
    for (int m = 0; m <= 5; ++m)
      CHECK(partition_count(k, m) ==
            BigCount(long(enumerate_partitions(k, m).size())));
  }
  CHECK(partition_count(3, 2) == 2);  // (3), (2,1)
  CHECK(partition_count(4, 2) == 3);  // (4), (3,1), (2,2)
  // restriction is inert once max_parts >= k
  CHECK(partition_count(9, 9) == partition_count(9));
  CHECK(partition_count(9, 50) == partition_count(9));
}

TEST_CASE("restricted counts are conjugation-symmetric") {
  // #partitions of k into <= m parts == #partitions with all parts <= m
  for (int k = 1; k <= 14; ++k) {
    for (int m = 1; m <= 6; ++m) {
      long bounded_part = 0;
      for (const auto& lam : enumerate_partitions(k))
        if (lam.parts.front() <= m) ++bounded_part;
      CHECK(partition_count(k, m) == BigCount(bounded_part));
    }
  }
}

TEST_CASE("enumeration is reverse-lexicographic") {
  auto got = enumerate_partitions(4);
  REQUIRE(got.size() == 5);
  CHECK(got[0] == P({4}));
  CHECK(got[1] == P({3, 1}));
  CHECK(got[2] == P({2, 2}));
  CHECK(got[3] == P({2, 1, 1}));
  CHECK(got[4] == P({1, 1, 1, 1}));
  for (int k = 0; k <= 15; ++k) {
    auto all = enumerate_partitions(k);
    for (std::size_t i = 1; i < all.size(); ++i)
      CHECK(std::lexicographical_compare(all[i].parts.begin(), all[i].parts.end(),
                                         all[i - 1].parts.begin(),
                                         all[i - 1].parts.end()));
  }
}

TEST_CASE("doubly even enumeration order and contents") {
  auto a = enumerate_doubly_even(8, 2);
  REQUIRE(a.size() == 3);
  CHECK(a[0] == Partition{});
  CHECK(a[1] == P({2, 2}));
  CHECK(a[2] == P({4, 4}));

  auto b = enumerate_doubly_even(8, 4);
  REQUIRE(b.size() == 4);
  CHECK(b[0] == Partition{});
  CHECK(b[1] == P({2, 2}));
  CHECK(b[2] == P({4, 4}));
  CHECK(b[3] == P({2, 2, 2, 2}));

  // count at each weight 4k is the restricted count p(k, <= max_length/2)
  for (int maxlen : {2, 4, 6}) {
    auto all = enumerate_doubly_even(40, maxlen);
    for (int k = 0; 4 * k <= 40; ++k) {
      long c = 0;
      for (const auto& lam : all)
        if (lam.weight() == 4 * k) ++c;
      CHECK(BigCount(c) == partition_count(k, maxlen / 2));
    }
  }
}

TEST_CASE("log_big is accurate") {
  CHECK(log_big(BigCount(1)) == 0.0);
  CHECK(std::abs(log_big(BigCount("190569292")) - std::log(190569292.0)) < 1e-12);
  BigCount big = 1;
  for (int i = 0; i < 300; ++i) big *= 10;
  CHECK(std::abs(log_big(big) - 300.0 * std::log(10.0)) < 1e-9);
}

TEST_CASE("guards and budgets") {
  CHECK_THROWS_AS(partition_count(-1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_partitions(-2), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_partitions(10001), budget_error);
  CHECK_THROWS_AS(enumerate_partitions(40, -1, 100), budget_error);
  CHECK_THROWS_AS(conjugate(P({1, 3})), std::invalid_argument);
  CHECK_THROWS_AS(is_doubly_even(P({0})), std::invalid_argument);
}

TEST_SUITE_END();
