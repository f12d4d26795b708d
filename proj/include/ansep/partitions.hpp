#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

#include "ansep/common.hpp"

namespace ansep {

// Exact counts get large fast (p(1296) ~ 1e35), so they are arbitrary precision.
using BigCount = mpz_class;

// natural log of a positive BigCount, exact to double rounding
double log_big(const BigCount& v);

// Integer partition, parts weakly decreasing and positive. The empty
// partition is valid and has weight 0.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  explicit Partition(std::vector<int> p) : parts(std::move(p)) {}

  int weight() const {
    int w = 0;
    for (int p : parts) w += p;
    return w;
  }
  int length() const { return int(parts.size()); }
  bool valid() const;

  bool operator==(const Partition&) const = default;
};

// Young-diagram reflection: conjugate(lam)[j] = #{i : lam_i > j}.
Partition conjugate(const Partition& lam);

// True iff all parts of lam and of conjugate(lam) are even. Equivalently
// lam = (2a1, 2a1, 2a2, 2a2, ...).
bool is_doubly_even(const Partition& lam);

// mu = (a1, a2, ...) -> (2a1, 2a1, 2a2, 2a2, ...); inverse of the pairing
// above, so is_doubly_even(doubly_even_expand(mu)) always holds.
Partition doubly_even_expand(const Partition& mu);

// p(k): number of partitions of k. p(0) = 1. Throws std::invalid_argument
// for k < 0. Bounded-largest-part dynamic program over exact integers.
BigCount partition_count(long k);

// Partitions of k into at most max_parts parts (equivalently, by conjugation,
// with largest part <= max_parts).
BigCount partition_count(long k, int max_parts);

// All partitions of k in reverse-lexicographic order, e.g.
// k=4: (4), (3,1), (2,2), (2,1,1), (1,1,1,1).
// max_parts < 0 means unrestricted. Throws budget_error if the output would
// exceed cap entries; guards k <= 10000.
std::vector<Partition> enumerate_partitions(int k, int max_parts = -1,
                                            std::size_t cap = 2000000);

// All doubly even lam with |lam| <= max_weight and length <= max_length,
// ascending weight, reverse-lexicographic within a weight.
std::vector<Partition> enumerate_doubly_even(int max_weight, int max_length,
                                             std::size_t cap = 2000000);

}  // namespace ansep
