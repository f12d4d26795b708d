#include "ansep/partitions.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace ansep {

double log_big(const BigCount& v) {
  if (v <= 0) throw std::invalid_argument("log_big: value must be positive");
  signed long exp2;
  double d = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(d) + double(exp2) * std::log(2.0);
}

bool Partition::valid() const {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] <= 0) return false;
    if (i > 0 && parts[i] > parts[i - 1]) return false;
  }
  return true;
}

Partition conjugate(const Partition& lam) {
  if (!lam.valid()) throw std::invalid_argument("conjugate: invalid partition");
  Partition out;
  if (lam.parts.empty()) return out;
  int cols = lam.parts.front();
  out.parts.resize(cols);
  for (int j = 0; j < cols; ++j) {
    int h = 0;
    for (int p : lam.parts)
      if (p > j) ++h;
    out.parts[j] = h;
  }
  return out;
}

bool is_doubly_even(const Partition& lam) {
  if (!lam.valid()) throw std::invalid_argument("is_doubly_even: invalid partition");
  for (int p : lam.parts)
    if (p % 2 != 0) return false;
  Partition conj = conjugate(lam);
  for (int p : conj.parts)
    if (p % 2 != 0) return false;
  return true;
}

Partition doubly_even_expand(const Partition& mu) {
  if (!mu.valid()) throw std::invalid_argument("doubly_even_expand: invalid partition");
  Partition out;
  out.parts.reserve(mu.parts.size() * 2);
  for (int a : mu.parts) {
    out.parts.push_back(2 * a);
    out.parts.push_back(2 * a);
  }
  return out;
}

namespace {

void fill_counts(std::vector<BigCount>& dp, long k, long m) {
  dp.assign(std::size_t(k) + 1, 0);
  dp[0] = 1;
  for (long j = 1; j <= m; ++j)
    for (long w = j; w <= k; ++w) dp[std::size_t(w)] += dp[std::size_t(w - j)];
}

// dp[k] = #partitions of k with all parts <= m. By conjugation this equals
// #partitions into at most m parts. Cached per m, grown geometrically (the
// rolling recurrence cannot be extended in place).
const std::vector<BigCount>& counts_with_part_bound(long k, long m) {
  static std::mutex mu;
  static std::map<long, std::vector<BigCount>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& dp = cache[m];
  if (long(dp.size()) <= k)
    fill_counts(dp, std::max(k, 2 * long(dp.size())), m);
  return dp;
}

const std::vector<BigCount>& unrestricted_counts(long k) {
  static std::mutex mu;
  static std::vector<BigCount> dp;
  std::lock_guard<std::mutex> lock(mu);
  if (long(dp.size()) <= k) {
    long top = std::max(k, 2 * long(dp.size()));
    fill_counts(dp, top, top);
  }
  return dp;
}

}  // namespace

BigCount partition_count(long k) {
  if (k < 0) throw std::invalid_argument("partition_count: k must be >= 0");
  if (k == 0) return 1;
  return unrestricted_counts(k)[std::size_t(k)];
}

BigCount partition_count(long k, int max_parts) {
  if (k < 0) throw std::invalid_argument("partition_count: k must be >= 0");
  if (max_parts < 0) throw std::invalid_argument("partition_count: max_parts must be >= 0");
  if (k == 0) return 1;
  if (max_parts == 0) return 0;
  if (max_parts >= k) return unrestricted_counts(k)[std::size_t(k)];
  return counts_with_part_bound(k, max_parts)[std::size_t(k)];
}

namespace {

void enumerate_rec(int remaining, int max_part, int slots,
                   std::vector<int>& stack, std::vector<Partition>& out,
                   std::size_t cap) {
  if (remaining == 0) {
    if (out.size() >= cap) throw budget_error("enumerate_partitions: output cap exceeded");
    out.emplace_back(stack);
    return;
  }
  if (slots == 0) return;
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    stack.push_back(p);
    enumerate_rec(remaining - p, p, slots - 1, stack, out, cap);
    stack.pop_back();
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int k, int max_parts, std::size_t cap) {
  if (k < 0) throw std::invalid_argument("enumerate_partitions: k must be >= 0");
  if (k > 10000) throw budget_error("enumerate_partitions: k exceeds the 1e4 guard");
  std::vector<Partition> out;
  std::vector<int> stack;
  int slots = max_parts < 0 ? k : max_parts;
  if (k == 0) {
    out.emplace_back();
    return out;
  }
  enumerate_rec(k, k, slots, stack, out, cap);
  return out;
}

std::vector<Partition> enumerate_doubly_even(int max_weight, int max_length,
                                             std::size_t cap) {
  if (max_weight < 0 || max_length < 0)
    throw std::invalid_argument("enumerate_doubly_even: bounds must be >= 0");
  std::vector<Partition> out;
  out.emplace_back();  // weight 0
  // weight 4k doubly even partitions of length <= 2m <-> mu of k with <= m parts
  for (int w = 4; w <= max_weight; w += 4) {
    auto mus = enumerate_partitions(w / 4, max_length / 2, cap);
    for (const auto& mu : mus) {
      if (out.size() >= cap) throw budget_error("enumerate_doubly_even: output cap exceeded");
      out.push_back(doubly_even_expand(mu));
    }
  }
  return out;
}

}  // namespace ansep
