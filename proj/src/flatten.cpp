#include "ansep/flatten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ansep/partitions.hpp"

namespace ansep {

namespace {

void enumerate_decreasing(int len, int max_entry, int parity,
                          std::vector<int>& stack,
                          std::vector<std::vector<int>>& out, std::size_t cap) {
  if (int(stack.size()) == len) {
    if (out.size() >= cap) throw budget_error("build_index: cap exceeded");
    out.push_back(stack);
    return;
  }
  int hi = stack.empty() ? max_entry : stack.back() - 1;
  // largest value of the right parity not exceeding hi
  if (hi % 2 != parity % 2) --hi;
  for (int v = hi; v >= parity % 2; v -= 2) {
    // remaining slots need v-2, v-4, ... to stay nonnegative
    if (v < 2 * (len - int(stack.size()) - 1) + parity % 2) break;
    stack.push_back(v);
    enumerate_decreasing(len, max_entry, parity, stack, out, cap);
    stack.pop_back();
  }
}

// log(exp(a) + exp(b)) without leaving log space
double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b < a) std::swap(a, b);
  return b + std::log1p(std::exp(a - b));
}

// ln prod_{k=from}^{inf} (1 - r^{8k}), truncated once r^{8k} < 1e-18; the
// dropped factors shrink the log by less than 1e-17 in magnitude
double log_euler_tail_product(double r, long from) {
  const double q = std::pow(r, 8);
  double acc = 0.0;
  double qk = std::pow(q, double(from));
  for (long k = from; qk >= 1e-18; ++k) {
    acc += std::log1p(-qk);
    qk *= q;
    if (k - from > 100000000)
      throw budget_error("log_euler_tail_product: no convergence");
  }
  return acc;
}

}  // namespace

long FlatIndex::row_of(const std::vector<int>& beta) const {
  auto it = row_pos_.find(beta);
  return it == row_pos_.end() ? -1 : it->second;
}

long FlatIndex::col_of(const std::vector<int>& gamma) const {
  auto it = col_pos_.find(gamma);
  return it == col_pos_.end() ? -1 : it->second;
}

FlatIndex build_index(int n, int max_exp, std::size_t cap) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("build_index: n must be even and >= 2");
  if (max_exp < n - 1)
    throw std::invalid_argument("build_index: max_exp must be >= n - 1");
  FlatIndex idx;
  idx.n = n;
  idx.max_exp = max_exp;
  std::vector<int> stack;
  enumerate_decreasing(n / 2, max_exp, 1, stack, idx.rows, cap);
  enumerate_decreasing(n / 2, max_exp, 0, stack, idx.cols, cap);
  for (long i = 0; i < long(idx.rows.size()); ++i) idx.row_pos_[idx.rows[i]] = i;
  for (long j = 0; j < long(idx.cols.size()); ++j) idx.col_pos_[idx.cols[j]] = j;
  return idx;
}

Cx FlatMatrix::entry(long row, long col) const {
  auto it = entries.find({row, col});
  return it == entries.end() ? Cx(0) : it->second;
}

Eigen::MatrixXcd FlatMatrix::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(long(index.rows.size()),
                                              long(index.cols.size()));
  for (const auto& [rc, v] : entries) m(rc.first, rc.second) = v;
  return m;
}

double FlatMatrix::frobenius() const {
  double acc = 0.0;
  for (const auto& [rc, v] : entries) acc += std::norm(v);
  return std::sqrt(acc);
}

FlatMatrix flatten_G(const HardFnParams& params, int max_exp) {
  params.validate();
  const int n = params.n;
  const int h = n / 2;
  const double dw = double(n) * (n - 1) / 2.0;

  // every doubly even lambda whose lambda + delta fits under max_exp has
  // lambda_1 = 2 mu_1 <= max_exp - (n-1); full coverage needs the series
  // truncation to reach weight 4 h A
  const int a_cap = (max_exp - (n - 1)) / 2;
  if (a_cap < 0)
    throw std::invalid_argument("flatten_G: max_exp below n - 1");
  if (params.max_weight < 4 * h * a_cap)
    throw budget_error("flatten_G: series truncation does not cover max_exp");

  FlatMatrix m;
  m.index = build_index(n, max_exp);
  for (int w = 0; w <= h * a_cap; ++w) {
    for (const auto& mu : enumerate_partitions(w, h)) {
      if (!mu.parts.empty() && mu.parts.front() > a_cap) continue;
      const Partition lam = doubly_even_expand(mu);
      // lambda + delta pairs up as (2b_i + 1, 2b_i): gamma_i = 2 b_i
      std::vector<int> beta(h), gamma(h), key(n);
      for (int i = 0; i < n; ++i)
        key[i] = (i < int(lam.parts.size()) ? lam.parts[i] : 0) + (n - 1 - i);
      for (int i = 0; i < h; ++i) {
        beta[i] = key[2 * i];
        gamma[i] = key[2 * i + 1];
      }
      long row = m.index.row_of(beta);
      long col = m.index.col_of(gamma);
      if (row < 0 || col < 0)
        throw std::logic_error("flatten_G: paired key escaped the index");
      // sign of the permutation sorting the concatenation into the key
      std::vector<int> concat = beta;
      concat.insert(concat.end(), gamma.begin(), gamma.end());
      Canonical c = canonicalize(concat);
      const double val =
          params.C / std::sqrt(factorial_d(n)) * std::pow(params.r, 4.0 * w + dw);
      m.entries[{row, col}] = double(c.sign) * val;
    }
  }
  return m;
}

FlatMatrix flatten_slater(const std::vector<Orbital>& orbs, int max_exp) {
  const int n = int(orbs.size());
  FlatMatrix m;
  m.index = build_index(n, max_exp);
  const int h = n / 2;
  m.u.assign(m.index.rows.size(), Cx(0));
  m.v.assign(m.index.cols.size(), Cx(0));
  for (long i = 0; i < long(m.index.rows.size()); ++i) {
    Cx acc = 1.0;
    for (int t = 0; t < h; ++t) acc *= orbs[t].coeff(m.index.rows[i][t]);
    m.u[i] = acc;
  }
  for (long j = 0; j < long(m.index.cols.size()); ++j) {
    Cx acc = 1.0;
    for (int t = 0; t < h; ++t) acc *= orbs[h + t].coeff(m.index.cols[j][t]);
    m.v[j] = acc;
  }
  m.has_factorization = true;
  for (long i = 0; i < long(m.u.size()); ++i) {
    if (m.u[i] == Cx(0)) continue;
    for (long j = 0; j < long(m.v.size()); ++j)
      if (m.v[j] != Cx(0)) m.entries[{i, j}] = m.u[i] * m.v[j];
  }
  return m;
}

std::map<long, long> diagonal_multiplicities(const FlatMatrix& m) {
  const int n = m.index.n;
  std::map<long, long> counts;
  for (const auto& [rc, v] : m.entries) {
    if (v == Cx(0)) continue;
    long total = 0;
    for (int e : m.index.rows[rc.first]) total += e;
    for (int e : m.index.cols[rc.second]) total += e;
    const long weight = total - long(n) * (n - 1) / 2;
    if (weight < 0 || weight % 4 != 0)
      throw std::logic_error("diagonal_multiplicities: entry off the lattice");
    ++counts[weight / 4];
  }
  return counts;
}

double low_rank_error(const FlatMatrix& m, long rank_budget) {
  if (rank_budget < 0)
    throw std::invalid_argument("low_rank_error: rank_budget must be >= 0");
  const Eigen::MatrixXcd d = m.dense();
  if (d.rows() == 0 || d.cols() == 0) return 0.0;
  Eigen::VectorXd sv;
  if (std::max(d.rows(), d.cols()) <= 64) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d);
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(d);
    sv = svd.singularValues();
  }
  double acc = 0.0;
  for (long i = rank_budget; i < sv.size(); ++i) acc += sv[i] * sv[i];
  return std::sqrt(acc);
}

SeparationReport separation_lower_bound(int n, double r, double log_L,
                                        SeparationMode mode,
                                        long rank_budget) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("separation_lower_bound: n must be even >= 2");
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("separation_lower_bound: need 0 < r < 1");
  SeparationReport rep;
  rep.mode = mode;

  if (mode == SeparationMode::paper_chain) {
    const long n4 = long(n) * n * n * n;
    rep.log_rank = log_L + std::lgamma(double(n) + 1.0);

    // exact big-integer partition sums up to n^4
    BigCount psum = 0;
    double log_series = -std::numeric_limits<double>::infinity();
    const double log_r = std::log(r);
    for (long k = 0; k <= n4; ++k) {
      const BigCount pk = partition_count(k);
      psum += pk;
      log_series = log_add(log_series, 8.0 * k * log_r + log_big(pk));
    }
    rep.log_partition_sum = log_big(psum);
    rep.rank_fits = rep.log_rank <= rep.log_partition_sum;

    // b1 = 1 - C^2 r^{n(n-1)} sum_{k<=n^4} r^{8k} p(k); the closed-form C
    // makes C^2 r^{n(n-1)} = prod_{k>=1}(1 - r^{8k})
    const double log_full_product = log_euler_tail_product(r, 1);
    rep.bound_b1 = 1.0 - std::exp(log_full_product + log_series);
    rep.bound_b2 = 1.0 - std::exp(log_euler_tail_product(r, n4 + 1));
    rep.bound_floor = std::exp((8.0 * n4 + 8.0) * std::log(r));
    // valid only while the rank budget stays under the diagonal multiplicity
    rep.value = rep.rank_fits ? rep.bound_b1 : 0.0;
    return rep;
  }

  // exact_truncated: flatten the truncated hard function and measure the
  // singular mass an explicit rank budget cannot reach
  if (rank_budget < 0)
    throw std::invalid_argument(
        "separation_lower_bound: exact_truncated needs a rank budget");
  rep.rank_budget = rank_budget;

  HardFnParams params = make_params(n, r, CMode::exact_restricted);
  if (params.max_weight < 0)
    throw budget_error("separation_lower_bound: r too close to 1 for exact mode");

  // pick max_exp so the uncovered diagonal mass is certifiably negligible:
  // weights <= 4A are fully covered once lambda_1 <= max_exp - (n-1)
  const int h = n / 2;
  int a_cap = 1;
  while (schur_sum_tail(n, r * r, 4 * a_cap) > 1e-12 && a_cap < 2000) ++a_cap;
  if (a_cap >= 2000)
    throw budget_error("separation_lower_bound: residual will not converge");
  rep.max_exp = (n - 1) + 2 * a_cap;

  HardFnParams cover = params;
  cover.max_weight = std::max(params.max_weight, 4 * h * a_cap);
  FlatMatrix m = flatten_G(cover, rep.max_exp);

  const double frob2 = m.frobenius() * m.frobenius();
  rep.truncation_residual = std::max(0.0, 1.0 - factorial_d(n) * frob2);
  const double err = low_rank_error(m, rank_budget);
  rep.value = factorial_d(n) * err * err;
  return rep;
}

MarotiReport verify_maroti_chain(int n) {
  if (n < 2) throw std::invalid_argument("verify_maroti_chain: n must be >= 2");
  MarotiReport rep;
  rep.n = n;
  const double n2 = double(n) * n;
  const long n4 = long(n) * n * n * n;
  rep.log_npow = double(n) * std::log(double(n));
  rep.log_e14 = n2 - std::log(14.0);
  rep.log_e2n2 = 2.0 * n2 - std::log(14.0);
  rep.log_pn4 = log_big(partition_count(n4));
  rep.log_rank = n2 + std::lgamma(double(n) + 1.0);
  rep.pass1 = rep.log_npow <= rep.log_e14;
  rep.pass2 = rep.log_e2n2 <= rep.log_pn4;
  rep.pass3 = rep.log_rank <= rep.log_pn4;
  rep.pass = rep.pass1 && rep.pass2 && rep.pass3;
  return rep;
}

}  // namespace ansep
