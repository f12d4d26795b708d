#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ansep/common.hpp"
#include "ansep/hardfn.hpp"
#include "ansep/symfunc.hpp"

namespace ansep {

// Row/column exponent sets for the tensor-to-matrix flattening: rows are
// strictly decreasing all-odd vectors of length n/2, columns all-even,
// entries <= max_exp, both in descending lexicographic order.
struct FlatIndex {
  int n = 0;
  int max_exp = 0;
  std::vector<std::vector<int>> rows;
  std::vector<std::vector<int>> cols;

  long row_of(const std::vector<int>& beta) const;   // -1 if absent
  long col_of(const std::vector<int>& gamma) const;

 private:
  friend FlatIndex build_index(int, int, std::size_t);
  std::map<std::vector<int>, long> row_pos_;
  std::map<std::vector<int>, long> col_pos_;
};

FlatIndex build_index(int n, int max_exp, std::size_t cap = 2000000);

struct FlatMatrix {
  FlatIndex index;
  std::map<std::pair<long, long>, Cx> entries;
  bool has_factorization = false;
  std::vector<Cx> u, v;  // entry(i,j) = u_i v_j when the factorization holds

  Cx entry(long row, long col) const;
  Eigen::MatrixXcd dense() const;
  double frobenius() const;
};

// Exact symbolic flattening of the hard function: inner products against
// monomials x^{beta cup gamma}, computed from the alternant expansion.
// Requires params.max_weight to cover every doubly even lambda whose
// lambda + delta fits under max_exp.
FlatMatrix flatten_G(const HardFnParams& params, int max_exp);

// Rank-one flattening of an orbital product via coefficient extraction.
FlatMatrix flatten_slater(const std::vector<Orbital>& orbs, int max_exp);

// Frobenius distance from m to its best rank-`budget` approximation
// (Eckart-Young via SVD).
double low_rank_error(const FlatMatrix& m, long rank_budget);

// Nonzero entries of a flattened hard function bucketed by series weight:
// k -> count, where the entry at (beta, gamma) has weight
// 4k = sum(beta) + sum(gamma) - n(n-1)/2. The count at k equals the
// length-restricted partition number p(k, <= n/2), not the unrestricted
// p(k); callers comparing against both see the gap from k = 3 onward.
std::map<long, long> diagonal_multiplicities(const FlatMatrix& m);

enum class SeparationMode { paper_chain, exact_truncated };

struct SeparationReport {
  SeparationMode mode = SeparationMode::paper_chain;
  double value = 0.0;  // certified lower bound on ||F - G||^2

  // paper_chain links (log space where noted)
  double log_rank = 0.0;           // log(L n!)
  double log_partition_sum = 0.0;  // log sum_{k <= n^4} p(k), exact p(k)
  bool rank_fits = false;
  double bound_b1 = 0.0;    // 1 - C^2 r^{n(n-1)} sum_{k<=n^4} r^{8k} p(k)
  double bound_b2 = 0.0;    // 1 - prod_{k>n^4} (1 - r^{8k})
  double bound_floor = 0.0; // r^{8n^4+8}

  // exact_truncated bookkeeping
  long rank_budget = 0;
  int max_exp = 0;
  double truncation_residual = 0.0;  // 1 - n! ||M_trunc||_F^2, certified >= 0
};

// L enters as log L so budgets like e^{36} stay representable. paper_chain
// reproduces the published inequality chain with exact big-integer p(k);
// exact_truncated flattens the truncated hard function at desk scale and
// reports n! * low_rank_error^2 for an explicit rank budget.
SeparationReport separation_lower_bound(int n, double r, double log_L,
                                        SeparationMode mode,
                                        long rank_budget = -1);

struct MarotiReport {
  int n = 0;
  // each inequality as (lhs, rhs) in log space
  double log_npow = 0.0, log_e14 = 0.0;     // N^N <= e^{N^2}/14
  double log_e2n2 = 0.0, log_pn4 = 0.0;     // e^{2N^2}/14 <= p(N^4)
  double log_rank = 0.0;                    // e^{N^2} N! <= p(N^4)
  bool pass1 = false, pass2 = false, pass3 = false;
  bool pass = false;
};

MarotiReport verify_maroti_chain(int n);

}  // namespace ansep
