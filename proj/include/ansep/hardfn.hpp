#pragma once

#include <cstdint>
#include <vector>

#include "ansep/common.hpp"
#include "ansep/symfunc.hpp"

namespace ansep {

// r = 1 - 1/(8n^4 + 8); n even, >= 2
double choose_r(int n);

// (-1)^{m(m-1)/2}, m = n/2: sign relating the determinant over the orbital
// list in two-branch row order to the alternant-series normal form.
double branch_order_sign(int n);

enum class CMode { closed_form, exact_restricted };

struct NormReport {
  double closed_form_value = 0.0;      // may underflow to 0 for r near 1
  double exact_restricted_value = 0.0;
  double rel_discrepancy = 0.0;        // |C_closed/C_exact - 1|, via logs
  double tail_bound = 0.0;             // certified bound on the dropped sum mass
  double log_closed_C2 = 0.0;          // ln C^2, stable at any r in (0,1)
  double log_exact_C2 = 0.0;
  long terms_used = 0;
};

// Normalizing constant for the hard function.
//
// closed_form:      C^2 = r^{-n(n-1)} prod_{k>=1} (1 - r^{8k})
// exact_restricted: C^2 = 1 / (r^{n(n-1)} sum_k r^{8k} p(k, <= n/2))
//
// The closed form treats the generating sum as running over all doubly
// even partitions; the restricted mode keeps only those that actually fit
// in n rows, which is what the squared norm sees. Both values (and their
// ratio gap) always land in the report.
//
// max_weight >= 0 truncates the restricted sum at 4k <= max_weight and
// fails if the certified tail exceeds tail_tol relative to the partial
// sum; max_weight < 0 extends adaptively until the tail is small enough.
double normalization_C(int n, double r, CMode mode, int max_weight,
                       double tail_tol, NormReport* report = nullptr);

enum class OrbitalFamily { phi, psi };

// Closed-form orbital polynomials, already scaled (arguments pre-multiplied
// by r). The psi family is the two-term variant obtained from phi by row
// operations on the Slater matrix; rows 1 and n/2+1 are single monomials and
// the families antisymmetrize to the same function.
std::vector<Orbital> orbitals(int n, double r, OrbitalFamily family);

// prod_{i<j} 1/(1 - r^4 x_i^2 x_j^2), fixed lexicographic pair order
Cx jastrow_prefactor(const CircleConfig& x, double r);

// certified upper bound on sum_{4k > max_weight} r^{4k} p(k, <= n/2)
double schur_sum_tail(int n, double r, int max_weight);

// smallest multiple of 4 whose raw truncated-sum error
// n! r^{n(n-1)/2} schur_sum_tail(...) drops below tail_tol; throws
// budget_error past cap (r too close to 1)
int default_max_weight(int n, double r, double tail_tol, int cap = 4096);

struct HardFnParams {
  int n = 2;
  double r = 0.5;
  double C = 1.0;
  CMode c_mode = CMode::exact_restricted;
  int max_weight = 0;   // < 0: series evaluation unavailable at this r
  double tail_tol = 1e-12;

  void validate() const;
};

// max_weight picked automatically (or marked unavailable), C from the
// requested mode
HardFnParams make_params(int n, double r, CMode mode = CMode::exact_restricted,
                         double tail_tol = 1e-12);

enum class EvalMode { jastrow, schur_truncated };

class HardFn {
 public:
  explicit HardFn(const HardFnParams& params);

  Cx eval(const CircleConfig& x, EvalMode mode = EvalMode::jastrow) const;

  const HardFnParams& params() const { return params_; }
  // certified bound on |series value - true value|, pointwise on the torus
  double series_tail() const { return series_tail_; }
  bool series_available() const { return params_.max_weight >= 0; }
  const std::vector<Orbital>& scaled_orbitals() const { return phi_scaled_; }

 private:
  struct SeriesTerm {
    double coeff;            // r^{|lambda| + n(n-1)/2}
    std::vector<int> key;    // lambda + delta, strictly decreasing
  };

  HardFnParams params_;
  std::vector<Orbital> phi_scaled_;
  std::vector<SeriesTerm> series_;
  double series_tail_ = 0.0;
};

struct PfaffianIdentityReport {
  int trials = 0;
  int max_weight = 0;
  double series_tail = 0.0;         // absolute, on the raw alternant sum
  double max_rel_disagreement = 0.0;
  bool pass = false;
};

// Three-way check at random circle configurations: truncated alternant sum,
// Pfaffian of the rational kernel, and prefactor times the orbital Slater
// determinant must agree to tol.
PfaffianIdentityReport verify_pfaffian_identity(int n, double r, int trials,
                                                double tol,
                                                std::uint64_t seed = 12345);

}  // namespace ansep
