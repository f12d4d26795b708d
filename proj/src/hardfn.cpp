#include "ansep/hardfn.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "ansep/partitions.hpp"

namespace ansep {

namespace {

void require_even_n(int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("hardfn: n must be even and >= 2");
}

// p(k, <= h) <= (k+1)^{h-1}: the h-1 smaller parts determine the largest
double part_count_majorant(long k, int h) {
  return std::pow(double(k) + 1.0, h - 1);
}

// certified bound on sum_{k > m} q^k p(k, <= h) for 0 < q < 1
double restricted_series_tail(double q, int h, long m) {
  const long k0 = m + 1;
  const double t0 = std::pow(q, double(k0)) * part_count_majorant(k0, h);
  // term ratio is decreasing in k; past k0 it never exceeds this
  const double ratio =
      q * std::pow(double(k0 + 2) / double(k0 + 1), h - 1);
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return t0 / (1.0 - ratio);
}

// streams p(k, <= h) for k = 0, 1, 2, ... via
// p(k, <= j) = p(k - j, <= j) + p(k, <= j-1), keeping only a lag-j window
// per row; counts below 2^53 come out exact
class RestrictedCountStream {
 public:
  explicit RestrictedCountStream(int h) : h_(h), rows_(h + 1), val_(h + 1) {
    for (int j = 0; j <= h; ++j) rows_[j].assign(j + 1, 0.0);
  }
  double next() {
    val_[0] = k_ == 0 ? 1.0 : 0.0;
    for (int j = 1; j <= h_; ++j) {
      const double back = k_ >= j ? rows_[j][std::size_t((k_ - j) % (j + 1))] : 0.0;
      val_[j] = back + val_[j - 1];
    }
    for (int j = 1; j <= h_; ++j)
      rows_[j][std::size_t(k_ % (j + 1))] = val_[j];
    ++k_;
    return val_[h_];
  }

 private:
  int h_;
  long k_ = 0;
  std::vector<std::vector<double>> rows_;
  std::vector<double> val_;
};

}  // namespace

// The orbital list keeps the two-branch order (odd w-degrees n-1, n-3, ...,
// then even n-2, n-4, ...). Interleaving those blocks into plain descending
// order costs m(m-1)/2 transpositions for m = n/2, so the determinant in
// branch order carries this sign relative to the alternant-sum normal form.
double branch_order_sign(int n) {
  const int m = n / 2;
  return (m * (m - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
}

double choose_r(int n) {
  require_even_n(n);
  const double n4 = double(n) * n * n * n;
  return 1.0 - 1.0 / (8.0 * n4 + 8.0);
}

double normalization_C(int n, double r, CMode mode, int max_weight,
                       double tail_tol, NormReport* report) {
  require_even_n(n);
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("normalization_C: need 0 < r < 1");

  NormReport rep;
  const double nn1 = double(n) * (n - 1);
  const int h = n / 2;
  const double q = std::pow(r, 8);

  // closed form: ln C^2 = -n(n-1) ln r + sum ln(1 - r^{8k}), truncated
  // once 1 - r^{8k} is within tail_tol of 1
  {
    double log_prod = 0.0;
    double qk = q;
    long k = 0;
    while (qk >= tail_tol && k < 100000000) {
      log_prod += std::log1p(-qk);
      qk *= q;
      ++k;
    }
    if (qk >= tail_tol)
      throw budget_error("normalization_C: closed-form product not converged");
    rep.log_closed_C2 = -nn1 * std::log(r) + log_prod;
    rep.closed_form_value = std::exp(0.5 * rep.log_closed_C2);
  }

  // restricted sum S = sum_k q^k p(k, <= n/2); C^2 = r^{-n(n-1)} / S
  {
    double s = 0.0;
    const long cap = max_weight >= 0 ? max_weight / 4 : 10000000;
    RestrictedCountStream counts(h);
    double qk = 1.0;
    long last = 0;
    for (long k = 0; k <= cap; ++k) {
      if (k > 0 && k % 4096 == 0) qk = std::pow(q, double(k));  // rein in drift
      s += qk * counts.next();
      qk *= q;
      last = k;
      if (max_weight < 0 && k % 32 == 0 &&
          restricted_series_tail(q, h, k) < tail_tol * s)
        break;
    }
    const double tail = restricted_series_tail(q, h, last);
    if (tail > tail_tol * s)
      throw budget_error("normalization_C: restricted sum tail above tolerance");
    rep.terms_used = last + 1;
    rep.tail_bound = tail;
    rep.log_exact_C2 = -nn1 * std::log(r) - std::log(s);
    rep.exact_restricted_value = std::exp(0.5 * rep.log_exact_C2);
  }

  rep.rel_discrepancy =
      std::abs(std::exp(0.5 * (rep.log_closed_C2 - rep.log_exact_C2)) - 1.0);
  if (report) *report = rep;
  return mode == CMode::closed_form ? rep.closed_form_value
                                    : rep.exact_restricted_value;
}

std::vector<Orbital> orbitals(int n, double r, OrbitalFamily family) {
  require_even_n(n);
  if (!(std::abs(r) < 1.0))
    throw std::invalid_argument("orbitals: need |r| < 1");
  const int half = n / 2;
  std::vector<Orbital> out;
  out.reserve(n);
  for (int j = 1; j <= n; ++j) {
    const bool first_branch = j <= half;
    const int lead = first_branch ? n - 2 * j + 1 : 2 * (n - j);
    const int reps = first_branch ? j - 1 : j - 1 - half;
    Orbital p = Orbital::monomial(lead, 1.0);
    if (family == OrbitalFamily::phi) {
      Orbital binom = Orbital::one();
      binom += Orbital::monomial(4, 1.0);
      for (int t = 0; t < reps; ++t) p = p * binom;
    } else if (reps > 0) {
      // two-term variant; the reps == 0 rows stay single monomials (the
      // row operations leave the first row of each branch untouched)
      Orbital two = Orbital::one();
      two += Orbital::monomial(4 * reps, 1.0);
      p = p * two;
    }
    out.push_back(p.scaled_arg(r));
  }
  return out;
}

Cx jastrow_prefactor(const CircleConfig& x, double r) {
  const int n = int(x.size());
  const double r4 = std::pow(r, 4);
  Cx acc = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Cx den = 1.0 - r4 * x[i] * x[i] * x[j] * x[j];
      if (std::abs(den) < 1e-300)
        throw std::domain_error("jastrow_prefactor: pole at configuration");
      acc /= den;
    }
  return acc;
}

double schur_sum_tail(int n, double r, int max_weight) {
  require_even_n(n);
  return restricted_series_tail(std::pow(r, 4), n / 2, max_weight / 4);
}

int default_max_weight(int n, double r, double tail_tol, int cap) {
  require_even_n(n);
  const double lead =
      factorial_d(n) * std::pow(r, double(n) * (n - 1) / 2.0);
  for (int mw = 0; mw <= cap; mw += 4)
    if (lead * schur_sum_tail(n, r, mw) < tail_tol) return mw;
  throw budget_error("default_max_weight: series does not converge by cap");
}

void HardFnParams::validate() const {
  require_even_n(n);
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("HardFnParams: need 0 < r < 1");
  if (!(C > 0.0)) throw std::invalid_argument("HardFnParams: need C > 0");
  if (max_weight >= 0 && max_weight % 4 != 0)
    throw std::invalid_argument("HardFnParams: max_weight must be 0 mod 4");
  if (!(tail_tol > 0.0))
    throw std::invalid_argument("HardFnParams: need tail_tol > 0");
}

HardFnParams make_params(int n, double r, CMode mode, double tail_tol) {
  HardFnParams p;
  p.n = n;
  p.r = r;
  p.c_mode = mode;
  p.tail_tol = tail_tol;
  p.C = normalization_C(n, r, mode, -1, 1e-13);
  try {
    // the evaluated series is scaled by C/sqrt(n!), not the raw n!, so
    // certify against a matching target
    const double target =
        p.C > 0.0 ? tail_tol * std::sqrt(factorial_d(n)) / p.C : -1.0;
    if (target <= 0.0) throw budget_error("make_params: C underflowed");
    p.max_weight = default_max_weight(n, r, target);
  } catch (const budget_error&) {
    p.max_weight = -1;  // series form unavailable this close to r = 1
  }
  return p;
}

HardFn::HardFn(const HardFnParams& params) : params_(params) {
  params_.validate();
  phi_scaled_ = orbitals(params_.n, params_.r, OrbitalFamily::phi);
  if (params_.max_weight < 0) return;

  const int n = params_.n;
  const double dw = double(n) * (n - 1) / 2.0;
  for (int w4 = 0; 4 * w4 <= params_.max_weight; ++w4) {
    for (const auto& mu : enumerate_partitions(w4, n / 2)) {
      const Partition lam = doubly_even_expand(mu);
      SeriesTerm term;
      term.coeff = std::pow(params_.r, 4.0 * w4 + dw);
      term.key.resize(n);
      for (int j = 0; j < n; ++j) {
        const int lam_j = j < int(lam.parts.size()) ? lam.parts[j] : 0;
        term.key[j] = lam_j + (n - 1 - j);
      }
      series_.push_back(std::move(term));
    }
  }
  series_tail_ = params_.C * std::sqrt(factorial_d(n)) * std::pow(params_.r, dw) *
                 schur_sum_tail(n, params_.r, params_.max_weight);
  if (series_tail_ > params_.tail_tol)
    throw budget_error("HardFn: series truncation tail above tolerance");
}

Cx HardFn::eval(const CircleConfig& x, EvalMode mode) const {
  const int n = params_.n;
  if (int(x.size()) != n)
    throw std::invalid_argument("HardFn::eval: wrong configuration size");
  if (mode == EvalMode::jastrow) {
    return branch_order_sign(n) * params_.C * std::sqrt(factorial_d(n)) *
           jastrow_prefactor(x, params_.r) * slater_value(phi_scaled_, x);
  }
  if (params_.max_weight < 0)
    throw budget_error("HardFn::eval: series form unavailable at this r");
  Cx acc = 0.0;
  Eigen::MatrixXcd m(n, n);
  for (const auto& term : series_) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = std::pow(x[i], term.key[j]);
    acc += term.coeff * det_complex(m);
  }
  return params_.C / std::sqrt(factorial_d(n)) * acc;
}

PfaffianIdentityReport verify_pfaffian_identity(int n, double r, int trials,
                                                double tol,
                                                std::uint64_t seed) {
  require_even_n(n);
  PfaffianIdentityReport rep;
  rep.trials = trials;

  // All three routes scale like r^{n(n-1)/2} * Vandermonde, so certify the
  // truncation against that scale: n! * sum_{4k > mw} r^{4k} p(k, <= n/2)
  // an order below the relative comparison tolerance.
  const double dw = double(n) * (n - 1) / 2.0;
  int mw = 0;
  double tail = 0.0;
  if (r > 0.0) {
    const int cap = 4096;
    double t = std::numeric_limits<double>::infinity();
    for (; mw <= cap; mw += 4) {
      t = factorial_d(n) * schur_sum_tail(n, r, mw);
      if (t < tol / 10.0) break;
    }
    if (mw > cap)
      throw budget_error("verify_pfaffian_identity: truncation will not converge");
    tail = t * std::pow(r, dw);  // absolute pointwise bound, for the record
  }
  rep.max_weight = mw;
  rep.series_tail = tail;

  std::unique_ptr<HardFn> raw;
  if (r > 0.0) {
    HardFnParams p;
    p.n = n;
    p.r = r;
    p.C = 1.0;
    p.max_weight = mw;
    p.tail_tol = std::max(tail * 2.0, 1e-300);
    raw = std::make_unique<HardFn>(p);
  }

  const auto phi = orbitals(n, r, OrbitalFamily::phi);
  const double rtfact = std::sqrt(factorial_d(n));
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const auto x = rng.circle_config(n);
    // (i) truncated alternant sum: undo the norm constants on eval()
    const Cx s1 =
        raw ? raw->eval(x, EvalMode::schur_truncated) * rtfact : Cx(0.0);
    // (ii) Pfaffian of the rational kernel
    const Cx s2 = pfaffian(pfaffian_kernel(x, r));
    // (iii) prefactor times the orbital determinant, in normal-form sign
    const Cx s3 = branch_order_sign(n) * jastrow_prefactor(x, r) *
                  factorial_d(n) * slater_value(phi, x);
    const double scale =
        std::max({std::abs(s1), std::abs(s2), std::abs(s3), 1e-300});
    const double dis = std::max({std::abs(s1 - s2), std::abs(s1 - s3),
                                 std::abs(s2 - s3)}) /
                       scale;
    rep.max_rel_disagreement = std::max(rep.max_rel_disagreement, dis);
  }
  rep.pass = rep.max_rel_disagreement < tol;
  return rep;
}

}  // namespace ansep
