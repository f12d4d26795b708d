#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ansep/common.hpp"
#include "ansep/hardfn.hpp"

namespace ansep {

enum class Activation { exp_act, sin_plus_cos, sinh_shift };

// k-th Taylor coefficient of the activation, with sign:
//   exp          -> 1/k!
//   sin+cos      -> +,+,-,- cycle over 1/k!
//   sinh(.+1)    -> sinh(1)/k! for even k, cosh(1)/k! for odd k
double activation_coeff(Activation act, int k);

Cx activation_eval(Activation act, Cx z);

// Shallow net f(xi) = sum_j (gamma^{-kj}/J) sigma(gamma^j t xi) with gamma a
// primitive J-th root of unity and t = c_k^{-1/k} (principal branch). The
// roots-of-unity filter keeps only Taylor frequencies congruent to k mod J,
// so f(xi) = xi^k + sum_{i>=1} c_{iJ+k} (t xi)^{iJ+k}.
struct RootsOfUnityNet {
  int k = 0;
  long J = 0;
  Activation act = Activation::exp_act;
  Cx t = 1.0;
  std::vector<Cx> rot;    // gamma^j
  std::vector<Cx> out_w;  // gamma^{-kj}/J

  // k = 0 is the literal constant 1 (t is undefined there)
  Cx eval(Cx xi) const;

  // certified sup_{|xi|<=radius} |f(xi) - xi^k|: the aliased-series tail
  // sum_{i>=1} |c_{iJ+k}| (radius |t|)^{iJ+k}, summed in log space
  double tail_bound(double radius) const;
  double log_tail_bound(double radius) const;

  // the display form 2 (2ek/J)^J (sup over |xi| <= 2); underflows for
  // large J, the log variant never does
  double lemma_bound() const;
  double log_lemma_bound() const;
};

// Throws unless 2ek < J (and always requires k < J, which the aliasing
// identity needs); allow_hypothesis_violation relaxes only the 2ek < J part.
RootsOfUnityNet build_monomial_net(int k, long J, Activation act,
                                   bool allow_hypothesis_violation = false);

// Max of |f(xi) - xi^k| over grids on circles of radius {1, 3/4, 1/2, 1/4}
// times `radius`. radius must be 1 or 2, grid_points >= 1024.
double monomial_sup_error(const RootsOfUnityNet& net, double radius,
                          int grid_points);

// Two-input network approximating the Jastrow pair factor on the torus:
//   g(a, b) = 1 + sum_{k=1}^K (r^4/4)^k f^{(2k)}(y),
//   y = f^{(2)}(a+b) - (f^{(2)}(a) + f^{(2)}(b)) ~= 2ab.
// The (r^4/4)^k weights compensate y tracking 2ab rather than ab: the
// identity is (a+b)^2 - a^2 - b^2 = 2ab, so r^{4k}(ab)^{2k} = (r^4/4)^k y^{2k}
// up to the net errors. |y| <= 2 + eta with certified eta, which is why the
// monomial nets are budgeted at radius 2.
struct PairNet {
  double r = 0.0;
  int K = 0;
  long J = 0;
  Activation act = Activation::exp_act;
  std::vector<RootsOfUnityNet> even_nets;  // f^{(2k)}, k = 1..K

  Cx y(Cx a, Cx b) const;
  Cx eval(Cx a, Cx b) const;

  double delta1 = 0.0;    // certified sup |1/(1-r^4 a^2 b^2) - g| on the torus
  double y_radius = 0.0;  // certified sup |y|
};

// Throws unless 4eK < J (every f^{(2k)} then satisfies its own hypothesis)
// and 0 <= r < 1.
PairNet build_pair_net(double r, int K, long J, Activation act);

struct GhatParams {
  int n = 2;
  double r = 0.5;
  double C = 1.0;
  int K = 2;
  long J = 66;
  Activation act = Activation::exp_act;

  // hard per-net hypotheses; throws std::invalid_argument on violation
  void validate() const;
  // the full-scale sufficient budget J >= 12eK, K >= 2; desk runs may
  // legitimately be below it (the hard hypotheses above still hold)
  bool full_budget() const;
};

GhatParams ghat_params_from(const HardFnParams& hp, int K, long J,
                            Activation act = Activation::exp_act);

// Ghat(x) = sign * C sqrt(N!) prod_{i<j} g(x_i, x_j) * A(psi_hat tensor)(x),
// where each psi_hat_j sums one monomial net per term of the two-term psi
// orbital and sign is the odd/even branch interleaving sign carried by the
// Jastrow evaluation route.
class Ghat {
 public:
  explicit Ghat(const GhatParams& params);

  Cx eval(const CircleConfig& x) const;

  const GhatParams& params() const { return params_; }
  const PairNet& pair_net() const { return pair_; }
  double delta1() const { return pair_.delta1; }
  double delta2() const { return delta2_; }
  // 2J + 1 per distinct monomial net (pair nets plus one per orbital degree)
  long parameter_count() const;

 private:
  struct NetTerm {
    Cx coeff;
    RootsOfUnityNet net;
  };
  GhatParams params_;
  PairNet pair_;
  std::vector<std::vector<NetTerm>> psi_hat_;  // one list per orbital
  double delta2_ = 0.0;
  int sign_ = 1;
};

inline Ghat build_ghat(const GhatParams& params) { return Ghat(params); }

struct ApproxErrorReport {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double measured_sup = 0.0;  // max |G - Ghat| over random circle configs
  double bound_sup = 0.0;     // sqrt(N!) N 3^N (2/(1-r))^{N^2} (d1 + d2)
};

// g must carry the same (n, r, C) as the net. measured_sup is a sample
// estimate; bound_sup the assembled analytic bound, so measured <= bound
// whenever both are finite.
ApproxErrorReport ghat_error(const Ghat& ghat, const HardFn& g, int samples,
                             std::uint64_t seed = 777);

struct KBudget {
  long K = 0;
  long J = 0;
};

// Sufficient truncation/neuron budgets for sup error epsilon at the
// canonical operating point r = choose_r(n):
//   K = ceil((n^4 ln(1/eps) + n^7)/4),  J = ceil(12 e K).
// Requires even n >= 6 and 0 < eps <= 1.
KBudget k_budget(int n, double eps);

}  // namespace ansep
