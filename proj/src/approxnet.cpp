#include "ansep/approxnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ansep/symfunc.hpp"

namespace ansep {

namespace {

constexpr double kE = 2.718281828459045235360287;

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b < a) std::swap(a, b);
  return b + std::log1p(std::exp(a - b));
}

// ln |c_m| for the activation series
double log_coeff_mag(Activation act, long m) {
  switch (act) {
    case Activation::exp_act:
    case Activation::sin_plus_cos:
      return -std::lgamma(double(m) + 1.0);
    case Activation::sinh_shift:
      return std::log(m % 2 == 0 ? std::sinh(1.0) : std::cosh(1.0)) -
             std::lgamma(double(m) + 1.0);
  }
  throw std::invalid_argument("unsupported activation");
}

Cx pow_int(Cx z, int k) {
  Cx acc = 1.0;
  Cx base = z;
  for (int e = k; e > 0; e >>= 1) {
    if (e & 1) acc *= base;
    base *= base;
  }
  return acc;
}

}  // namespace

double activation_coeff(Activation act, int k) {
  if (k < 0) throw std::invalid_argument("activation_coeff: k must be >= 0");
  switch (act) {
    case Activation::exp_act:
      return std::exp(-std::lgamma(double(k) + 1.0));
    case Activation::sin_plus_cos: {
      // sin + cos has coefficient magnitudes 1/k! with sign cycle +,+,-,-
      double mag = std::exp(-std::lgamma(double(k) + 1.0));
      return (k % 4 <= 1) ? mag : -mag;
    }
    case Activation::sinh_shift:
      return (k % 2 == 0 ? std::sinh(1.0) : std::cosh(1.0)) *
             std::exp(-std::lgamma(double(k) + 1.0));
  }
  throw std::invalid_argument("unsupported activation");
}

Cx activation_eval(Activation act, Cx z) {
  switch (act) {
    case Activation::exp_act:
      return std::exp(z);
    case Activation::sin_plus_cos:
      return std::sin(z) + std::cos(z);
    case Activation::sinh_shift:
      return std::sinh(z + 1.0);
  }
  throw std::invalid_argument("unsupported activation");
}

Cx RootsOfUnityNet::eval(Cx xi) const {
  if (k == 0) return 1.0;
  Cx acc = 0.0;
  const Cx scaled = t * xi;
  for (long j = 0; j < J; ++j) acc += out_w[j] * activation_eval(act, rot[j] * scaled);
  return acc;
}

double RootsOfUnityNet::log_tail_bound(double radius) const {
  if (k == 0) return -std::numeric_limits<double>::infinity();
  const double log_rt = std::log(radius * std::abs(t));
  double acc = -std::numeric_limits<double>::infinity();
  double peak = acc;
  for (long i = 1; i <= 100000; ++i) {
    const long m = i * J + k;
    const double term = log_coeff_mag(act, m) + double(m) * log_rt;
    acc = log_add(acc, term);
    peak = std::max(peak, term);
    // factorial decay must have set in and left the running max far behind
    if (double(m) > radius * std::abs(t) && term < peak - 60.0) return acc;
  }
  throw budget_error("log_tail_bound: series did not converge");
}

double RootsOfUnityNet::tail_bound(double radius) const {
  return std::exp(log_tail_bound(radius));
}

double RootsOfUnityNet::log_lemma_bound() const {
  if (k == 0) return -std::numeric_limits<double>::infinity();
  return std::log(2.0) + double(J) * (std::log(2.0 * kE * k) - std::log(double(J)));
}

double RootsOfUnityNet::lemma_bound() const {
  if (k == 0) return 0.0;
  return std::exp(log_lemma_bound());
}

RootsOfUnityNet build_monomial_net(int k, long J, Activation act,
                                   bool allow_hypothesis_violation) {
  if (k < 0) throw std::invalid_argument("build_monomial_net: k must be >= 0");
  if (J < 1) throw std::invalid_argument("build_monomial_net: J must be >= 1");
  RootsOfUnityNet net;
  net.k = k;
  net.J = J;
  net.act = act;
  if (k == 0) return net;
  // the aliasing filter needs k < J unconditionally
  if (k >= J)
    throw std::invalid_argument("build_monomial_net: need k < J");
  if (!allow_hypothesis_violation && 2.0 * kE * k >= double(J))
    throw std::invalid_argument("build_monomial_net: hypothesis 2ek < J violated");

  const double ck = activation_coeff(act, k);
  net.t = std::pow(Cx(ck), Cx(-1.0 / double(k)));
  net.rot.resize(J);
  net.out_w.resize(J);
  for (long j = 0; j < J; ++j) {
    const double th = 2.0 * M_PI * double(j) / double(J);
    net.rot[j] = Cx(std::cos(th), std::sin(th));
    const long kj = (long(k) * j) % J;
    const double phi = -2.0 * M_PI * double(kj) / double(J);
    net.out_w[j] = Cx(std::cos(phi), std::sin(phi)) / double(J);
  }
  return net;
}

double monomial_sup_error(const RootsOfUnityNet& net, double radius,
                          int grid_points) {
  if (radius != 1.0 && radius != 2.0)
    throw std::invalid_argument("monomial_sup_error: radius must be 1 or 2");
  if (grid_points < 1024)
    throw std::invalid_argument("monomial_sup_error: grid_points must be >= 1024");
  double worst = 0.0;
  for (double ring : {1.0, 0.75, 0.5, 0.25}) {
    const double rho = radius * ring;
    for (int q = 0; q < grid_points; ++q) {
      const double th = 2.0 * M_PI * double(q) / double(grid_points);
      const Cx xi = rho * Cx(std::cos(th), std::sin(th));
      worst = std::max(worst, std::abs(net.eval(xi) - pow_int(xi, net.k)));
    }
  }
  return worst;
}

Cx PairNet::y(Cx a, Cx b) const {
  if (even_nets.empty()) throw std::logic_error("PairNet::y: K = 0 net has no y");
  // summing the one-point terms before subtracting keeps y(a,b) == y(b,a)
  // bitwise, which makes eval itself exactly symmetric
  return even_nets[0].eval(a + b) - (even_nets[0].eval(a) + even_nets[0].eval(b));
}

Cx PairNet::eval(Cx a, Cx b) const {
  if (K == 0) return 1.0;
  const Cx yv = y(a, b);
  const double w0 = std::pow(r, 4) / 4.0;
  Cx acc = 1.0;
  double w = 1.0;
  for (int k = 1; k <= K; ++k) {
    w *= w0;
    acc += w * even_nets[k - 1].eval(yv);
  }
  return acc;
}

PairNet build_pair_net(double r, int K, long J, Activation act) {
  if (!(r >= 0.0 && r < 1.0))
    throw std::invalid_argument("build_pair_net: need 0 <= r < 1");
  if (K < 0) throw std::invalid_argument("build_pair_net: K must be >= 0");
  if (K > 0 && 4.0 * kE * K >= double(J))
    throw std::invalid_argument("build_pair_net: hypothesis 4eK < J violated");
  PairNet g;
  g.r = r;
  g.K = K;
  g.J = J;
  g.act = act;
  if (K == 0) {
    g.delta1 = (r > 0.0) ? std::pow(r, 4) / (1.0 - std::pow(r, 4)) : 0.0;
    g.y_radius = 0.0;
    return g;
  }
  for (int k = 1; k <= K; ++k)
    g.even_nets.push_back(build_monomial_net(2 * k, J, act));

  // |y - 2ab| <= err(f2 at radius 2) + 2 err(f2 at radius 1) =: eta
  const double eta =
      g.even_nets[0].tail_bound(2.0) + 2.0 * g.even_nets[0].tail_bound(1.0);
  g.y_radius = 2.0 + eta;

  // delta1 = sum_k (r^4/4)^k [net tail at |y| + |y^{2k} - (2ab)^{2k}|]
  //        + geometric truncation of the pair series
  const double r4 = std::pow(r, 4);
  double d = std::pow(r4, double(K + 1)) / (1.0 - r4);
  double w = 1.0;
  for (int k = 1; k <= K; ++k) {
    w *= r4 / 4.0;
    const double swap_err =
        2.0 * k * std::pow(g.y_radius, 2.0 * k - 1.0) * eta;
    d += w * (g.even_nets[k - 1].tail_bound(g.y_radius) + swap_err);
  }
  g.delta1 = d;
  return g;
}

void GhatParams::validate() const {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("GhatParams: n must be even and >= 2");
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("GhatParams: need 0 < r < 1");
  if (!(C > 0.0)) throw std::invalid_argument("GhatParams: need C > 0");
  if (K < 1) throw std::invalid_argument("GhatParams: K must be >= 1");
  if (4.0 * kE * K >= double(J))
    throw std::invalid_argument("GhatParams: pair hypothesis 4eK < J violated");
  // largest psi degree is 2n - 3
  if (2.0 * kE * (2 * n - 3) >= double(J))
    throw std::invalid_argument("GhatParams: orbital hypothesis 2e deg < J violated");
}

bool GhatParams::full_budget() const {
  return K >= 2 && double(J) >= 12.0 * kE * double(K);
}

GhatParams ghat_params_from(const HardFnParams& hp, int K, long J,
                            Activation act) {
  hp.validate();
  GhatParams p;
  p.n = hp.n;
  p.r = hp.r;
  p.C = hp.C;
  p.K = K;
  p.J = J;
  p.act = act;
  return p;
}

Ghat::Ghat(const GhatParams& params) : params_(params) {
  params_.validate();
  pair_ = build_pair_net(params_.r, params_.K, params_.J, params_.act);
  sign_ = branch_order_sign(params_.n) > 0 ? 1 : -1;

  const std::vector<Orbital> psi =
      orbitals(params_.n, params_.r, OrbitalFamily::psi);
  std::map<int, RootsOfUnityNet> by_degree;
  psi_hat_.resize(psi.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    double dj = 0.0;
    for (const auto& [deg, coeff] : psi[j].c) {
      auto it = by_degree.find(deg);
      if (it == by_degree.end())
        it = by_degree.emplace(deg, build_monomial_net(deg, params_.J, params_.act))
                 .first;
      psi_hat_[j].push_back({coeff, it->second});
      dj += std::abs(coeff) * it->second.tail_bound(1.0);
    }
    worst = std::max(worst, dj);
  }
  delta2_ = worst;
}

Cx Ghat::eval(const CircleConfig& x) const {
  const int n = params_.n;
  if (int(x.size()) != n)
    throw std::invalid_argument("Ghat::eval: configuration size mismatch");
  Cx pref = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pref *= pair_.eval(x[i], x[j]);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Cx acc = 0.0;
      for (const NetTerm& term : psi_hat_[j]) acc += term.coeff * term.net.eval(x[i]);
      m(i, j) = acc;
    }
  }
  // C sqrt(n!) prod g * det/n! = C prod g * det / sqrt(n!)
  return double(sign_) * params_.C * pref * det_complex(m) /
         std::sqrt(factorial_d(n));
}

long Ghat::parameter_count() const {
  // 2 complex weights per neuron plus the output bias slot; the degree-0
  // constant net has no neurons and costs a single parameter
  long count = 0;
  for (const auto& net : pair_.even_nets) count += 2 * long(net.rot.size()) + 1;
  std::map<int, bool> seen;
  for (const auto& terms : psi_hat_) {
    for (const NetTerm& term : terms) {
      if (seen.count(term.net.k)) continue;
      seen[term.net.k] = true;
      count += 2 * long(term.net.rot.size()) + 1;
    }
  }
  return count;
}

ApproxErrorReport ghat_error(const Ghat& ghat, const HardFn& g, int samples,
                             std::uint64_t seed) {
  const GhatParams& gp = ghat.params();
  const HardFnParams& hp = g.params();
  if (gp.n != hp.n || gp.r != hp.r ||
      std::abs(gp.C - hp.C) > 1e-9 * std::abs(hp.C))
    throw std::invalid_argument("ghat_error: mismatched hard-function params");
  if (samples < 1) throw std::invalid_argument("ghat_error: samples must be >= 1");

  ApproxErrorReport rep;
  rep.delta1 = ghat.delta1();
  rep.delta2 = ghat.delta2();
  const int n = gp.n;
  rep.bound_sup = std::sqrt(factorial_d(n)) * double(n) * std::pow(3.0, n) *
                  std::pow(2.0 / (1.0 - gp.r), double(n) * n) *
                  (rep.delta1 + rep.delta2);
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CircleConfig x = rng.circle_config(n);
    worst = std::max(worst, std::abs(g.eval(x) - ghat.eval(x)));
  }
  rep.measured_sup = worst;
  return rep;
}

KBudget k_budget(int n, double eps) {
  if (n < 6 || n % 2 != 0)
    throw std::invalid_argument("k_budget: n must be even and >= 6");
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("k_budget: need 0 < eps <= 1");
  const double n4 = double(n) * n * n * n;
  const double n7 = n4 * n * n * n;
  KBudget b;
  b.K = long(std::ceil((n4 * std::log(1.0 / eps) + n7) / 4.0));
  b.J = long(std::ceil(12.0 * kE * double(b.K)));
  return b;
}

}  // namespace ansep
