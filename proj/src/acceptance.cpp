#include "ansep/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ansep/approxnet.hpp"
#include "ansep/flatten.hpp"
#include "ansep/hardfn.hpp"
#include "ansep/partitions.hpp"
#include "ansep/symfunc.hpp"
#include "ansep/train.hpp"

namespace ansep {

namespace {

// Training experiment operating point, shared with the cli defaults. The
// separation needs r near 1 (the low-rank floor scales like r^{8k}) but the
// theory-canonical r = choose_r(4) ~ 0.9995 makes the target so spiky that
// every desk-scale run diverges at the pinned learning rate; r = 0.99 keeps
// binding rank floors for the truncated models while plain descent still
// converges.
const double kExperimentR = 0.99;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// ---- 1: three-way product identity ----------------------------------------

CriterionOutcome c1_pfaffian() {
  CriterionOutcome o;
  o.pass = true;
  double worst = 0.0;
  for (int n : {2, 4}) {
    PfaffianIdentityReport rep = verify_pfaffian_identity(n, 0.5, 100, 1e-8);
    o.pass = o.pass && rep.pass;
    worst = std::max(worst, rep.max_rel_disagreement);
  }
  o.detail = fmt("n in {2,4}, r=0.5, 100 configs each: max rel disagreement "
                 "%.3e (tol 1e-8)", worst);
  return o;
}

// ---- 2: alternant orthogonality --------------------------------------------

CriterionOutcome c2_orthogonality() {
  CriterionOutcome o;
  const int n = 4, max_weight = 8;
  std::vector<Partition> lams;
  for (int w = 0; w <= max_weight; ++w)
    for (const Partition& p : enumerate_partitions(w, n)) lams.push_back(p);

  std::vector<AntisymCoeffs> coeffs;
  coeffs.reserve(lams.size());
  for (const auto& lam : lams) coeffs.push_back(alternant_coeffs(lam, n));

  long checked = 0, bad = 0;
  for (std::size_t a = 0; a < lams.size(); ++a)
    for (std::size_t b = 0; b < lams.size(); ++b) {
      Cx ip = antisym_inner(coeffs[a], coeffs[b]);
      double want = (lams[a] == lams[b]) ? 24.0 : 0.0;
      if (ip.real() != want || ip.imag() != 0.0) ++bad;
      ++checked;
    }
  o.pass = bad == 0;
  o.detail = fmt("%ld partitions, %ld pairs, inner products equal 4!*delta "
                 "exactly, %ld mismatches", long(lams.size()), checked, bad);
  return o;
}

// ---- 3: flattened hard function is diagonal --------------------------------

CriterionOutcome c3_diagonality() {
  CriterionOutcome o;
  const int n = 4, max_exp = 17;
  HardFnParams p = make_params(n, 0.5, CMode::exact_restricted);
  const int a_cap = (max_exp - (n - 1)) / 2;
  p.max_weight = std::max(p.max_weight, 4 * (n / 2) * a_cap);
  FlatMatrix m = flatten_G(p, max_exp);

  long nonzero = 0, off_pairing = 0;
  for (const auto& [rc, v] : m.entries) {
    if (v == Cx(0.0)) continue;
    ++nonzero;
    const auto& beta = m.index.rows[rc.first];
    const auto& gamma = m.index.cols[rc.second];
    for (std::size_t t = 0; t < beta.size(); ++t)
      if (beta[t] != gamma[t] + 1) {
        ++off_pairing;
        break;
      }
  }
  // every nonzero entry sits at (gamma + 1, gamma); multiplicity per fully
  // covered weight matches the restricted partition count
  std::map<long, long> counts = diagonal_multiplicities(m);
  bool mult_ok = true;
  for (long k = 0; k <= (max_exp - (n - 1)) / 2; ++k)
    mult_ok = mult_ok && (counts[k] == partition_count(k, n / 2).get_si());
  o.pass = off_pairing == 0 && nonzero > 0 && mult_ok;
  o.detail = fmt("max_exp=17: %ld nonzero entries, %ld off-pairing, weight "
                 "multiplicities %s", nonzero, off_pairing,
                 mult_ok ? "match p(k, <=2)" : "MISMATCH");
  return o;
}

// ---- 4: orbital-product flattening is rank one ------------------------------

CriterionOutcome c4_rank_one() {
  CriterionOutcome o;
  Rng rng(20240);
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Orbital> orbs(4);
    for (auto& f : orbs)
      for (int d = 0; d <= 8; ++d) f.c[d] = Cx(rng.normal(), rng.normal());
    FlatMatrix m = flatten_slater(orbs, 9);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.dense());
    const auto& sv = svd.singularValues();
    if (sv.size() >= 2 && sv[0] > 0.0)
      worst_ratio = std::max(worst_ratio, sv[1] / sv[0]);
  }
  o.pass = worst_ratio < 1e-10;
  o.detail = fmt("20 random degree-8 orbital products at n=4: max "
                 "sigma2/sigma1 = %.3e (tol 1e-10)", worst_ratio);
  return o;
}

// ---- 5: published separation chain ------------------------------------------

CriterionOutcome c5_separation_chain() {
  CriterionOutcome o;
  SeparationReport rep =
      separation_lower_bound(6, choose_r(6), 36.0, SeparationMode::paper_chain);
  MarotiReport m6 = verify_maroti_chain(6);
  MarotiReport m2 = verify_maroti_chain(2);
  o.pass = rep.rank_fits && rep.value >= 0.3 && m6.pass && !m2.pass;
  o.detail = fmt("n=6, L=e^36, r=choose_r(6): bound %.6f (>= 0.3), growth "
                 "chain pass@6=%d fail@2=%d", rep.value, int(m6.pass),
                 int(!m2.pass));
  return o;
}

// ---- 6: desk-scale exact separation -----------------------------------------

CriterionOutcome c6_exact_truncated() {
  CriterionOutcome o;
  const int n = 4;
  const double r = 0.9, q = std::pow(r, 8.0);

  // closed-form diagonal tail: per-entry squares q^k with multiplicity
  // p(k, <=2), best rank-R approximation keeps the R largest
  std::vector<double> squares;
  double series = 0.0;
  for (long k = 0; k <= 400; ++k) {
    long mult = partition_count(k, 2).get_si();
    double term = std::pow(q, double(k));
    series += mult * term;
    for (long c = 0; c < mult && long(squares.size()) < 128; ++c)
      squares.push_back(term);
  }

  double worst_rel = 0.0;
  double prev = 2.0;
  bool monotone = true;
  for (long budget : {1L, 2L, 4L, 8L, 16L, 32L}) {
    SeparationReport rep = separation_lower_bound(
        n, r, 0.0, SeparationMode::exact_truncated, budget);
    double kept = 0.0;
    for (long j = 0; j < budget; ++j) kept += squares[j];
    double oracle = (series - kept) / series;
    worst_rel = std::max(worst_rel,
                         std::abs(rep.value - oracle) / std::abs(oracle));
    monotone = monotone && rep.value <= prev + 1e-15;
    prev = rep.value;
  }
  o.pass = worst_rel < 1e-8 && monotone;
  o.detail = fmt("n=4, r=0.9, budgets 1..32: max rel gap to closed form "
                 "%.3e (tol 1e-8), monotone=%d", worst_rel, int(monotone));
  return o;
}

// ---- 7: monomial net sup bounds ---------------------------------------------

CriterionOutcome c7_monomial_bounds() {
  CriterionOutcome o;
  constexpr Activation kActs[] = {Activation::exp_act, Activation::sin_plus_cos,
                                  Activation::sinh_shift};
  const double kE = std::exp(1.0);
  // grid measurements bottom out at double-precision evaluation noise; the
  // exact-math route (certified tail vs display bound, in logs) carries the
  // comparison once the bound drops below that floor
  const double fp_floor = 1e-11;
  bool ok = true;
  double pinned = -1.0;
  for (int k = 1; k <= 8; ++k)
    for (long J : {32L, 64L, 128L})
      for (Activation act : kActs) {
        const bool weak = 2.0 * kE * k >= double(J);
        RootsOfUnityNet net = build_monomial_net(k, J, act, weak);
        if (!weak)
          ok = ok && net.log_tail_bound(2.0) <= net.log_lemma_bound() + 1e-9;
        double measured = monomial_sup_error(net, 2.0, 1024);
        ok = ok && measured <= std::max(net.lemma_bound(), fp_floor);
        if (k == 2 && J == 32 && act == Activation::exp_act) {
          pinned = measured;
          ok = ok && measured < 1e-13;
        }
      }
  o.pass = ok;
  o.detail = fmt("k=1..8, J in {32,64,128}, 3 activations: certified tails "
                 "under 2(2ek/J)^J, grid sup under max(bound, 1e-11); "
                 "k=2,J=32 exp measured %.3e (< 1e-13)", pinned);
  return o;
}

// ---- 8: assembled approximant accuracy --------------------------------------

CriterionOutcome c8_ghat_error() {
  CriterionOutcome o;
  HardFnParams hp = make_params(4, 0.9, CMode::exact_restricted);
  HardFn g(hp);
  GhatParams gp = ghat_params_from(hp, 40, 512);
  Ghat ghat(gp);
  ApproxErrorReport rep = ghat_error(ghat, g, 1000);
  o.pass = rep.measured_sup < rep.bound_sup && rep.measured_sup < 1e-3;
  o.detail = fmt("n=4, r=0.9, K=40, J=512, 1000 samples: sup|G-Ghat| "
                 "%.3e < bound %.3e and < 1e-3", rep.measured_sup,
                 rep.bound_sup);
  return o;
}

// ---- 9: sufficient budget formula -------------------------------------------

CriterionOutcome c9_budget_formula() {
  CriterionOutcome o;
  bool ok = true;
  int checked = 0;
  for (int n : {6, 8, 10, 12}) {
    long prev_k = -1, prev_j = -1;
    for (double eps : {1.0, 1e-1, 1e-2, 1e-4, 1e-8}) {
      KBudget b = k_budget(n, eps);
      const double n4 = std::pow(double(n), 4.0), n7 = std::pow(double(n), 7.0);
      long k_form = long(std::ceil((n4 * std::log(1.0 / eps) + n7) / 4.0));
      long j_form = long(std::ceil(12.0 * std::exp(1.0) * double(k_form)));
      ok = ok && b.K == k_form && b.J == j_form;
      ok = ok && b.K >= prev_k && b.J >= prev_j;  // monotone in 1/eps
      prev_k = b.K;
      prev_j = b.J;
      ++checked;
    }
  }
  o.pass = ok && checked == 20;
  o.detail = fmt("%d (n, eps) pairs: K = ceil((n^4 ln(1/eps) + n^7)/4), "
                 "J = ceil(12eK), monotone in 1/eps: %s", checked,
                 ok ? "all match" : "MISMATCH");
  return o;
}

// ---- 10: desk-scale training separation -------------------------------------

CriterionOutcome c10_training() {
  CriterionOutcome o;
  TrainConfig base;  // desk defaults: 20000 iterations, 2000 samples, lr 5e-4
  base.n = 4;
  base.target = make_params(4, kExperimentR);
  int wins = 0;
  std::string per_seed;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    base.seed = seed;
    base.kind = ModelKind::jastrow;
    base.det_count = 1;
    RunRecord jas = train_run(base);
    double best_slater = 1e300;
    base.kind = ModelKind::slater;
    for (int dets : {1, 4, 16}) {
      base.det_count = dets;
      RunRecord run = train_run(base);
      best_slater = std::min(best_slater, run.final_normalized_mse());
    }
    bool win = !jas.diverged && jas.final_normalized_mse() < best_slater;
    wins += win ? 1 : 0;
    per_seed += fmt("%sseed %llu: jastrow %.4f vs best slater %.4f",
                    per_seed.empty() ? "" : "; ",
                    (unsigned long long)seed, jas.final_normalized_mse(),
                    best_slater);
  }
  o.pass = wins >= 2;
  o.detail = fmt("%s -> %d/3 seeds", per_seed.c_str(), wins);
  return o;
}

// ---- 11: property sweep ------------------------------------------------------

CriterionOutcome c11_properties() {
  CriterionOutcome o;
  std::vector<std::string> fails;
  Rng rng(4711);

  auto swapped = [](CircleConfig x) {
    std::swap(x[0], x[1]);
    return x;
  };

  // antisymmetry of the target function
  {
    HardFnParams hp = make_params(4, 0.6);
    HardFn g(hp);
    for (int t = 0; t < 10; ++t) {
      CircleConfig x(4);
      for (auto& z : x) z = rng.unit_circle();
      Cx a = g.eval(x), b = g.eval(swapped(x));
      if (std::abs(a + b) > 1e-9 * std::max(1.0, std::abs(a)))
        fails.push_back("hard function antisymmetry");
    }
  }
  // antisymmetry of the assembled approximant
  {
    HardFnParams hp = make_params(2, 0.5);
    Ghat ghat(ghat_params_from(hp, 4, 64));
    for (int t = 0; t < 10; ++t) {
      CircleConfig x(2);
      for (auto& z : x) z = rng.unit_circle();
      Cx a = ghat.eval(x), b = ghat.eval(swapped(x));
      if (std::abs(a + b) > 1e-9 * std::max(1.0, std::abs(a)))
        fails.push_back("approximant antisymmetry");
    }
  }
  // antisymmetry of both model classes (exact swap of inputs)
  {
    SlaterModel<double> sm(4, 2, 8, 99);
    JastrowModel<double> jm(4, 8, 99);
    for (int t = 0; t < 10; ++t) {
      CircleConfig x(4);
      for (auto& z : x) z = rng.unit_circle();
      Cx sa = sm.forward_one(x), sb = sm.forward_one(swapped(x));
      Cx ja = jm.forward_one(x), jb = jm.forward_one(swapped(x));
      if (std::abs(sa + sb) > 1e-10 * std::max(1.0, std::abs(sa)))
        fails.push_back("slater model antisymmetry");
      if (std::abs(ja + jb) > 1e-10 * std::max(1.0, std::abs(ja)))
        fails.push_back("jastrow model antisymmetry");
    }
  }
  // analytic gradient vs central differences
  {
    HardFnParams hp = make_params(2, 0.5);
    Dataset ds = sample_dataset(2, 8, hp, 321);
    SlaterModel<double> sm(2, 1, 4, 7);
    JastrowModel<double> jm(2, 4, 7);
    auto fd_check = [&](auto& model) {
      model.set_data(ds);
      model.loss_and_grad();
      auto ps = model.parameters();
      auto gs = model.gradients();
      double worst = 0.0;
      for (std::size_t i = 0; i < ps.size(); i += 7) {
        double* re = reinterpret_cast<double*>(ps[i]);
        for (int part = 0; part < 2; ++part) {
          const double h = 1e-6, keep = re[part];
          re[part] = keep + h;
          double lp = model.loss_only();
          re[part] = keep - h;
          double lm = model.loss_only();
          re[part] = keep;
          double fd = (lp - lm) / (2.0 * h);
          double an = part == 0 ? gs[i]->real() : gs[i]->imag();
          double den = std::max({std::abs(fd), std::abs(an), 1e-8});
          worst = std::max(worst, std::abs(fd - an) / den);
        }
      }
      return worst;
    };
    if (fd_check(sm) > 1e-5) fails.push_back("slater gradient fd");
    if (fd_check(jm) > 1e-5) fails.push_back("jastrow gradient fd");
  }
  // quadrature coefficients vs symbolic alternant coefficients
  {
    AntisymCoeffs ac = alternant_coeffs(Partition({2, 1}), 2);
    auto h = [&](const CircleConfig& x) { return ac.eval(x); };
    for (const auto& [key, want] : ac.terms) {
      Cx got = fourier_coeff(h, key, 8);
      if (std::abs(got - want) > 1e-10) fails.push_back("quadrature coeff");
    }
    // off-support coefficient vanishes
    if (std::abs(fourier_coeff(h, {5, 2}, 8)) > 1e-10)
      fails.push_back("quadrature off-support");
  }
  // conjugation involution and doubly even pairing
  {
    for (int k = 0; k <= 12; ++k)
      for (const Partition& lam : enumerate_partitions(k)) {
        if (conjugate(conjugate(lam)) != lam)
          fails.push_back("conjugation involution");
        if (is_doubly_even(lam) && !is_doubly_even(conjugate(lam)))
          fails.push_back("doubly even conjugate");
      }
    for (int k = 0; k <= 6; ++k)
      for (const Partition& mu : enumerate_partitions(k))
        if (!is_doubly_even(doubly_even_expand(mu)))
          fails.push_back("doubly even expansion");
  }
  // partition-count oracles: enumeration vs counting, restricted and not
  {
    for (int k = 0; k <= 24; ++k) {
      if (partition_count(k).get_si() != long(enumerate_partitions(k).size()))
        fails.push_back("p(k) vs enumeration");
      if (partition_count(k, 2).get_si() !=
          long(enumerate_partitions(k, 2).size()))
        fails.push_back("p(k, <=2) vs enumeration");
    }
  }

  std::sort(fails.begin(), fails.end());
  fails.erase(std::unique(fails.begin(), fails.end()), fails.end());
  o.pass = fails.empty();
  if (o.pass) {
    o.detail = "antisymmetry (models, target, approximant), gradient-vs-fd, "
               "quadrature-vs-symbolic, involution and count oracles: all ok";
  } else {
    o.detail = "failed:";
    for (const auto& f : fails) o.detail += " " + f + ";";
  }
  return o;
}

const std::string kNames[] = {
    "pfaffian_identity",       "alternant_orthogonality",
    "flatten_diagonality",     "slater_rank_one",
    "separation_chain",        "separation_exact_truncated",
    "monomial_net_bounds",     "ghat_error",
    "k_budget_formula",        "training_separation",
    "property_sweep",
};

}  // namespace

int criterion_count() { return 11; }

const std::string& criterion_name(int index) {
  static const std::string bad = "unknown";
  if (index < 1 || index > 11) return bad;
  return kNames[index - 1];
}

CriterionOutcome run_criterion(int index) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionOutcome o;
  switch (index) {
    case 1: o = c1_pfaffian(); break;
    case 2: o = c2_orthogonality(); break;
    case 3: o = c3_diagonality(); break;
    case 4: o = c4_rank_one(); break;
    case 5: o = c5_separation_chain(); break;
    case 6: o = c6_exact_truncated(); break;
    case 7: o = c7_monomial_bounds(); break;
    case 8: o = c8_ghat_error(); break;
    case 9: o = c9_budget_formula(); break;
    case 10: o = c10_training(); break;
    case 11: o = c11_properties(); break;
    default: throw std::invalid_argument("run_criterion: index out of range");
  }
  o.index = index;
  o.name = criterion_name(index);
  o.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return o;
}

std::string format_outcome(const CriterionOutcome& o) {
  return fmt("[%s] %2d %s: %s [%.1fs]", o.pass ? "PASS" : "FAIL", o.index,
             o.name.c_str(), o.detail.c_str(), o.seconds);
}

}  // namespace ansep
