#include "ansep/train.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ansep/hardfn.hpp"
#include "ansep/partitions.hpp"
#include "ansep/symfunc.hpp"
#include "doctest.h"

using namespace ansep;

namespace {

// Central-difference gradient oracle over every real parameter component.
template <typename M>
double fd_worst_rel(M& model, double step) {
  model.loss_and_grad();
  auto params = model.parameters();
  auto grads = model.gradients();
  std::vector<std::complex<double>> g(grads.size());
  for (std::size_t i = 0; i < grads.size(); ++i) g[i] = *grads[i];
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (int comp = 0; comp < 2; ++comp) {
      double* slot = reinterpret_cast<double*>(params[i]) + comp;
      const double orig = *slot;
      *slot = orig + step;
      const double lp = model.loss_only();
      *slot = orig - step;
      const double lm = model.loss_only();
      *slot = orig;
      const double num = (lp - lm) / (2 * step);
      const double ana = comp == 0 ? g[i].real() : g[i].imag();
      const double den = std::max(std::abs(num), std::abs(ana));
      if (den > 1e-10) worst = std::max(worst, std::abs(num - ana) / den);
    }
  }
  return worst;
}

CircleConfig swap01(CircleConfig x) {
  std::swap(x[0], x[1]);
  return x;
}

// n x n complex determinant through Eigen, the reference route.
Cx eigen_det(const std::vector<Cx>& m, int n) {
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = m[std::size_t(i) * n + j];
  return det_complex(a);
}

}  // namespace

TEST_SUITE_BEGIN("train");

TEST_CASE("dataset targets flip sign under coordinate swap") {
  auto params = make_params(4, 0.7);
  Dataset ds = sample_dataset(4, 12, params, 91);
  HardFn g(params);
  for (std::size_t s = 0; s < ds.x.size(); ++s) {
    const Cx direct = g.eval(ds.x[s]) / params.C;
    CHECK(std::abs(direct - ds.target[s]) <= 1e-12 * std::abs(direct));
    const Cx swapped = g.eval(swap01(ds.x[s])) / params.C;
    CHECK(std::abs(swapped + ds.target[s]) <= 1e-10 * std::abs(direct));
  }
}

TEST_CASE("dataset is bit-identical under a fixed seed") {
  auto params = make_params(2, 0.5);
  Dataset a = sample_dataset(2, 40, params, 1234);
  Dataset b = sample_dataset(2, 40, params, 1234);
  REQUIRE(a.x.size() == b.x.size());
  for (std::size_t s = 0; s < a.x.size(); ++s) {
    for (int i = 0; i < 2; ++i) {
      CHECK(a.x[s][i] == b.x[s][i]);
    }
    CHECK(a.target[s] == b.target[s]);
  }
  Dataset c = sample_dataset(2, 40, params, 1235);
  CHECK(c.x[0][0] != a.x[0][0]);
}

TEST_CASE("dataset mean |target|^2 matches the restricted-sum norm") {
  // E |G/C|^2 = r^{n(n-1)} sum_k r^{8k} p(k, <= n/2), assembled here from
  // the partition counts directly.
  const int n = 4;
  const double r = 0.9;
  auto params = make_params(n, r);
  double expect = 0.0;
  for (int k = 0;; ++k) {
    const double term =
        std::pow(r, 8.0 * k) * partition_count(k, n / 2).get_d();
    expect += term;
    if (k > 4 && term < 1e-14 * expect) break;
  }
  expect *= std::pow(r, double(n * (n - 1)));
  CHECK(expect == doctest::Approx(1.0 / (params.C * params.C)).epsilon(1e-6));

  const int count = 4000;
  Dataset ds = sample_dataset(n, count, params, 2024);
  double mean = 0.0, mean_sq = 0.0;
  for (const Cx& t : ds.target) {
    const double v = std::norm(t);
    mean += v;
    mean_sq += v * v;
  }
  mean /= count;
  mean_sq /= count;
  const double se = std::sqrt((mean_sq - mean * mean) / count);
  CHECK(std::abs(mean - expect) <= 3.0 * se);
}

TEST_CASE("dataset argument checking") {
  auto params = make_params(2, 0.5);
  CHECK_THROWS_AS(sample_dataset(2, 0, params, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_dataset(4, 10, params, 1), std::invalid_argument);
}

TEST_CASE("det_and_adjugate against the Eigen determinant") {
  Rng rng(555);
  for (int n : {2, 3, 4, 5}) {
    for (int rep = 0; rep < 12; ++rep) {
      std::vector<Cx> m(std::size_t(n) * n);
      for (auto& v : m) v = Cx(rng.normal(), rng.normal());
      std::vector<Cx> adj(m.size());
      const Cx det = detail::det_and_adjugate<double>(m.data(), n, adj.data());
      const Cx ref = eigen_det(m, n);
      CHECK(std::abs(det - ref) <= 1e-10 * std::abs(ref));
      // m * adj = det * I
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          Cx acc = 0.0;
          for (int k = 0; k < n; ++k)
            acc += m[std::size_t(i) * n + k] * adj[std::size_t(k) * n + j];
          const Cx want = (i == j) ? det : Cx(0);
          CHECK(std::abs(acc - want) <= 1e-10 * std::abs(det));
        }
      }
    }
  }
}

TEST_CASE("unrolled 4x4 adjugate agrees with the cofactor recursion") {
  Rng rng(556);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Cx> m(16);
    for (auto& v : m) v = Cx(rng.normal(), rng.normal());
    std::vector<Cx> fast(16), slow(16);
    const Cx dfast = detail::det4_and_adjugate<double>(m.data(), fast.data());
    const std::uint32_t full = 0xF;
    const Cx dslow = detail::masked_det<double>(m.data(), 4, full, full);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        slow[std::size_t(j) * 4 + i] =
            sign * detail::masked_det<double>(m.data(), 4, full & ~(1u << i),
                                              full & ~(1u << j));
      }
    CHECK(std::abs(dfast - dslow) <= 1e-12 * std::abs(dslow));
    for (int k = 0; k < 16; ++k)
      CHECK(std::abs(fast[k] - slow[k]) <= 1e-12 * (1.0 + std::abs(slow[k])));
  }
}

TEST_CASE("network forward matches a hand evaluation") {
  // width 2, one complex input; values picked to land on both sides of the
  // ReLU kinks
  Rng rng(7);
  ComplexMLP<double> net;
  net.init(1, 2, false, rng);
  net.w1 = {{1.0, 0.5}, {-0.25, 2.0}};
  net.b1 = {{0.125, -0.75}, {0.5, 0.25}};
  net.w2 = {{2.0, -1.0}, {0.5, 0.5}};
  net.b2 = {-0.25, 0.125};
  auto crelu = [](Cx v) {
    return Cx(std::max(v.real(), 0.0), std::max(v.imag(), 0.0));
  };
  const std::vector<Cx> points = {Cx(0.6, -0.8), Cx(-1.0, 0.0),
                                  Cx(0.28, 0.96), Cx(-0.6, -0.8)};
  std::vector<CBatch<double>> feats(1);
  feats[0].resize(Eigen::Index(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    feats[0].set(Eigen::Index(i), points[i]);
  CBatch<double> out, a;
  net.forward(feats, out, a);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Cx want = net.b2 + net.w2[0] * crelu(net.w1[0] * points[i] + net.b1[0]) +
                    net.w2[1] * crelu(net.w1[1] * points[i] + net.b1[1]);
    CHECK(std::abs(Cx(out.at(Eigen::Index(i))) - want) <= 1e-14);
  }
}

TEST_CASE("gradients match central finite differences") {
  auto params = make_params(2, 0.5);
  Dataset ds = sample_dataset(2, 8, params, 42);
  SUBCASE("slater") {
    SlaterModel<double> m(2, 2, 4, 7);
    m.set_data(ds);
    CHECK(fd_worst_rel(m, 1e-6) < 1e-5);
  }
  SUBCASE("jastrow") {
    JastrowModel<double> m(2, 4, 7);
    m.set_data(ds);
    CHECK(fd_worst_rel(m, 1e-6) < 1e-5);
  }
}

TEST_CASE("zero model has loss equal to mean |target|^2 exactly") {
  auto params = make_params(4, 0.9);
  Dataset ds = sample_dataset(4, 64, params, 5);
  SUBCASE("slater") {
    SlaterModel<float> m(4, 2, 6, 3);
    for (auto* p : m.parameters()) *p = {};
    m.set_data(ds);
    CHECK(m.loss_only() == m.mean_target_sq());
  }
  SUBCASE("jastrow") {
    JastrowModel<float> m(4, 6, 3);
    for (auto* p : m.parameters()) *p = {};
    m.set_data(ds);
    CHECK(m.loss_only() == m.mean_target_sq());
  }
}

TEST_CASE("model outputs are antisymmetric") {
  Rng rng(31);
  SlaterModel<double> sm(4, 3, 8, 17);
  JastrowModel<double> jm(4, 8, 17);
  for (int rep = 0; rep < 10; ++rep) {
    const CircleConfig x = rng.circle_config(4);
    const CircleConfig y = swap01(x);
    const Cx fs = sm.forward_one(x);
    CHECK(std::abs(sm.forward_one(y) + fs) <= 1e-12 * std::abs(fs));
    const Cx fj = jm.forward_one(x);
    CHECK(std::abs(jm.forward_one(y) + fj) <= 1e-12 * std::abs(fj));
  }
}

TEST_CASE("jastrow prefactor is permutation-invariant") {
  Rng rng(32);
  JastrowModel<double> jm(4, 8, 23);
  const CircleConfig x = rng.circle_config(4);
  const Cx base = jm.prefactor_one(x);
  // all 24 permutations; the pooled pair values are identical, only the
  // product order can differ, so agreement holds to a few ulp
  std::vector<int> perm = {0, 1, 2, 3};
  do {
    CircleConfig y(4);
    for (int i = 0; i < 4; ++i) y[i] = x[perm[i]];
    CHECK(std::abs(jm.prefactor_one(y) - base) <= 1e-13 * std::abs(base));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("linear slater net encodes the closed-form orbitals") {
  // One determinant, features x^1..x^7, activation bypassed: each net is a
  // polynomial. Loading the hard function's orbital coefficients must
  // reproduce the alternant: slater_value = det / n!.
  const int n = 4;
  const double r = 0.5;
  const auto phi = orbitals(n, r, OrbitalFamily::phi);
  const int deg = 7, width = 8;
  SlaterModel<double> m(n, 1, width, 99, deg, true);
  auto ps = m.parameters();
  const std::size_t block = std::size_t(deg) * width + width + width + 1;
  REQUIRE(ps.size() == block * n);
  for (auto* p : ps) *p = {};
  for (int j = 0; j < n; ++j) {
    const std::size_t base = block * j;
    for (const auto& [d, coeff] : phi[j].c) {
      if (d == 0) {
        *ps[base + block - 1] = coeff;  // output bias carries x^0
        continue;
      }
      const int neuron = d - 1;
      *ps[base + std::size_t(d - 1) * width + neuron] = {1.0, 0.0};
      *ps[base + std::size_t(deg) * width + width + neuron] = coeff;
    }
  }
  Rng rng(77);
  for (int rep = 0; rep < 6; ++rep) {
    const CircleConfig x = rng.circle_config(n);
    const Cx want = slater_value(phi, x);
    const Cx got = m.forward_one(x);
    CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
  }
}

TEST_CASE("loss is invariant under permuting the dataset") {
  auto params = make_params(4, 0.6);
  Dataset ds = sample_dataset(4, 32, params, 11);
  Dataset rev;
  for (std::size_t s = ds.x.size(); s-- > 0;) {
    rev.x.push_back(ds.x[s]);
    rev.target.push_back(ds.target[s]);
  }
  SlaterModel<double> a(4, 2, 5, 13), b(4, 2, 5, 13);
  a.set_data(ds);
  b.set_data(rev);
  CHECK(a.loss_only() == doctest::Approx(b.loss_only()).epsilon(1e-12));
}

TEST_CASE("train_run determinism and trajectory shape") {
  TrainConfig cfg;
  cfg.n = 2;
  cfg.kind = ModelKind::slater;
  cfg.det_count = 1;
  cfg.width = 6;
  cfg.samples = 40;
  cfg.iterations = 25;
  cfg.seed = 9;
  cfg.target = make_params(2, 0.5);

  RunRecord a = train_run(cfg);
  REQUIRE(a.normalized_mse.size() == 26);
  CHECK(!a.diverged);
  CHECK(a.precision == "fp32");
  CHECK(a.mean_target_sq > 0.0);
  CHECK(a.wall_seconds >= 0.0);
  CHECK(a.antisym_violation < 1e-4);

  RunRecord b = train_run(cfg);
  CHECK(a.param_digest == b.param_digest);
  REQUIRE(a.normalized_mse.size() == b.normalized_mse.size());
  for (std::size_t i = 0; i < a.normalized_mse.size(); ++i)
    CHECK(a.normalized_mse[i] == b.normalized_mse[i]);

  cfg.seed = 10;
  RunRecord c = train_run(cfg);
  CHECK(c.param_digest != a.param_digest);
  CHECK(c.normalized_mse[0] != a.normalized_mse[0]);

  cfg.iterations = 0;
  RunRecord d = train_run(cfg);
  CHECK(d.normalized_mse.size() == 1);
}

TEST_CASE("jastrow run record mirrors the slater one") {
  TrainConfig cfg;
  cfg.n = 2;
  cfg.kind = ModelKind::jastrow;
  cfg.width = 6;
  cfg.samples = 40;
  cfg.iterations = 25;
  cfg.seed = 9;
  cfg.target = make_params(2, 0.5);
  RunRecord a = train_run(cfg);
  REQUIRE(a.normalized_mse.size() == 26);
  CHECK(!a.diverged);
  CHECK(a.antisym_violation < 1e-4);
  RunRecord b = train_run(cfg);
  CHECK(a.param_digest == b.param_digest);
}

TEST_CASE("divergence detector aborts with a partial record") {
  TrainConfig cfg;
  cfg.n = 2;
  cfg.kind = ModelKind::slater;
  cfg.det_count = 1;
  cfg.width = 6;
  cfg.samples = 40;
  cfg.iterations = 4000;
  cfg.learning_rate = 1e9;
  cfg.seed = 4;
  cfg.target = make_params(2, 0.5);
  RunRecord rec = train_run(cfg);
  CHECK(rec.diverged);
  CHECK(rec.normalized_mse.size() < 4001);
  CHECK(rec.normalized_mse.size() >= 1);
}

TEST_CASE("config validation") {
  TrainConfig cfg;
  cfg.n = 4;
  cfg.target = make_params(4, 0.9);
  CHECK_NOTHROW(cfg.validate());
  TrainConfig bad = cfg;
  bad.samples = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.iterations = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.width = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.det_count = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.n = 3;  // mismatches target.n
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("digest distinguishes parameter sets") {
  SlaterModel<float> a(2, 1, 4, 88), b(2, 1, 4, 88);
  auto pa = a.parameters(), pb = b.parameters();
  CHECK(param_digest<float>(pa) == param_digest<float>(pb));
  *pb[3] += std::complex<float>(1e-6f, 0.0f);
  CHECK(param_digest<float>(pa) != param_digest<float>(pb));
}

TEST_CASE("single determinant reaches low error at n = 2") {
  // capacity sanity: the n = 2 target is nearly a single alternant at
  // r = 0.5, so one determinant with width 30 must descend well below the
  // zero-model baseline; guards the harness against silent non-learning
  TrainConfig cfg;
  cfg.n = 2;
  cfg.kind = ModelKind::slater;
  cfg.det_count = 1;
  cfg.width = 30;
  cfg.samples = 256;
  cfg.iterations = 4000;
  cfg.seed = 1;
  cfg.target = make_params(2, 0.5);
  RunRecord rec = train_run(cfg);
  CHECK(!rec.diverged);
  CHECK(rec.final_normalized_mse() < 0.5);
}

TEST_SUITE_END();
