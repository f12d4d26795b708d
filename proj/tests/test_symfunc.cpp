#include "ansep/symfunc.hpp"

#include <algorithm>

#include "doctest.h"

using namespace ansep;

namespace {

// permutation-sign oracle: count inversions pairwise
int sign_oracle(const std::vector<int>& before, const std::vector<int>& after) {
  // sign of any permutation taking before -> after (entries distinct)
  std::vector<int> perm;
  for (int v : before) {
    auto it = std::find(after.begin(), after.end(), v);
    perm.push_back(int(it - after.begin()));
  }
  int inv = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

double rel(Cx a, Cx b) {
  double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// quadrature inner product of two antisymmetric polynomials given as
// pointwise evaluators; independent route to antisym_inner
Cx quad_inner(const std::function<Cx(const CircleConfig&)>& f,
              const std::function<Cx(const CircleConfig&)>& g, int n,
              int degree_bound) {
  std::size_t nodes = 1;
  while (nodes < std::size_t(degree_bound) + 1) nodes *= 2;
  std::vector<Cx> roots(nodes);
  for (std::size_t t = 0; t < nodes; ++t)
    roots[t] = std::polar(1.0, 2.0 * M_PI * double(t) / double(nodes));
  std::vector<std::size_t> idx(n, 0);
  CircleConfig x(n, roots[0]);
  Cx acc = 0;
  while (true) {
    acc += f(x) * std::conj(g(x));
    int j = 0;
    for (; j < n; ++j) {
      if (++idx[j] < nodes) {
        x[j] = roots[idx[j]];
        break;
      }
      idx[j] = 0;
      x[j] = roots[0];
    }
    if (j == n) break;
  }
  return acc / std::pow(double(nodes), n);
}

Partition P(std::initializer_list<int> v) { return Partition(std::vector<int>(v)); }

}  // namespace

TEST_SUITE_BEGIN("symfunc");

TEST_CASE("canonicalize: sign, order, repeats") {
  std::vector<int> a{1, 3};
  auto c = canonicalize(a);
  CHECK(a == std::vector<int>{3, 1});
  CHECK(c.sign == -1);
  CHECK_FALSE(c.repeated);

  std::vector<int> b{2, 2};
  c = canonicalize(b);
  CHECK(c.repeated);

  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> v;
    int n = 2 + int(rng.uniform01() * 5);
    for (int i = 0; i < n; ++i) v.push_back(int(rng.uniform01() * 40));
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end(), std::greater<int>());
    bool rep = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
    auto w = v;
    auto cc = canonicalize(w);
    CHECK(w == sorted);
    CHECK(cc.repeated == rep);
    if (!rep) CHECK(cc.sign == sign_oracle(v, w));
  }
}

TEST_CASE("orbital polynomial arithmetic and evaluation") {
  // p(z) = 1 + 2 z^3
  Orbital p = Orbital::one();
  p += Orbital::monomial(3, 2.0);
  CHECK(p.degree() == 3);
  CHECK(p.term_count() == 2);
  Cx z(0.3, 0.4);
  CHECK(rel(p.eval(z), 1.0 + 2.0 * z * z * z) < 1e-15);

  auto q = p.scaled_arg(0.5);
  CHECK(rel(q.eval(z), 1.0 + 2.0 * std::pow(0.5 * z, 3)) < 1e-15);

  auto prod = p * p;
  CHECK(prod.degree() == 6);
  CHECK(rel(prod.eval(z), p.eval(z) * p.eval(z)) < 1e-14);

  // cancellation prunes terms
  Orbital m = Orbital::monomial(2, 1.0);
  m += Orbital::monomial(2, -1.0);
  CHECK(m.term_count() == 0);
  CHECK(m.eval(z) == Cx(0));
}

TEST_CASE("vandermonde equals its defining product and the alternant sign rule") {
  Rng rng(7);
  for (int n : {2, 3, 4, 5}) {
    auto x = rng.circle_config(n);
    Cx direct = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) direct *= (x[j] - x[i]);
    CHECK(rel(vandermonde(x), direct) < 1e-13);

    // det[x_i^{n-j}] = (-1)^{n(n-1)/2} vandermonde
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = std::pow(x[i], n - 1 - j);
    double sgn = (n * (n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    CHECK(rel(det_complex(m), sgn * vandermonde(x)) < 1e-12);
  }
}

TEST_CASE("slater_value: closed form at n=2 and antisymmetry") {
  Rng rng(11);
  auto x = rng.circle_config(2);
  std::vector<Orbital> f{Orbital::monomial(1, 1.0), Orbital::one()};
  CHECK(rel(slater_value(f, x), (x[0] - x[1]) / 2.0) < 1e-14);

  // swapping coordinates negates
  for (int n : {2, 3, 4}) {
    std::vector<Orbital> orbs;
    for (int i = 0; i < n; ++i) {
      Orbital o = Orbital::monomial(i, 1.0);
      o += Orbital::monomial(i + 2, Cx(0.3, -0.1));
      orbs.push_back(o);
    }
    auto y = rng.circle_config(n);
    Cx v = slater_value(orbs, y);
    std::swap(y[0], y[n - 1]);
    CHECK(rel(slater_value(orbs, y), -v) < 1e-11);
  }
}

TEST_CASE("alternant_coeffs builds lam + delta keys") {
  auto a = alternant_coeffs(P({2, 2}), 2);
  REQUIRE(a.terms.size() == 1);
  CHECK(a.terms.begin()->first == std::vector<int>{3, 2});
  CHECK(a.terms.begin()->second == Cx(1.0));

  auto b = alternant_coeffs(Partition{}, 3);
  CHECK(b.terms.begin()->first == std::vector<int>{2, 1, 0});

  CHECK_THROWS_AS(alternant_coeffs(P({1, 1, 1}), 2), std::invalid_argument);
}

TEST_CASE("AntisymCoeffs folds permuted keys with signs, drops repeats") {
  AntisymCoeffs a(2);
  a.add_term({1, 3}, Cx(2.0));
  REQUIRE(a.terms.size() == 1);
  CHECK(a.terms.begin()->first == std::vector<int>{3, 1});
  CHECK(a.terms.begin()->second == Cx(-2.0));
  CHECK(a.coeff({1, 3}) == Cx(2.0));
  CHECK(a.coeff({3, 1}) == Cx(-2.0));

  a.add_term({3, 1}, Cx(2.0));  // exact cancellation erases the entry
  CHECK(a.terms.empty());
  CHECK(a.coeff({3, 1}) == Cx(0.0));

  a.add_term({2, 2}, Cx(5.0));  // repeated exponents vanish
  CHECK(a.terms.empty());
  CHECK(a.coeff({2, 2}) == Cx(0.0));

  // eval matches the explicit determinant expansion
  AntisymCoeffs e(3);
  e.add_term({4, 2, 0}, Cx(1.0, 0.5));
  Rng rng(19);
  auto x = rng.circle_config(3);
  Eigen::MatrixXcd m(3, 3);
  std::vector<int> key{4, 2, 0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = std::pow(x[i], key[j]);
  CHECK(rel(e.eval(x), Cx(1.0, 0.5) * det_complex(m)) < 1e-13);
}

TEST_CASE("antisym_inner: alternants are sqrt(n!)-orthogonal") {
  for (int n : {2, 3, 4}) {
    std::vector<Partition> lams;
    for (int k = 0; k <= 5; ++k)
      for (const auto& lam : enumerate_partitions(k))
        if (lam.length() <= n) lams.push_back(lam);
    for (const auto& la : lams)
      for (const auto& lb : lams) {
        Cx v = antisym_inner(alternant_coeffs(la, n), alternant_coeffs(lb, n));
        Cx expect = la == lb ? factorial_d(n) : 0.0;
        CHECK(v == expect);  // integer arithmetic, exact
      }
  }
  CHECK(antisym_inner(alternant_coeffs(Partition{}, 2),
                      alternant_coeffs(Partition{}, 2)) == Cx(2.0));
}

TEST_CASE("antisym_inner agrees with torus quadrature") {
  // dual route: coefficient formula vs direct grid integration
  for (int n : {2, 3}) {
    std::vector<Partition> lams{Partition{}, P({1}), P({2, 1}), P({2, 2})};
    for (const auto& la : lams) {
      if (la.length() > n) continue;
      for (const auto& lb : lams) {
        if (lb.length() > n) continue;
        auto A = alternant_coeffs(la, n);
        auto B = alternant_coeffs(lb, n);
        int deg = 2 + n + std::max(la.weight(), lb.weight());
        Cx grid = quad_inner([&](const CircleConfig& x) { return A.eval(x); },
                             [&](const CircleConfig& x) { return B.eval(x); }, n,
                             deg);
        CHECK(std::abs(grid - antisym_inner(A, B)) < 1e-10);
      }
    }
  }
}

TEST_CASE("schur_value: literals, symmetry, homogeneity") {
  Rng rng(23);
  auto x = rng.circle_config(2);
  CHECK(rel(schur_value(Partition{}, x), 1.0) < 1e-14);
  CHECK(rel(schur_value(P({1}), x), x[0] + x[1]) < 1e-12);
  // s_(2) = x1^2 + x1 x2 + x2^2, s_(1,1) = x1 x2
  CHECK(rel(schur_value(P({2}), x), x[0] * x[0] + x[0] * x[1] + x[1] * x[1]) < 1e-11);
  CHECK(rel(schur_value(P({1, 1}), x), x[0] * x[1]) < 1e-11);
  CHECK(schur_value(P({1, 1, 1}), x) == Cx(0.0));  // too long

  auto y = rng.circle_config(4);
  for (const auto& lam : {P({2, 1}), P({3, 3, 1}), P({4})}) {
    Cx v = schur_value(lam, y);
    auto perm = y;
    std::swap(perm[0], perm[2]);
    std::swap(perm[1], perm[3]);
    CHECK(rel(schur_value(lam, perm), v) < 1e-10);
    // homogeneity under scaling; off-circle inputs are legal polynomials
    CircleConfig scaled = y;
    for (auto& z : scaled) z *= 0.7;
    CHECK(rel(schur_value(lam, scaled), std::pow(0.7, lam.weight()) * v) < 1e-10);
  }
}

TEST_CASE("schur_value: coincident coordinates use the stable branch") {
  Cx a(0.6, 0.8);
  CircleConfig x{a, a};
  CHECK(rel(schur_value(P({1}), x), 2.0 * a) < 1e-13);
  CHECK(rel(schur_value(P({1, 1}), x), a * a) < 1e-13);

  // near-coincident: fallback must agree with the ratio at a safe distance
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    auto y = rng.circle_config(3);
    for (const auto& lam : {P({2}), P({2, 1}), P({3, 2, 1})}) {
      Cx ratio = schur_value(lam, y);
      // force the Jacobi-Trudi branch by a tiny synthetic perturbation flag:
      // evaluate at the same points through the fallback path via duplicates
      CircleConfig dup{y[0], y[0], y[1]};
      Cx jt = schur_value(lam, dup);
      // consistency against ratio at a small but safe separation
      CircleConfig sep{y[0], y[0] * std::polar(1.0, 1e-5), y[1]};
      CHECK(rel(schur_value(lam, sep), jt) < 1e-4);
      (void)ratio;
    }
  }
}

TEST_CASE("pfaffian: closed forms at dim 2 and 4") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 1) = Cx(2.0, 1.0);
  a(1, 0) = -a(0, 1);
  CHECK(pfaffian(a) == Cx(2.0, 1.0));

  Rng rng(31);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      b(i, j) = Cx(rng.normal(), rng.normal());
      b(j, i) = -b(i, j);
    }
  Cx expect = b(0, 1) * b(2, 3) - b(0, 2) * b(1, 3) + b(0, 3) * b(1, 2);
  CHECK(rel(pfaffian(b), expect) < 1e-14);
}

TEST_CASE("pfaffian: Pf^2 = det and both algorithms agree") {
  Rng rng(37);
  for (int dim : {2, 4, 6, 8, 10, 12}) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        a(i, j) = Cx(rng.normal(), rng.normal());
        a(j, i) = -a(i, j);
      }
    Cx pf = pfaffian(a);
    CHECK(rel(pf * pf, det_complex(a)) < 1e-10);
    CHECK(rel(detail::pfaffian_matching(a), detail::pfaffian_parlett_reid(a)) < 1e-10);
  }
  // empty matrix
  CHECK(pfaffian(Eigen::MatrixXcd::Zero(0, 0)) == Cx(1.0));
}

TEST_CASE("pfaffian: block-diagonal decoupling (zero sub-column mid-reduction)") {
  // two independent 2x2 blocks inside a 10x10, forces the skip branch
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(10, 10);
  Rng rng(41);
  std::vector<Cx> bs;
  for (int blk = 0; blk < 5; ++blk) {
    Cx v(rng.normal(), rng.normal());
    bs.push_back(v);
    a(2 * blk, 2 * blk + 1) = v;
    a(2 * blk + 1, 2 * blk) = -v;
  }
  Cx expect = bs[0] * bs[1] * bs[2] * bs[3] * bs[4];
  CHECK(rel(pfaffian(a), expect) < 1e-12);
  CHECK(rel(detail::pfaffian_parlett_reid(a), expect) < 1e-12);
}

TEST_CASE("pfaffian: input validation") {
  CHECK_THROWS_AS(pfaffian(Eigen::MatrixXcd::Zero(3, 3)), std::invalid_argument);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 1) = 1.0;
  bad(1, 0) = 1.0;  // symmetric, not skew
  CHECK_THROWS_AS(pfaffian(bad), std::invalid_argument);
}

TEST_CASE("pfaffian_kernel: formula, skewness, pole guard") {
  Rng rng(43);
  auto x = rng.circle_config(4);
  double r = 0.6, r4 = std::pow(r, 4);
  auto m = pfaffian_kernel(x, r);
  CHECK((m + m.transpose()).cwiseAbs().maxCoeff() == 0.0);  // exact by construction
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Cx expect = i == j ? Cx(0)
                         : r * (x[i] - x[j]) / (1.0 - r4 * x[i] * x[i] * x[j] * x[j]);
      CHECK(rel(m(i, j), expect) < 1e-14);
    }
  // r=1 with x2 = x1 sits exactly on a pole
  CircleConfig p{Cx(1, 0), Cx(-1, 0)};
  CHECK_THROWS_AS(pfaffian_kernel(p, 1.0), std::domain_error);
}

TEST_CASE("fourier_coeff: exact on monomials") {
  // H(x) = x1^2 x2^5 against alpha in a window
  auto h = [](const CircleConfig& x) {
    return std::pow(x[0], 2) * std::pow(x[1], 5);
  };
  CHECK(std::abs(fourier_coeff(h, {2, 5}, 6) - 1.0) < 1e-12);
  CHECK(std::abs(fourier_coeff(h, {5, 2}, 6)) < 1e-12);
  CHECK(std::abs(fourier_coeff(h, {2, 4}, 6)) < 1e-12);
  CHECK(std::abs(fourier_coeff(h, {0, 0}, 6)) < 1e-12);

  // mixture with complex coefficients
  Cx c1(0.3, -1.2), c2(-0.8, 0.05);
  auto g = [&](const CircleConfig& x) {
    return c1 * x[0] * std::pow(x[1], 3) + c2 * std::pow(x[0], 3);
  };
  CHECK(std::abs(fourier_coeff(g, {1, 3}, 4) - c1) < 1e-12);
  CHECK(std::abs(fourier_coeff(g, {3, 0}, 4) - c2) < 1e-12);
  CHECK(std::abs(fourier_coeff(g, {3, 3}, 4)) < 1e-12);
}

TEST_CASE("fourier_coeff: guards") {
  auto h = [](const CircleConfig&) { return Cx(1.0); };
  CHECK_THROWS_AS(fourier_coeff(h, {3, 1}, 2), std::invalid_argument);  // alpha > bound
  CHECK_THROWS_AS(fourier_coeff(h, {1, 1, 1, 1, 1, 1, 1, 1}, 255, 1 << 20),
                  budget_error);
}

TEST_SUITE_END();
