#include "ansep/symfunc.hpp"

#include <algorithm>
#include <numeric>

namespace ansep {

Canonical canonicalize(std::vector<int>& alpha) {
  Canonical res;
  // insertion sort into decreasing order, counting swaps
  for (std::size_t i = 1; i < alpha.size(); ++i) {
    int v = alpha[i];
    std::size_t j = i;
    while (j > 0 && alpha[j - 1] < v) {
      alpha[j] = alpha[j - 1];
      res.sign = -res.sign;
      --j;
    }
    alpha[j] = v;
  }
  for (std::size_t i = 1; i < alpha.size(); ++i)
    if (alpha[i] == alpha[i - 1]) res.repeated = true;
  return res;
}

Orbital Orbital::monomial(int d, Cx coeff) {
  Orbital o;
  if (coeff != Cx(0)) o.c[d] = coeff;
  return o;
}

Cx Orbital::eval(Cx z) const {
  // Horner over the sparse gaps
  Cx acc = 0;
  int prev = -1;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    if (prev >= 0)
      for (int k = it->first; k < prev; ++k) acc *= z;
    acc += it->second;
    prev = it->first;
  }
  if (prev > 0)
    for (int k = 0; k < prev; ++k) acc *= z;
  return acc;
}

int Orbital::degree() const { return c.empty() ? -1 : c.rbegin()->first; }

Orbital Orbital::scaled_arg(double r) const {
  Orbital o;
  for (const auto& [d, v] : c) o.c[d] = v * std::pow(r, d);
  return o;
}

Orbital& Orbital::operator+=(const Orbital& o) {
  for (const auto& [d, v] : o.c) {
    auto [it, inserted] = c.try_emplace(d, v);
    if (!inserted) {
      it->second += v;
      if (it->second == Cx(0)) c.erase(it);
    }
  }
  return *this;
}

Orbital operator*(const Orbital& a, const Orbital& b) {
  Orbital o;
  for (const auto& [da, va] : a.c)
    for (const auto& [db, vb] : b.c) o += Orbital::monomial(da + db, va * vb);
  return o;
}

Orbital operator*(Cx s, const Orbital& a) {
  Orbital o;
  if (s != Cx(0))
    for (const auto& [d, v] : a.c) o.c[d] = s * v;
  return o;
}

void AntisymCoeffs::add_term(std::vector<int> alpha, Cx coeff) {
  if (int(alpha.size()) != n)
    throw std::invalid_argument("AntisymCoeffs::add_term: arity mismatch");
  auto canon = canonicalize(alpha);
  if (canon.repeated) return;
  Cx v = double(canon.sign) * coeff;
  auto [it, inserted] = terms.try_emplace(std::move(alpha), v);
  if (!inserted) {
    it->second += v;
    if (it->second == Cx(0)) terms.erase(it);
  }
}

Cx AntisymCoeffs::coeff(std::vector<int> alpha) const {
  auto canon = canonicalize(alpha);
  if (canon.repeated) return 0;
  auto it = terms.find(alpha);
  if (it == terms.end()) return 0;
  return double(canon.sign) * it->second;
}

Cx AntisymCoeffs::eval(const CircleConfig& x) const {
  if (int(x.size()) != n)
    throw std::invalid_argument("AntisymCoeffs::eval: arity mismatch");
  Cx acc = 0;
  Eigen::MatrixXcd m(n, n);
  for (const auto& [alpha, coeff] : terms) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = std::pow(x[i], alpha[j]);
    acc += coeff * det_complex(m);
  }
  return acc;
}

Cx det_complex(Eigen::MatrixXcd a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("det_complex: not square");
  if (a.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(a).determinant();
}

Cx vandermonde(const CircleConfig& x) {
  Cx prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) prod *= (x[j] - x[i]);
  return prod;
}

Cx slater_value(const std::vector<Orbital>& f, const CircleConfig& x) {
  const int n = int(x.size());
  if (int(f.size()) != n)
    throw std::invalid_argument("slater_value: orbital count != coordinate count");
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = f[i].eval(x[j]);
  return det_complex(m) / factorial_d(n);
}

AntisymCoeffs alternant_coeffs(const Partition& lam, int n) {
  if (!lam.valid()) throw std::invalid_argument("alternant_coeffs: invalid partition");
  if (lam.length() > n)
    throw std::invalid_argument("alternant_coeffs: partition longer than n (value is 0)");
  std::vector<int> key(n, 0);
  for (int j = 0; j < n; ++j) {
    key[j] = n - 1 - j;  // delta
    if (j < lam.length()) key[j] += lam.parts[j];
  }
  AntisymCoeffs a(n);
  a.add_term(std::move(key), 1.0);
  return a;
}

namespace {

// s_lam via Jacobi-Trudi: det[h_{lam_i - i + j}], h_k from power sums by the
// Newton recurrence k h_k = sum_{i<=k} p_i h_{k-i}. Well-behaved at
// coincident coordinates, unlike the alternant ratio.
Cx schur_jacobi_trudi(const Partition& lam, const CircleConfig& x) {
  const int l = lam.length();
  if (l == 0) return 1.0;
  const int maxh = lam.parts.front() + l;
  std::vector<Cx> p(maxh + 1, 0.0), h(maxh + 1, 0.0);
  for (int k = 1; k <= maxh; ++k)
    for (const auto& z : x) p[k] += std::pow(z, k);
  h[0] = 1.0;
  for (int k = 1; k <= maxh; ++k) {
    Cx acc = 0;
    for (int i = 1; i <= k; ++i) acc += p[i] * h[k - i];
    h[k] = acc / double(k);
  }
  Eigen::MatrixXcd m(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      int idx = lam.parts[i] - (i + 1) + (j + 1);
      m(i, j) = (idx < 0) ? Cx(0) : h[idx];
    }
  return det_complex(m);
}

}  // namespace

Cx schur_value(const Partition& lam, const CircleConfig& x) {
  if (!lam.valid()) throw std::invalid_argument("schur_value: invalid partition");
  const int n = int(x.size());
  if (lam.length() > n) return 0.0;

  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      min_gap = std::min(min_gap, std::abs(x[i] - x[j]));
  if (min_gap < 1e-8) return schur_jacobi_trudi(lam, x);

  Eigen::MatrixXcd num(n, n), den(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int lj = j < lam.length() ? lam.parts[j] : 0;
      num(i, j) = std::pow(x[i], lj + n - 1 - j);
      den(i, j) = std::pow(x[i], n - 1 - j);
    }
  return det_complex(num) / det_complex(den);
}

Cx antisym_inner(const AntisymCoeffs& a, const AntisymCoeffs& b) {
  if (a.n != b.n) throw std::invalid_argument("antisym_inner: arity mismatch");
  Cx acc = 0;
  // iterate the smaller map
  const auto& small = a.terms.size() <= b.terms.size() ? a : b;
  const auto& large = a.terms.size() <= b.terms.size() ? b : a;
  const bool swapped = &small == &b;
  for (const auto& [key, cs] : small.terms) {
    auto it = large.terms.find(key);
    if (it == large.terms.end()) continue;
    Cx ca = swapped ? it->second : cs;
    Cx cb = swapped ? cs : it->second;
    acc += ca * std::conj(cb);
  }
  return factorial_d(a.n) * acc;
}

Cx fourier_coeff(const std::function<Cx(const CircleConfig&)>& h,
                 const std::vector<int>& alpha, int degree_bound,
                 std::size_t eval_cap) {
  const int n = int(alpha.size());
  if (n == 0) throw std::invalid_argument("fourier_coeff: empty exponent vector");
  for (int a : alpha)
    if (a < 0 || a > degree_bound)
      throw std::invalid_argument("fourier_coeff: alpha outside [0, degree_bound]");
  std::size_t nodes = 1;
  while (nodes < std::size_t(degree_bound) + 1) nodes *= 2;
  double total = std::pow(double(nodes), n);
  if (total > double(eval_cap))
    throw budget_error("fourier_coeff: quadrature grid exceeds evaluation cap");

  std::vector<Cx> roots(nodes);
  for (std::size_t t = 0; t < nodes; ++t) {
    double th = 2.0 * M_PI * double(t) / double(nodes);
    roots[t] = Cx(std::cos(th), std::sin(th));
  }

  std::vector<std::size_t> idx(n, 0);
  CircleConfig x(n, roots[0]);
  Cx acc = 0;
  while (true) {
    std::size_t phase = 0;
    for (int j = 0; j < n; ++j) phase += idx[j] * std::size_t(alpha[j]);
    acc += h(x) * std::conj(roots[phase % nodes]);
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
  return acc / total;
}

namespace detail {

namespace {
Cx pfaffian_matching_rec(const Eigen::MatrixXcd& a, std::vector<int>& active) {
  if (active.empty()) return 1.0;
  const int i0 = active[0];
  Cx acc = 0;
  double sign = 1.0;
  for (std::size_t pos = 1; pos < active.size(); ++pos) {
    const int j = active[pos];
    if (a(i0, j) != Cx(0)) {
      std::vector<int> rest;
      rest.reserve(active.size() - 2);
      for (std::size_t q = 1; q < active.size(); ++q)
        if (q != pos) rest.push_back(active[q]);
      acc += sign * a(i0, j) * pfaffian_matching_rec(a, rest);
    }
    sign = -sign;
  }
  return acc;
}
}  // namespace

Cx pfaffian_matching(const Eigen::MatrixXcd& a) {
  std::vector<int> active(a.rows());
  std::iota(active.begin(), active.end(), 0);
  return pfaffian_matching_rec(a, active);
}

Cx pfaffian_parlett_reid(Eigen::MatrixXcd a) {
  const int n = int(a.rows());
  Cx pf = 1.0;
  for (int k = 0; k + 2 < n; k += 1) {
    // pivot: largest |a(i, k)| over i > k
    int piv = k + 1;
    double best = std::abs(a(k + 1, k));
    for (int i = k + 2; i < n; ++i)
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    if (piv != k + 1) {
      a.row(piv).swap(a.row(k + 1));
      a.col(piv).swap(a.col(k + 1));
      pf = -pf;
    }
    const Cx akk1 = a(k + 1, k);
    // whole sub-column zero: nothing to eliminate (the tridiagonal factor
    // a(k, k+1) takes care of a genuinely zero Pfaffian)
    if (best == 0.0) continue;
    for (int i = k + 2; i < n; ++i) {
      const Cx t = a(i, k) / akk1;
      if (t != Cx(0)) {
        a.row(i) -= t * a.row(k + 1);
        a.col(i) -= t * a.col(k + 1);
      }
    }
  }
  for (int k = 0; k < n; k += 2) pf *= a(k, k + 1);
  return pf;
}

}  // namespace detail

Cx pfaffian(const Eigen::MatrixXcd& a, int matching_cut) {
  const int n = int(a.rows());
  if (a.cols() != n) throw std::invalid_argument("pfaffian: not square");
  if (n % 2 != 0) throw std::invalid_argument("pfaffian: odd dimension");
  if (n == 0) return 1.0;
  double skew = (a + a.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-12)
    throw std::invalid_argument("pfaffian: input not skew-symmetric");
  if (n <= matching_cut) return detail::pfaffian_matching(a);
  return detail::pfaffian_parlett_reid(a);
}

Eigen::MatrixXcd pfaffian_kernel(const CircleConfig& x, double r) {
  const int n = int(x.size());
  Eigen::MatrixXcd m(n, n);
  const double r4 = r * r * r * r;
  for (int i = 0; i < n; ++i) {
    m(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      Cx den = 1.0 - r4 * x[i] * x[i] * x[j] * x[j];
      if (std::abs(den) < 1e-12)
        throw std::domain_error("pfaffian_kernel: kernel pole at given configuration");
      Cx v = r * (x[i] - x[j]) / den;
      m(i, j) = v;
      m(j, i) = -v;
    }
  }
  return m;
}

}  // namespace ansep
