#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>

#include "ansep/common.hpp"
#include "ansep/partitions.hpp"

namespace ansep {

// Sorts alpha into weakly decreasing order in place. sign is the sign of the
// sorting permutation, repeated marks a repeated entry (in which case any
// antisymmetric object indexed by alpha vanishes).
struct Canonical {
  int sign = 1;
  bool repeated = false;
};
Canonical canonicalize(std::vector<int>& alpha);

// Sparse univariate polynomial, degree -> coefficient. Used for orbitals.
struct Orbital {
  std::map<int, Cx> c;

  static Orbital zero() { return {}; }
  static Orbital one() { return monomial(0, 1.0); }
  static Orbital monomial(int d, Cx coeff);

  Cx eval(Cx z) const;
  int degree() const;  // -1 for the zero polynomial
  int term_count() const { return int(c.size()); }
  // z -> p(r z), coefficients scaled exactly by r^d
  Orbital scaled_arg(double r) const;
  Cx coeff(int d) const {
    auto it = c.find(d);
    return it == c.end() ? Cx(0) : it->second;
  }

  Orbital& operator+=(const Orbital& o);
  friend Orbital operator*(const Orbital& a, const Orbital& b);
  friend Orbital operator*(Cx s, const Orbital& a);
};

// Coefficients of an antisymmetric polynomial over the antisymmetrized
// monomial basis m_alpha = det[x_i^{alpha_j}], keys strictly decreasing.
// add_term canonicalizes: permuted keys fold in with the permutation sign,
// repeated exponents drop to zero.
struct AntisymCoeffs {
  int n = 0;
  std::map<std::vector<int>, Cx> terms;

  explicit AntisymCoeffs(int n_ = 0) : n(n_) {}

  void add_term(std::vector<int> alpha, Cx coeff);
  // signed coefficient for any exponent vector (0 if repeated / absent)
  Cx coeff(std::vector<int> alpha) const;
  Cx eval(const CircleConfig& x) const;
};

// det via partially pivoted complex LU; empty matrix has det 1
Cx det_complex(Eigen::MatrixXcd a);

// prod_{i<j} (x_j - x_i). Note det[x_i^{n-j}] = (-1)^{n(n-1)/2} * this.
Cx vandermonde(const CircleConfig& x);

// (1/n!) det[f_i(x_j)]
Cx slater_value(const std::vector<Orbital>& f, const CircleConfig& x);

// Alternant a_{lam+delta}: single term with key lam + (n-1, ..., 1, 0).
// Throws if lam has more than n parts.
AntisymCoeffs alternant_coeffs(const Partition& lam, int n);

// Schur polynomial, standard convention a_{lam+delta}/a_delta. Returns 0 if
// lam has more than x.size() parts. Falls back to a Jacobi-Trudi determinant
// in complete homogeneous sums (stable under coincident coordinates) when
// two coordinates are within 1e-8.
Cx schur_value(const Partition& lam, const CircleConfig& x);

// Torus inner product restricted to the antisymmetric span:
// <A, B> = n! * sum_alpha c_A(alpha) conj(c_B(alpha)).
Cx antisym_inner(const AntisymCoeffs& a, const AntisymCoeffs& b);

// <H, x^alpha> by tensor-grid DFT quadrature with nodes-per-dimension the
// next power of two >= degree_bound + 1 (exact for polynomials of
// per-variable degree <= degree_bound). Throws budget_error if the grid
// would exceed eval_cap points.
Cx fourier_coeff(const std::function<Cx(const CircleConfig&)>& h,
                 const std::vector<int>& alpha, int degree_bound,
                 std::size_t eval_cap = std::size_t(1) << 22);

// Pfaffian of an even-dimensional skew-symmetric matrix. Signed
// perfect-matching expansion up to matching_cut, Parlett-Reid
// skew-tridiagonalization with pivoting above. Throws on odd dimension or
// if max|A + A^T| > 1e-12.
Cx pfaffian(const Eigen::MatrixXcd& a, int matching_cut = 8);

namespace detail {
Cx pfaffian_matching(const Eigen::MatrixXcd& a);
Cx pfaffian_parlett_reid(Eigen::MatrixXcd a);
}  // namespace detail

// K_ij = (r x_i - r x_j) / (1 - r^4 x_i^2 x_j^2); exactly skew by
// construction. Throws std::domain_error within 1e-12 of a pole.
Eigen::MatrixXcd pfaffian_kernel(const CircleConfig& x, double r);

}  // namespace ansep
