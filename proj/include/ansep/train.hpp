#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ansep/common.hpp"
#include "ansep/hardfn.hpp"

namespace ansep {

// Training pairs (x, G(x)/C): unit-circle configurations against the hard
// function with its normalizing constant dropped.
struct Dataset {
  std::vector<CircleConfig> x;
  std::vector<Cx> target;
};

Dataset sample_dataset(int n, int count, const HardFnParams& params,
                       std::uint64_t seed);

// Batch of complex values split into coordinate planes so elementwise ops
// vectorize; index layout is owned by the caller.
template <typename T>
struct CBatch {
  Eigen::Array<T, Eigen::Dynamic, 1> re, im;

  void resize(Eigen::Index b) {
    re.resize(b);
    im.resize(b);
  }
  void setZero(Eigen::Index b) {
    re.setZero(b);
    im.setZero(b);
  }
  Eigen::Index size() const { return re.size(); }
  std::complex<T> at(Eigen::Index i) const { return {re[i], im[i]}; }
  void set(Eigen::Index i, std::complex<T> v) {
    re[i] = v.real();
    im[i] = v.imag();
  }
};

// One scalar network [inputs -> width -> 1] with the coordinatewise complex
// ReLU a+bi -> relu(a) + relu(b) i (identity when linear is set). Forward and
// backward run over whole batches; gradients follow the two-real-parameters
// view of each complex weight (g = dL/dRe + i dL/dIm), and the ReLU kink
// takes subgradient zero.
template <typename T>
struct ComplexMLP {
  int inputs = 1;
  int width = 1;
  bool linear = false;
  std::vector<std::complex<T>> w1;  // [f * width + n]
  std::vector<std::complex<T>> b1;  // [n]
  std::vector<std::complex<T>> w2;  // [n]
  std::complex<T> b2{};
  std::vector<std::complex<T>> g_w1, g_b1, g_w2;
  std::complex<T> g_b2{};

  // Weight variances per scheme, re and im independent:
  //   glorot  1/(fan_in + fan_out)
  //   fan_in  1/fan_in
  // The orbital nets use fan_in: with one complex input the glorot
  // denominator (1 + width) shrinks first-layer outputs so far that the
  // determinant of n of them starts around width^{-n/2}/n! and full-batch
  // descent at the pinned learning rate stalls for the whole desk-scale
  // budget. Biases start at zero under both schemes.
  enum class InitScale { glorot, fan_in };

  void init(int in, int w, bool lin, Rng& rng,
            InitScale scale = InitScale::glorot) {
    inputs = in;
    width = w;
    linear = lin;
    w1.assign(std::size_t(in) * w, {});
    b1.assign(w, {});
    w2.assign(w, {});
    b2 = {};
    const bool fi = scale == InitScale::fan_in;
    const T s1 = T(std::sqrt(fi ? 1.0 / in : 1.0 / (in + w)));
    const T s2 = T(std::sqrt(fi ? 1.0 / w : 1.0 / (w + 1)));
    for (auto& v : w1) v = {T(rng.normal()) * s1, T(rng.normal()) * s1};
    for (auto& v : w2) v = {T(rng.normal()) * s2, T(rng.normal()) * s2};
    zero_grad();
  }

  void zero_grad() {
    g_w1.assign(w1.size(), {});
    g_b1.assign(b1.size(), {});
    g_w2.assign(w2.size(), {});
    g_b2 = {};
  }

  template <typename F>
  void for_each_param(F f) {
    for (std::size_t i = 0; i < w1.size(); ++i) f(w1[i], g_w1[i]);
    for (std::size_t i = 0; i < b1.size(); ++i) f(b1[i], g_b1[i]);
    for (std::size_t i = 0; i < w2.size(); ++i) f(w2[i], g_w2[i]);
    f(b2, g_b2);
  }

  void forward(const std::vector<CBatch<T>>& feats, CBatch<T>& out,
               CBatch<T>& a) const {
    const Eigen::Index b = feats[0].size();
    out.resize(b);
    if (!linear && inputs <= 2) {
      forward_fused(feats, out);
      return;
    }
    out.re.setConstant(b, b2.real());
    out.im.setConstant(b, b2.imag());
    a.resize(b);
    for (int n = 0; n < width; ++n) {
      a.re.setConstant(b1[n].real());
      a.im.setConstant(b1[n].imag());
      for (int f = 0; f < inputs; ++f) {
        const std::complex<T> w = w1[std::size_t(f) * width + n];
        a.re += w.real() * feats[f].re - w.imag() * feats[f].im;
        a.im += w.real() * feats[f].im + w.imag() * feats[f].re;
      }
      if (!linear) {
        a.re = a.re.max(T(0));
        a.im = a.im.max(T(0));
      }
      const std::complex<T> v = w2[n];
      out.re += v.real() * a.re - v.imag() * a.im;
      out.im += v.real() * a.im + v.imag() * a.re;
    }
  }

  // Recomputes hidden rows instead of storing the full activation matrix;
  // the working set stays at a few batch rows.
  void backward(const std::vector<CBatch<T>>& feats, const CBatch<T>& g_out,
                CBatch<T>& a, CBatch<T>& g_a) {
    if (!linear && inputs <= 2) {
      backward_fused(feats, g_out);
      return;
    }
    g_b2 += std::complex<T>(g_out.re.sum(), g_out.im.sum());
    const Eigen::Index b = feats[0].size();
    a.resize(b);
    g_a.resize(b);
    for (int n = 0; n < width; ++n) {
      a.re.setConstant(b1[n].real());
      a.im.setConstant(b1[n].imag());
      for (int f = 0; f < inputs; ++f) {
        const std::complex<T> w = w1[std::size_t(f) * width + n];
        a.re += w.real() * feats[f].re - w.imag() * feats[f].im;
        a.im += w.real() * feats[f].im + w.imag() * feats[f].re;
      }
      if (!linear) {
        a.re = a.re.max(T(0));
        a.im = a.im.max(T(0));
      }
      g_w2[n] += std::complex<T>((g_out.re * a.re + g_out.im * a.im).sum(),
                                 (g_out.im * a.re - g_out.re * a.im).sum());
      const std::complex<T> v = w2[n];
      g_a.re = v.real() * g_out.re + v.imag() * g_out.im;
      g_a.im = v.real() * g_out.im - v.imag() * g_out.re;
      if (!linear) {
        // relu(p) > 0 iff p > 0, so the stored post-activation row carries
        // the mask; the kink at zero masks to zero
        g_a.re *= (a.re > T(0)).template cast<T>();
        g_a.im *= (a.im > T(0)).template cast<T>();
      }
      for (int f = 0; f < inputs; ++f) {
        g_w1[std::size_t(f) * width + n] += std::complex<T>(
            (g_a.re * feats[f].re + g_a.im * feats[f].im).sum(),
            (g_a.im * feats[f].re - g_a.re * feats[f].im).sum());
      }
      g_b1[n] += std::complex<T>(g_a.re.sum(), g_a.im.sum());
    }
  }

 private:
  // Lane count for split accumulators: power of two, at least one SIMD
  // register of T, so the strided sums vectorize while the evaluation
  // order (and hence the result) stays fixed.
  static constexpr int kLanes = 16;

  static T lane_total(const T* acc) {
    T s = T(0);
    for (int i = 0; i < kLanes; ++i) s += acc[i];
    return s;
  }

  // One fused pass per neuron; batch rows stay cache-resident across the
  // neuron loop. Hot path for the trained models (1 or 2 inputs, ReLU).
  void forward_fused(const std::vector<CBatch<T>>& feats,
                     CBatch<T>& out) const {
    const Eigen::Index b = feats[0].size();
    const T* __restrict f0r = feats[0].re.data();
    const T* __restrict f0i = feats[0].im.data();
    const T* __restrict f1r = inputs == 2 ? feats[1].re.data() : nullptr;
    const T* __restrict f1i = inputs == 2 ? feats[1].im.data() : nullptr;
    T* __restrict outr = out.re.data();
    T* __restrict outi = out.im.data();
    const T b2r = b2.real(), b2i = b2.imag();
    for (Eigen::Index p = 0; p < b; ++p) {
      outr[p] = b2r;
      outi[p] = b2i;
    }
    for (int n = 0; n < width; ++n) {
      const T w1r = w1[n].real(), w1i = w1[n].imag();
      const T u1r = inputs == 2 ? w1[std::size_t(width) + n].real() : T(0);
      const T u1i = inputs == 2 ? w1[std::size_t(width) + n].imag() : T(0);
      const T b1r = b1[n].real(), b1i = b1[n].imag();
      const T w2r = w2[n].real(), w2i = w2[n].imag();
      if (inputs == 1) {
        for (Eigen::Index p = 0; p < b; ++p) {
          T ar = w1r * f0r[p] - w1i * f0i[p] + b1r;
          T ai = w1r * f0i[p] + w1i * f0r[p] + b1i;
          ar = ar > T(0) ? ar : T(0);
          ai = ai > T(0) ? ai : T(0);
          outr[p] += w2r * ar - w2i * ai;
          outi[p] += w2r * ai + w2i * ar;
        }
      } else {
        for (Eigen::Index p = 0; p < b; ++p) {
          T ar = w1r * f0r[p] - w1i * f0i[p] + u1r * f1r[p] - u1i * f1i[p] + b1r;
          T ai = w1r * f0i[p] + w1i * f0r[p] + u1r * f1i[p] + u1i * f1r[p] + b1i;
          ar = ar > T(0) ? ar : T(0);
          ai = ai > T(0) ? ai : T(0);
          outr[p] += w2r * ar - w2i * ai;
          outi[p] += w2r * ai + w2i * ar;
        }
      }
    }
  }

  // The reductions run over fixed-size lane blocks (independent partial sums,
  // unit stride, constant trip count) so the compiler turns each block into
  // straight vector code; the summation order is fixed by kLanes alone.
  void backward_fused(const std::vector<CBatch<T>>& feats,
                      const CBatch<T>& g_out) {
    const Eigen::Index b = feats[0].size();
    const Eigen::Index nb = b / kLanes * kLanes;
    const T* __restrict f0r = feats[0].re.data();
    const T* __restrict f0i = feats[0].im.data();
    const T* __restrict f1r = inputs == 2 ? feats[1].re.data() : nullptr;
    const T* __restrict f1i = inputs == 2 ? feats[1].im.data() : nullptr;
    const T* __restrict gr = g_out.re.data();
    const T* __restrict gi = g_out.im.data();
    {
      T abr[kLanes] = {}, abi[kLanes] = {};
      for (Eigen::Index p0 = 0; p0 < nb; p0 += kLanes) {
        for (int l = 0; l < kLanes; ++l) {
          abr[l] += gr[p0 + l];
          abi[l] += gi[p0 + l];
        }
      }
      for (Eigen::Index p = nb; p < b; ++p) {
        abr[p - nb] += gr[p];
        abi[p - nb] += gi[p];
      }
      g_b2 += std::complex<T>(lane_total(abr), lane_total(abi));
    }
    if (inputs == 1)
      backward_neurons<1>(b, nb, f0r, f0i, f1r, f1i, gr, gi);
    else
      backward_neurons<2>(b, nb, f0r, f0i, f1r, f1i, gr, gi);
  }

  // IN is a compile-time input count so the lane loop stays branch-free.
  template <int IN>
  void backward_neurons(Eigen::Index b, Eigen::Index nb, const T* __restrict f0r,
                        const T* __restrict f0i, const T* __restrict f1r,
                        const T* __restrict f1i, const T* __restrict gr,
                        const T* __restrict gi) {
    for (int n = 0; n < width; ++n) {
      const T w1r = w1[n].real(), w1i = w1[n].imag();
      const T u1r = IN == 2 ? w1[std::size_t(width) + n].real() : T(0);
      const T u1i = IN == 2 ? w1[std::size_t(width) + n].imag() : T(0);
      const T b1r = b1[n].real(), b1i = b1[n].imag();
      const T w2r = w2[n].real(), w2i = w2[n].imag();
      T aw2r[kLanes] = {}, aw2i[kLanes] = {};
      T aw1r[kLanes] = {}, aw1i[kLanes] = {};
      T au1r[kLanes] = {}, au1i[kLanes] = {};
      T ab1r[kLanes] = {}, ab1i[kLanes] = {};
#define ANSEP_BWD_BODY(p, l)                                              \
  {                                                                       \
    T ar = w1r * f0r[p] - w1i * f0i[p] + b1r;                             \
    T ai = w1r * f0i[p] + w1i * f0r[p] + b1i;                             \
    if constexpr (IN == 2) {                                              \
      ar += u1r * f1r[p] - u1i * f1i[p];                                  \
      ai += u1r * f1i[p] + u1i * f1r[p];                                  \
    }                                                                     \
    const T mr = ar > T(0) ? T(1) : T(0);                                 \
    const T mi = ai > T(0) ? T(1) : T(0);                                 \
    const T hr = ar * mr;                                                 \
    const T hi = ai * mi;                                                 \
    aw2r[l] += gr[p] * hr + gi[p] * hi;                                   \
    aw2i[l] += gi[p] * hr - gr[p] * hi;                                   \
    const T gar = (w2r * gr[p] + w2i * gi[p]) * mr;                       \
    const T gai = (w2r * gi[p] - w2i * gr[p]) * mi;                       \
    aw1r[l] += gar * f0r[p] + gai * f0i[p];                               \
    aw1i[l] += gai * f0r[p] - gar * f0i[p];                               \
    if constexpr (IN == 2) {                                              \
      au1r[l] += gar * f1r[p] + gai * f1i[p];                             \
      au1i[l] += gai * f1r[p] - gar * f1i[p];                             \
    }                                                                     \
    ab1r[l] += gar;                                                       \
    ab1i[l] += gai;                                                       \
  }
      for (Eigen::Index p0 = 0; p0 < nb; p0 += kLanes)
        for (int l = 0; l < kLanes; ++l) ANSEP_BWD_BODY(p0 + l, l)
      for (Eigen::Index p = nb; p < b; ++p) ANSEP_BWD_BODY(p, int(p - nb))
#undef ANSEP_BWD_BODY
      g_w2[n] += std::complex<T>(lane_total(aw2r), lane_total(aw2i));
      g_w1[n] += std::complex<T>(lane_total(aw1r), lane_total(aw1i));
      if constexpr (IN == 2)
        g_w1[std::size_t(width) + n] +=
            std::complex<T>(lane_total(au1r), lane_total(au1i));
      g_b1[n] += std::complex<T>(lane_total(ab1r), lane_total(ab1i));
    }
  }
};

namespace detail {

// Laplace expansion over the lowest active row; n stays tiny (<= 6) so the
// factorial cost is irrelevant next to the network passes.
template <typename T>
std::complex<T> masked_det(const std::complex<T>* m, int n,
                           std::uint32_t rows, std::uint32_t cols) {
  const int r = __builtin_ctz(rows);
  if ((rows & (rows - 1)) == 0) {
    const int c = __builtin_ctz(cols);
    return m[r * n + c];
  }
  std::complex<T> acc{};
  T sign = T(1);
  for (std::uint32_t rest = cols; rest;) {
    const int c = __builtin_ctz(rest);
    rest &= rest - 1;
    const std::complex<T> piv = m[r * n + c];
    if (piv.real() != T(0) || piv.imag() != T(0))
      acc += sign * piv *
             masked_det(m, n, rows & ~(1u << r), cols & ~(1u << c));
    sign = -sign;
  }
  return acc;
}

// Column-pair lookup for the unrolled 4x4 path: (a,b) with a < b -> 0..5.
inline int pair_slot(int a, int b) {
  static constexpr int t[4][4] = {
      {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return t[a][b];
}

// 4x4 determinant and adjugate from the twelve 2x2 minors of the top and
// bottom row pairs; no recursion, called once per sample per determinant.
template <typename T>
std::complex<T> det4_and_adjugate(const std::complex<T>* m,
                                  std::complex<T>* adj) {
  using C = std::complex<T>;
  C s[6], c[6];
  for (int a = 0, k = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b, ++k) {
      s[k] = m[a] * m[4 + b] - m[b] * m[4 + a];
      c[k] = m[8 + a] * m[12 + b] - m[8 + b] * m[12 + a];
    }
  }
  const C det = s[0] * c[5] - s[1] * c[4] + s[2] * c[3] + s[3] * c[2] -
                s[4] * c[1] + s[5] * c[0];
  if (adj) {
    for (int i = 0; i < 4; ++i) {
      // cofactor rows: {other, 2, 3} expanded along the first row when
      // striking row 0 or 1, {0, 1, other} along the last otherwise
      const int other = (i < 2) ? (1 - i) : (5 - i);
      const C* use = (i < 2) ? c : s;
      for (int j = 0; j < 4; ++j) {
        int col[3];
        for (int q = 0, w = 0; q < 4; ++q)
          if (q != j) col[w++] = q;
        const C* row = m + other * 4;
        const C d3 = row[col[0]] * use[pair_slot(col[1], col[2])] -
                     row[col[1]] * use[pair_slot(col[0], col[2])] +
                     row[col[2]] * use[pair_slot(col[0], col[1])];
        adj[j * 4 + i] = ((i + j) % 2 == 0) ? d3 : -d3;
      }
    }
  }
  return det;
}

// Determinant and (optionally) the adjugate, so that m * adj = det * I and
// d det / d m(i,j) = adj(j,i). Exact cofactor arithmetic, no pivoting.
template <typename T>
std::complex<T> det_and_adjugate(const std::complex<T>* m, int n,
                                 std::complex<T>* adj) {
  if (n == 4) return det4_and_adjugate<T>(m, adj);
  if (n == 2) {
    if (adj) {
      adj[0] = m[3];
      adj[1] = -m[1];
      adj[2] = -m[2];
      adj[3] = m[0];
    }
    return m[0] * m[3] - m[1] * m[2];
  }
  const std::uint32_t full = (n >= 32) ? ~0u : ((1u << n) - 1);
  if (n > 12) throw std::invalid_argument("det_and_adjugate: n too large");
  const std::complex<T> det = masked_det<T>(m, n, full, full);
  if (adj) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const T sign = ((i + j) % 2 == 0) ? T(1) : T(-1);
        adj[j * n + i] =
            (n == 1)
                ? std::complex<T>(1, 0)
                : sign * masked_det<T>(m, n, full & ~(1u << i),
                                       full & ~(1u << j));
      }
    }
  }
  return det;
}

template <typename T>
T inv_factorial(int n) {
  T f = T(1);
  for (int i = 2; i <= n; ++i) f /= T(i);
  return f;
}

}  // namespace detail

// Slater ansatz: sum of L determinants of per-orbital networks,
// F(x) = sum_l (1/n!) det[f^l_j(x_i)]. feature_degree lifts each input to
// (x, x^2, ..., x^d); the default d = 1 feeds the raw coordinate. linear
// bypasses the activation (both knobs exist for exact-encoding tests).
template <typename T>
class SlaterModel {
 public:
  SlaterModel(int n, int dets, int width, std::uint64_t seed,
              int feature_degree = 1, bool linear = false)
      : n_(n), dets_(dets), deg_(feature_degree) {
    if (n < 2 || dets < 1 || width < 1 || feature_degree < 1)
      throw std::invalid_argument("SlaterModel: bad shape");
    Rng rng(seed);
    nets_.resize(std::size_t(dets) * n);
    for (auto& net : nets_)
      net.init(feature_degree, width, linear, rng,
               ComplexMLP<T>::InitScale::fan_in);
  }

  int n() const { return n_; }
  int det_count() const { return dets_; }

  void set_data(const Dataset& ds) {
    if (ds.x.empty()) throw std::invalid_argument("SlaterModel: empty dataset");
    s_ = long(ds.x.size());
    feats_ = encode(ds.x);
    targets_.resize(s_);
    mean_t2_ = 0.0;
    for (long s = 0; s < s_; ++s) {
      targets_[s] = std::complex<T>(T(ds.target[s].real()),
                                    T(ds.target[s].imag()));
      mean_t2_ += sq_norm(targets_[s]);
    }
    mean_t2_ /= double(s_);
  }

  double mean_target_sq() const { return mean_t2_; }

  double loss_only() { return loss_impl(false); }
  double loss_and_grad() { return loss_impl(true); }

  void gd_step(double lr) {
    for (auto& net : nets_)
      net.for_each_param([lr](std::complex<T>& p, std::complex<T>& g) {
        p -= T(lr) * g;
      });
  }

  Cx forward_one(const CircleConfig& x) const {
    if (int(x.size()) != n_)
      throw std::invalid_argument("SlaterModel: configuration size");
    const auto feats = encode({x});
    CBatch<T> out, a;
    std::vector<std::complex<T>> m(std::size_t(n_) * n_);
    std::complex<T> f{};
    for (int l = 0; l < dets_; ++l) {
      for (int j = 0; j < n_; ++j) {
        nets_[std::size_t(l) * n_ + j].forward(feats, out, a);
        for (int i = 0; i < n_; ++i) m[std::size_t(i) * n_ + j] = out.at(i);
      }
      f += detail::det_and_adjugate<T>(m.data(), n_, nullptr);
    }
    f *= detail::inv_factorial<T>(n_);
    return Cx(double(f.real()), double(f.imag()));
  }

  std::vector<std::complex<T>*> parameters() {
    std::vector<std::complex<T>*> ps;
    for (auto& net : nets_)
      net.for_each_param(
          [&](std::complex<T>& p, std::complex<T>&) { ps.push_back(&p); });
    return ps;
  }
  std::vector<std::complex<T>*> gradients() {
    std::vector<std::complex<T>*> gs;
    for (auto& net : nets_)
      net.for_each_param(
          [&](std::complex<T>&, std::complex<T>& g) { gs.push_back(&g); });
    return gs;
  }

 private:
  static double sq_norm(std::complex<T> v) {
    return double(v.real()) * double(v.real()) +
           double(v.imag()) * double(v.imag());
  }

  std::vector<CBatch<T>> encode(const std::vector<CircleConfig>& xs) const {
    const Eigen::Index b = Eigen::Index(xs.size()) * n_;
    std::vector<CBatch<T>> feats(deg_);
    for (auto& f : feats) f.resize(b);
    for (std::size_t s = 0; s < xs.size(); ++s) {
      for (int i = 0; i < n_; ++i) {
        Cx p = xs[s][i];
        for (int d = 0; d < deg_; ++d) {
          feats[d].set(Eigen::Index(s) * n_ + i,
                       std::complex<T>(T(p.real()), T(p.imag())));
          p *= xs[s][i];
        }
      }
    }
    return feats;
  }

  double loss_impl(bool grad) {
    if (s_ == 0) throw std::logic_error("SlaterModel: set_data first");
    const Eigen::Index b = Eigen::Index(s_) * n_;
    v_.resize(nets_.size());
    for (std::size_t k = 0; k < nets_.size(); ++k)
      nets_[k].forward(feats_, v_[k], a_);
    if (grad) {
      gv_.resize(nets_.size());
      for (auto& g : gv_) g.setZero(b);
      for (auto& net : nets_) net.zero_grad();
    }
    const T inv_fact = detail::inv_factorial<T>(n_);
    std::vector<std::complex<T>> m(std::size_t(n_) * n_);
    std::vector<std::complex<T>> dets(dets_);
    std::vector<std::complex<T>> adjs(grad ? nets_.size() * std::size_t(n_)
                                           : 0);
    double loss = 0.0;
    for (long s = 0; s < s_; ++s) {
      std::complex<T> f{};
      for (int l = 0; l < dets_; ++l) {
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j)
            m[std::size_t(i) * n_ + j] = v_[std::size_t(l) * n_ + j].at(
                Eigen::Index(s) * n_ + i);
        dets[l] = detail::det_and_adjugate<T>(
            m.data(), n_,
            grad ? adjs.data() + std::size_t(l) * n_ * n_ : nullptr);
        f += dets[l];
      }
      f *= inv_fact;
      const std::complex<T> e = f - targets_[s];
      loss += sq_norm(e);
      if (grad) {
        const std::complex<T> gf = e * (T(2) / T(s_));
        const std::complex<T> gdet = gf * inv_fact;
        for (int l = 0; l < dets_; ++l) {
          const std::complex<T>* adj = adjs.data() + std::size_t(l) * n_ * n_;
          for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
              gv_[std::size_t(l) * n_ + j].set(
                  Eigen::Index(s) * n_ + i,
                  gdet * std::conj(adj[std::size_t(j) * n_ + i]));
        }
      }
    }
    loss /= double(s_);
    if (grad)
      for (std::size_t k = 0; k < nets_.size(); ++k)
        nets_[k].backward(feats_, gv_[k], a_, ga_);
    return loss;
  }

  int n_, dets_, deg_;
  std::vector<ComplexMLP<T>> nets_;  // [l * n + j]
  long s_ = 0;
  std::vector<CBatch<T>> feats_;
  std::vector<std::complex<T>> targets_;
  double mean_t2_ = 0.0;
  std::vector<CBatch<T>> v_, gv_;
  CBatch<T> a_, ga_;
};

// Jastrow ansatz: one determinant of orbital networks times a symmetric
// relational prefactor, F(x) = prod_{i<j} q_ij * (1/n!) det[g_j(x_i)] with
// q_ij = (h(x_i,x_j) + h(x_j,x_i))/2. h's output bias starts at one so the
// pooled product opens near the identity instead of collapsing to zero.
template <typename T>
class JastrowModel {
 public:
  JastrowModel(int n, int width, std::uint64_t seed) : n_(n) {
    if (n < 2 || width < 1) throw std::invalid_argument("JastrowModel: bad shape");
    Rng rng(seed);
    nets_.resize(n);
    for (auto& net : nets_)
      net.init(1, width, false, rng, ComplexMLP<T>::InitScale::fan_in);
    pair_.init(2, width, false, rng);
    pair_.b2 = std::complex<T>(1, 0);
    pairs_ = n * (n - 1) / 2;
  }

  int n() const { return n_; }

  void set_data(const Dataset& ds) {
    if (ds.x.empty()) throw std::invalid_argument("JastrowModel: empty dataset");
    s_ = long(ds.x.size());
    feats_ = encode_orbitals(ds.x);
    pfeats_ = encode_pairs(ds.x);
    targets_.resize(s_);
    mean_t2_ = 0.0;
    for (long s = 0; s < s_; ++s) {
      targets_[s] = std::complex<T>(T(ds.target[s].real()),
                                    T(ds.target[s].imag()));
      mean_t2_ += sq_norm(targets_[s]);
    }
    mean_t2_ /= double(s_);
  }

  double mean_target_sq() const { return mean_t2_; }
  double loss_only() { return loss_impl(false); }
  double loss_and_grad() { return loss_impl(true); }

  void gd_step(double lr) {
    auto step = [lr](std::complex<T>& p, std::complex<T>& g) {
      p -= T(lr) * g;
    };
    for (auto& net : nets_) net.for_each_param(step);
    pair_.for_each_param(step);
  }

  Cx prefactor_one(const CircleConfig& x) const {
    const auto pf = encode_pairs({x});
    CBatch<T> h, a;
    pair_.forward(pf, h, a);
    std::complex<T> prod(1, 0);
    for (int p = 0; p < pairs_; ++p)
      prod *= (h.at(2 * p) + h.at(2 * p + 1)) * T(0.5);
    return Cx(double(prod.real()), double(prod.imag()));
  }

  Cx forward_one(const CircleConfig& x) const {
    if (int(x.size()) != n_)
      throw std::invalid_argument("JastrowModel: configuration size");
    const auto feats = encode_orbitals({x});
    CBatch<T> out, a;
    std::vector<std::complex<T>> m(std::size_t(n_) * n_);
    for (int j = 0; j < n_; ++j) {
      nets_[j].forward(feats, out, a);
      for (int i = 0; i < n_; ++i) m[std::size_t(i) * n_ + j] = out.at(i);
    }
    const std::complex<T> det =
        detail::det_and_adjugate<T>(m.data(), n_, nullptr);
    const Cx pref = prefactor_one(x);
    return pref * Cx(double(det.real()), double(det.imag())) /
           factorial_d(n_);
  }

  std::vector<std::complex<T>*> parameters() {
    std::vector<std::complex<T>*> ps;
    auto grab = [&](std::complex<T>& p, std::complex<T>&) {
      ps.push_back(&p);
    };
    for (auto& net : nets_) net.for_each_param(grab);
    pair_.for_each_param(grab);
    return ps;
  }
  std::vector<std::complex<T>*> gradients() {
    std::vector<std::complex<T>*> gs;
    auto grab = [&](std::complex<T>&, std::complex<T>& g) {
      gs.push_back(&g);
    };
    for (auto& net : nets_) net.for_each_param(grab);
    pair_.for_each_param(grab);
    return gs;
  }

 private:
  static double sq_norm(std::complex<T> v) {
    return double(v.real()) * double(v.real()) +
           double(v.imag()) * double(v.imag());
  }

  std::vector<CBatch<T>> encode_orbitals(
      const std::vector<CircleConfig>& xs) const {
    std::vector<CBatch<T>> feats(1);
    feats[0].resize(Eigen::Index(xs.size()) * n_);
    for (std::size_t s = 0; s < xs.size(); ++s)
      for (int i = 0; i < n_; ++i)
        feats[0].set(Eigen::Index(s) * n_ + i,
                     std::complex<T>(T(xs[s][i].real()), T(xs[s][i].imag())));
    return feats;
  }

  // Two slots per unordered pair: (x_i, x_j) then (x_j, x_i), so one batched
  // pass evaluates both orderings of the relational net.
  std::vector<CBatch<T>> encode_pairs(
      const std::vector<CircleConfig>& xs) const {
    std::vector<CBatch<T>> feats(2);
    const Eigen::Index b = Eigen::Index(xs.size()) * pairs_ * 2;
    feats[0].resize(b);
    feats[1].resize(b);
    for (std::size_t s = 0; s < xs.size(); ++s) {
      Eigen::Index slot = Eigen::Index(s) * pairs_ * 2;
      for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j) {
          const std::complex<T> a(T(xs[s][i].real()), T(xs[s][i].imag()));
          const std::complex<T> c(T(xs[s][j].real()), T(xs[s][j].imag()));
          feats[0].set(slot, a);
          feats[1].set(slot, c);
          ++slot;
          feats[0].set(slot, c);
          feats[1].set(slot, a);
          ++slot;
        }
      }
    }
    return feats;
  }

  double loss_impl(bool grad) {
    if (s_ == 0) throw std::logic_error("JastrowModel: set_data first");
    const Eigen::Index b = Eigen::Index(s_) * n_;
    const Eigen::Index bp = Eigen::Index(s_) * pairs_ * 2;
    v_.resize(nets_.size());
    for (std::size_t k = 0; k < nets_.size(); ++k)
      nets_[k].forward(feats_, v_[k], a_);
    pair_.forward(pfeats_, h_, a_);
    if (grad) {
      gv_.resize(nets_.size());
      for (auto& g : gv_) g.setZero(b);
      gh_.setZero(bp);
      for (auto& net : nets_) net.zero_grad();
      pair_.zero_grad();
    }
    const T inv_fact = detail::inv_factorial<T>(n_);
    std::vector<std::complex<T>> m(std::size_t(n_) * n_);
    std::vector<std::complex<T>> adj(grad ? m.size() : 0);
    std::vector<std::complex<T>> q(pairs_), pre(pairs_ + 1), suf(pairs_ + 1);
    double loss = 0.0;
    for (long s = 0; s < s_; ++s) {
      const Eigen::Index base = Eigen::Index(s) * pairs_ * 2;
      for (int p = 0; p < pairs_; ++p)
        q[p] = (h_.at(base + 2 * p) + h_.at(base + 2 * p + 1)) * T(0.5);
      pre[0] = std::complex<T>(1, 0);
      for (int p = 0; p < pairs_; ++p) pre[p + 1] = pre[p] * q[p];
      suf[pairs_] = std::complex<T>(1, 0);
      for (int p = pairs_ - 1; p >= 0; --p) suf[p] = suf[p + 1] * q[p];
      const std::complex<T> prefactor = pre[pairs_];
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          m[std::size_t(i) * n_ + j] =
              v_[j].at(Eigen::Index(s) * n_ + i);
      const std::complex<T> det = detail::det_and_adjugate<T>(
          m.data(), n_, grad ? adj.data() : nullptr);
      const std::complex<T> f = prefactor * det * inv_fact;
      const std::complex<T> e = f - targets_[s];
      loss += sq_norm(e);
      if (grad) {
        const std::complex<T> gf = e * (T(2) / T(s_));
        const std::complex<T> gdet = gf * std::conj(prefactor) * inv_fact;
        const std::complex<T> gpref = gf * std::conj(det * inv_fact);
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j)
            gv_[j].set(Eigen::Index(s) * n_ + i,
                       gdet * std::conj(adj[std::size_t(j) * n_ + i]));
        for (int p = 0; p < pairs_; ++p) {
          const std::complex<T> gq =
              gpref * std::conj(pre[p] * suf[p + 1]);
          gh_.set(base + 2 * p, gq * T(0.5));
          gh_.set(base + 2 * p + 1, gq * T(0.5));
        }
      }
    }
    loss /= double(s_);
    if (grad) {
      for (std::size_t k = 0; k < nets_.size(); ++k)
        nets_[k].backward(feats_, gv_[k], a_, ga_);
      pair_.backward(pfeats_, gh_, a_, ga_);
    }
    return loss;
  }

  int n_, pairs_ = 0;
  std::vector<ComplexMLP<T>> nets_;
  ComplexMLP<T> pair_;
  long s_ = 0;
  std::vector<CBatch<T>> feats_, pfeats_;
  std::vector<std::complex<T>> targets_;
  double mean_t2_ = 0.0;
  std::vector<CBatch<T>> v_, gv_;
  CBatch<T> h_, gh_, a_, ga_;
};

// FNV-1a over the parameter values widened to double; identifies a trained
// parameter set without serializing it.
template <typename T>
std::uint64_t param_digest(const std::vector<std::complex<T>*>& params) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    __builtin_memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (const auto* p : params) {
    mix(double(p->real()));
    mix(double(p->imag()));
  }
  return h;
}

enum class ModelKind { slater, jastrow };

// Fixed at model construction; recorded in run artifacts so configs stay
// self-describing.
inline constexpr const char* kInitScheme =
    "fan_in orbital nets, glorot pair net with unit output bias";

struct TrainConfig {
  int n = 4;
  ModelKind kind = ModelKind::slater;
  int det_count = 1;  // slater only; jastrow carries a single determinant
  int width = 30;
  int samples = 2000;
  int iterations = 20000;
  double learning_rate = 5e-4;
  std::uint64_t seed = 1;
  HardFnParams target;

  void validate() const;
};

struct RunRecord {
  TrainConfig config;
  // normalized_mse[i] = loss after i descent steps over mean |target|^2;
  // length iterations + 1 unless the divergence detector cut it short
  std::vector<double> normalized_mse;
  double mean_target_sq = 0.0;
  double wall_seconds = 0.0;
  bool diverged = false;
  // worst relative antisymmetry violation over the periodic spot checks
  double antisym_violation = 0.0;
  std::uint64_t param_digest = 0;
  std::string precision = "fp32";

  double final_normalized_mse() const {
    return normalized_mse.empty() ? std::nan("") : normalized_mse.back();
  }
};

// Full-batch gradient descent at fixed step size in single precision
// (double-precision paths stay available through the templated models).
RunRecord train_run(const TrainConfig& config);

}  // namespace ansep
