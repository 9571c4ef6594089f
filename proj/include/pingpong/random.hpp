#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "pingpong/projective.hpp"

namespace pingpong {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent stream seeds from
/// (seed, index) so that chunked work does not depend on the worker count.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng derived_rng(std::uint64_t seed, std::uint64_t index) { return Rng(mix_seed(seed, index)); }

/// Element of Z_p with uniformly random base-p digits (so the valuation is
/// geometric). Returns an exact zero when every tracked digit is 0.
inline Padic random_padic_integer(Rng& rng, const FieldSpec& f) {
  std::uniform_int_distribution<std::int64_t> digit(0, f.prime - 1);
  std::vector<std::int64_t> digits;
  int val = 0;
  while (val < f.precision) {
    const std::int64_t d = digit(rng);
    if (d != 0) {
      digits.push_back(d);
      break;
    }
    ++val;
  }
  if (digits.empty()) return Padic::zero(f.prime, f.precision);
  while (static_cast<int>(digits.size()) < f.precision) digits.push_back(digit(rng));
  return Padic::from_digits(val, digits, f.prime, f.precision);
}

/// Random scalar: standard normal over R/C, uniform digits in Z_p over Q_p.
template <class T>
T random_scalar(Rng& rng, const FieldSpec& f) {
  if constexpr (std::is_same_v<T, double>) {
    std::normal_distribution<double> n(0.0, 1.0);
    return n(rng);
  } else if constexpr (std::is_same_v<T, Complex>) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    return {re, n(rng)};
  } else {
    return random_padic_integer(rng, f);
  }
}

template <class T>
Vec<T> random_vector(Rng& rng, std::size_t n, const FieldSpec& f) {
  Vec<T> v(n);
  for (auto& x : v) x = random_scalar<T>(rng, f);
  return v;
}

/// Uniform point on the sphere (archimedean) or uniform-digit point (Q_p),
/// projectivized.
template <class T>
ProjPoint<T> random_point(Rng& rng, std::size_t n, const FieldSpec& f) {
  for (;;) {
    Vec<T> v = random_vector<T>(rng, n, f);
    if (norm(v) > 0.0) return ProjPoint<T>(std::move(v));
  }
}

template <class T>
ProjHyperplane<T> random_hyperplane(Rng& rng, std::size_t n, const FieldSpec& f) {
  return ProjHyperplane<T>(random_point<T>(rng, n, f).rep());
}

/// Random element of SL_n. Archimedean: gaussian matrix rescaled to det 1.
/// Q_p: product of elementary matrices with entries of valuation >= vmin and
/// a diagonal of p-powers with exponents in [-spread, spread].
template <class T>
Matrix<T> random_sl(Rng& rng, std::size_t n, const FieldSpec& f, int spread = 2) {
  if constexpr (is_archimedean_v<T>) {
    for (;;) {
      Matrix<T> g(n, n, f);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = random_scalar<T>(rng, f);
      T det = determinant(g);
      const double ad = std::abs(det);
      if (ad < 1e-3) continue;
      if constexpr (std::is_same_v<T, double>) {
        if (det < 0)
          for (std::size_t j = 0; j < n; ++j) g(0, j) = -g(0, j);
        const double s = std::pow(ad, -1.0 / static_cast<double>(n));
        return g.scaled(s);
      } else {
        // divide by an n-th root of det
        const T root = std::pow(det, 1.0 / static_cast<double>(n));
        return g.scaled(T(1.0) / root);
      }
    }
  } else {
    std::uniform_int_distribution<int> jd(-spread, spread);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::vector<int> js(n);
    int sum = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      js[i] = jd(rng);
      sum += js[i];
    }
    js[n - 1] = -sum;
    Vec<Padic> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = Padic::power_of_p(js[i], f.prime, f.precision);
    Matrix<Padic> g = Matrix<Padic>::diagonal(d, f);
    auto elementary = [&](int vmin) {
      Matrix<Padic> e = Matrix<Padic>::identity(n, f);
      const std::size_t i = idx(rng);
      std::size_t j = idx(rng);
      while (j == i) j = idx(rng);
      Padic x = random_padic_integer(rng, f);
      if (!x.is_zero()) x = x * Padic::power_of_p(vmin, f.prime, f.precision);
      e(i, j) = x;
      return e;
    };
    for (std::size_t k = 0; k < 2 * n; ++k) g = elementary(0) * g * elementary(0);
    g = elementary(-1) * g;
    return g;
  }
}

/// Rotation by angle theta in the (0,1) plane, as an element of SL_2(R).
inline Matrix<double> rotation(double theta) {
  return Matrix<double>({{std::cos(theta), -std::sin(theta)}, {std::sin(theta), std::cos(theta)}},
                        FieldSpec::real());
}

/// Random element of SO_n(R) via Gram-Schmidt on a gaussian matrix.
inline Matrix<double> random_orthogonal(Rng& rng, std::size_t n) {
  const FieldSpec f = FieldSpec::real();
  for (;;) {
    Matrix<double> q(n, n, f);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q(i, j) = random_scalar<double>(rng, f);
    bool ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) {
      for (std::size_t p = 0; p < c; ++p) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += q(i, c) * q(i, p);
        for (std::size_t i = 0; i < n; ++i) q(i, c) -= dot * q(i, p);
      }
      double nn = 0.0;
      for (std::size_t i = 0; i < n; ++i) nn += q(i, c) * q(i, c);
      nn = std::sqrt(nn);
      if (nn < 1e-8) ok = false;
      for (std::size_t i = 0; i < n && ok; ++i) q(i, c) /= nn;
    }
    if (!ok) continue;
    if (determinant(q) < 0)
      for (std::size_t i = 0; i < n; ++i) q(i, 0) = -q(i, 0);
    return q;
  }
}

/// Random element of SL_n(Z_p): product of integral elementary matrices.
inline Matrix<Padic> random_integral_sl(Rng& rng, std::size_t n, const FieldSpec& f) {
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  Matrix<Padic> g = Matrix<Padic>::identity(n, f);
  for (std::size_t k = 0; k < 4 * n; ++k) {
    Matrix<Padic> e = Matrix<Padic>::identity(n, f);
    const std::size_t i = idx(rng);
    std::size_t j = idx(rng);
    while (j == i) j = idx(rng);
    e(i, j) = random_padic_integer(rng, f);
    g = e * g;
  }
  return g;
}

}  // namespace pingpong
