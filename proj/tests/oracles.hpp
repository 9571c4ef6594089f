#pragma once

// Reference computations that avoid the library code paths under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "pingpong.hpp"

namespace oracle {

using pingpong::Complex;
using pingpong::Matrix;
using pingpong::Padic;

inline double mag(double x) { return std::abs(x); }
inline double mag(const Complex& z) { return std::abs(z); }
inline double conj_(double x) { return x; }
inline Complex conj_(const Complex& z) { return std::conj(z); }

/// sqrt of the top eigenvalue of g^H g by power iteration.
template <class T>
double operator_norm(const Matrix<T>& g) {
  const std::size_t n = g.cols();
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = T(1.0 + 0.1 * static_cast<double>(i * i + 1));
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    std::vector<T> y(g.rows(), T(0.0)), z(n, T(0.0));
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += g(i, j) * x[j];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < g.rows(); ++i) z[j] += conj_(g(i, j)) * y[i];
    double nz = 0.0, nx = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      nz += mag(z[j]) * mag(z[j]);
      nx += mag(x[j]) * mag(x[j]);
    }
    const double next = std::sqrt(nz / nx);
    for (std::size_t j = 0; j < n; ++j) x[j] = z[j] / std::sqrt(nz);
    if (it > 50 && std::abs(next - lambda) <= 1e-15 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

/// Matrix of g on the second exterior power, from explicit 2 x 2 minors.
template <class T>
Matrix<T> wedge2(const Matrix<T>& g) {
  const std::size_t n = g.rows();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  Matrix<T> out(pairs.size(), pairs.size(), g.field());
  for (std::size_t r = 0; r < pairs.size(); ++r)
    for (std::size_t c = 0; c < pairs.size(); ++c) {
      const auto [i, j] = pairs[r];
      const auto [k, l] = pairs[c];
      out(r, c) = g(i, k) * g(j, l) - g(i, l) * g(j, k);
    }
  return out;
}

/// Over Q_p with the sup norm the operator norm is the largest entry.
inline double sup_operator_norm(const Matrix<Padic>& g) {
  double m = 0.0;
  for (const auto& x : g.data()) m = std::max(m, x.abs());
  return m;
}

/// Least valuation of the i x i minors (determinantal divisor), by cofactor
/// expansion.
inline Padic cofactor_det(const Matrix<Padic>& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  Padic acc = Padic::zero(m.field().prime, m.field().precision);
  for (std::size_t c = 0; c < n; ++c) {
    Matrix<Padic> sub(n - 1, n - 1, m.field());
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) sub(i - 1, jj++) = m(i, j);
    const Padic term = m(0, c) * cofactor_det(sub);
    acc = c % 2 ? acc - term : acc + term;
  }
  return acc;
}

inline int determinantal_divisor(const Matrix<Padic>& g, std::size_t i) {
  const auto sets = pingpong::subsets(g.rows(), i);
  int best = Padic::kInfinite;
  Matrix<Padic> minor(i, i, g.field());
  for (const auto& rs : sets)
    for (const auto& cs : sets) {
      for (std::size_t a = 0; a < i; ++a)
        for (std::size_t b = 0; b < i; ++b) minor(a, b) = g(rs[a], cs[b]);
      best = std::min(best, cofactor_det(minor).valuation());
    }
  return best;
}

/// Exponents j_1 <= ... <= j_n from determinantal divisors: j_1 + ... + j_i
/// is the least valuation of an i x i minor.
inline std::vector<int> smith_exponents(const Matrix<Padic>& g) {
  std::vector<int> j;
  int prev = 0;
  for (std::size_t i = 1; i <= g.rows(); ++i) {
    const int d = determinantal_divisor(g, i);
    j.push_back(d - prev);
    prev = d;
  }
  return j;
}

/// sin of the angle between the lines through v and w.
template <class T>
double angle_distance(const std::vector<T>& v, const std::vector<T>& w) {
  T ip = T(0.0);
  double nv = 0.0, nw = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    ip += conj_(v[i]) * w[i];
    nv += mag(v[i]) * mag(v[i]);
    nw += mag(w[i]) * mag(w[i]);
  }
  const double c = mag(ip) * mag(ip) / (nv * nw);
  return std::sqrt(std::max(0.0, 1.0 - c));
}

inline int int_valuation(std::int64_t x, std::int64_t p) {
  if (x == 0) return 1 << 20;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

/// Projective distance of integer vectors over Q_p, by integer arithmetic:
/// p^-(min val of 2 x 2 minors - min val of v - min val of w).
inline double padic_int_distance(const std::vector<std::int64_t>& v, const std::vector<std::int64_t>& w,
                                 std::int64_t p) {
  int vv = 1 << 20, vw = 1 << 20, vm = 1 << 20;
  for (auto x : v) vv = std::min(vv, int_valuation(x, p));
  for (auto x : w) vw = std::min(vw, int_valuation(x, p));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) vm = std::min(vm, int_valuation(v[i] * w[j] - v[j] * w[i], p));
  if (vm >= (1 << 20)) return 0.0;
  return std::pow(static_cast<double>(p), -(vm - vv - vw));
}

}  // namespace oracle
