#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pingpong/projective.hpp"

namespace pingpong {

/**
 * g = k * diag(a) * k_prime with k, k_prime in the maximal compact subgroup
 * (SO_n(R), SU_n(C) or SL_n(Z_p)) and |a_1| >= ... >= |a_n|.
 *
 * Over R and C the a_i are the singular values. Over Q_p they are exact
 * powers p^{j_i} with j_1 <= ... <= j_n and sum j_i = 0.
 */
template <class T>
struct CartanTriple {
  Matrix<T> k;
  Vec<T> a;
  Matrix<T> k_prime;
  // Q_p only: digits lost while pivoting (field precision minus the least
  // relative precision left in k, k_prime).
  int precision_loss = 0;

  std::size_t n() const { return a.size(); }
  double abs_a(std::size_t i) const { return ScalarTraits<T>::abs(a.at(i)); }

  /// Exponents j_i with a_i = p^{j_i} (Q_p only).
  std::vector<int> exponents() const {
    std::vector<int> j;
    if constexpr (!is_archimedean_v<T>)
      for (const auto& x : a) j.push_back(x.valuation());
    return j;
  }

  Matrix<T> diagonal() const { return Matrix<T>::diagonal(a, k.field()); }
  Matrix<T> reconstruct() const { return k * diagonal() * k_prime; }

  /// [k e_1]
  ProjPoint<T> attracting_point() const { return ProjPoint<T>(k.col_vec(0)); }
  /// [span{k_prime^{-1} e_i : i >= 2}] = ker of the first row of k_prime.
  ProjHyperplane<T> repulsive_hyperplane() const { return ProjHyperplane<T>(k_prime.row_vec(0)); }
};

namespace detail {

template <class T>
using EigenMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
CartanTriple<T> cartan_archimedean(const Matrix<T>& g) {
  const std::size_t n = g.rows();
  EigenMat<T> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = g(i, j);
  if (!m.allFinite()) throw NumericalFailure("matrix has non-finite entries");
  Eigen::JacobiSVD<EigenMat<T>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  EigenMat<T> u = svd.matrixU();
  EigenMat<T> v = svd.matrixV();
  const auto s = svd.singularValues();
  if (!u.allFinite() || !v.allFinite() || !s.allFinite() || s(n - 1) <= 0.0)
    throw NumericalFailure("SVD failed; the input is numerically singular or ill-conditioned");

  // Column convention: the first entry of largest modulus of each column of
  // k is positive real. Compensating phase goes into k_prime.
  for (std::size_t c = 0; c < n; ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(n); ++r) {
      const double a = std::abs(u(r, c));
      if (a > best_abs * (1.0 + 1e-12)) {
        best_abs = a;
        best = r;
      }
    }
    const T phase = ScalarTraits<T>::phase_fix(u(best, c));
    u.col(c) *= phase;
    v.col(c) *= phase;
  }
  // Determinant one: absorbed into the last column (the least-relevant
  // direction for the attracting point).
  const T det_u = u.determinant();
  if constexpr (std::is_same_v<T, double>) {
    if (det_u < 0) {
      u.col(n - 1) *= -1.0;
      v.col(n - 1) *= -1.0;
    }
  } else {
    const T fix = std::conj(det_u) / std::abs(det_u);
    u.col(n - 1) *= fix;
    v.col(n - 1) *= fix;
  }

  CartanTriple<T> out{Matrix<T>(n, n, g.field()), Vec<T>(n), Matrix<T>(n, n, g.field()), 0};
  const EigenMat<T> vh = v.adjoint();
  for (std::size_t i = 0; i < n; ++i) {
    out.a[i] = T(s(i));
    for (std::size_t j = 0; j < n; ++j) {
      out.k(i, j) = u(i, j);
      out.k_prime(i, j) = vh(i, j);
    }
  }
  return out;
}

// Smith normal form over Z_p. Maintains g = left * work * right with
// left, right in SL_n(Z_p) throughout.
inline CartanTriple<Padic> cartan_padic(const Matrix<Padic>& g, int margin) {
  const std::size_t n = g.rows();
  const FieldSpec& f = g.field();
  int min_rel = Padic::kInfinite;
  for (const auto& x : g.data())
    if (!x.is_zero()) min_rel = std::min(min_rel, x.relative_precision());
  if (min_rel == Padic::kInfinite) throw DomainError("zero matrix is not in SL_n");
  if (min_rel < static_cast<int>(n) + margin)
    throw PrecisionExhausted("input carries " + std::to_string(min_rel) + " p-adic digits; need at least " +
                             std::to_string(n + margin));

  Matrix<Padic> work = g;
  Matrix<Padic> left = Matrix<Padic>::identity(n, f);
  Matrix<Padic> right = Matrix<Padic>::identity(n, f);

  for (std::size_t t = 0; t < n; ++t) {
    // entry of least valuation, row-major tie break
    std::size_t pr = n, pc = n;
    int best = Padic::kInfinite;
    for (std::size_t i = t; i < n; ++i)
      for (std::size_t j = t; j < n; ++j) {
        const int v = work(i, j).valuation();
        if (v < best) {
          best = v;
          pr = i;
          pc = j;
        }
      }
    if (pr == n) throw PrecisionExhausted("pivoting consumed every tracked digit (matrix singular to precision)");

    if (pr != t) {
      // rows: new t = old pr, new pr = -old t; left absorbs the inverse
      for (std::size_t j = 0; j < n; ++j) {
        Padic old_t = work(t, j);
        work(t, j) = work(pr, j);
        work(pr, j) = -old_t;
      }
      for (std::size_t i = 0; i < n; ++i) {
        Padic old_t = left(i, t);
        left(i, t) = left(i, pr);
        left(i, pr) = -old_t;
      }
    }
    if (pc != t) {
      for (std::size_t i = 0; i < n; ++i) {
        Padic old_t = work(i, t);
        work(i, t) = work(i, pc);
        work(i, pc) = -old_t;
      }
      for (std::size_t j = 0; j < n; ++j) {
        Padic old_t = right(t, j);
        right(t, j) = right(pc, j);
        right(pc, j) = -old_t;
      }
    }

    const Padic pivot_inv = work(t, t).inverse();
    for (std::size_t i = t + 1; i < n; ++i) {
      if (work(i, t).is_exact_zero()) continue;
      const Padic c = work(i, t) * pivot_inv;  // valuation >= 0
      for (std::size_t j = t; j < n; ++j) work(i, j) -= c * work(t, j);
      work(i, t) = Padic::zero(f.prime, f.precision);
      for (std::size_t r = 0; r < n; ++r) left(r, t) += c * left(r, i);
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      if (work(t, j).is_exact_zero()) continue;
      const Padic c = work(t, j) * pivot_inv;
      for (std::size_t i = t; i < n; ++i) work(i, j) -= c * work(i, t);
      work(t, j) = Padic::zero(f.prime, f.precision);
      for (std::size_t s = 0; s < n; ++s) right(t, s) += c * right(j, s);
    }
  }

  CartanTriple<Padic> out{left, Vec<Padic>(n), right, 0};
  for (std::size_t t = 0; t < n; ++t) {
    const Padic& d = work(t, t);
    out.a[t] = Padic::power_of_p(d.valuation(), f.prime, f.precision);
    const Padic unit = d * out.a[t].inverse();
    for (std::size_t j = 0; j < n; ++j) out.k_prime(t, j) = unit * out.k_prime(t, j);
  }
  int least = f.precision;
  for (const Matrix<Padic>* m : {&out.k, &out.k_prime})
    for (const auto& x : m->data())
      if (!x.is_zero()) least = std::min(least, x.relative_precision());
  out.precision_loss = f.precision - least;
  return out;
}

}  // namespace detail

/// KAK decomposition. `padic_margin` is the number of digits beyond n the
/// p-adic input must carry before pivoting is attempted.
template <class T>
CartanTriple<T> cartan_decompose(const Matrix<T>& g, int padic_margin = 2) {
  if (!g.square() || g.rows() < 2) throw DomainError("Cartan decomposition needs a square matrix of size >= 2");
  if constexpr (is_archimedean_v<T>) {
    (void)padic_margin;
    return detail::cartan_archimedean(g);
  } else {
    return detail::cartan_padic(g, padic_margin);
  }
}

/// Lexicographically ordered i-element subsets of {0..n-1}.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t i) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(i);
  std::iota(cur.begin(), cur.end(), 0);
  if (i == 0 || i > n) return out;
  for (;;) {
    out.push_back(cur);
    std::size_t pos = i;
    while (pos > 0 && cur[pos - 1] == n - i + pos - 1) --pos;
    if (pos == 0) break;
    ++cur[pos - 1];
    for (std::size_t q = pos; q < i; ++q) cur[q] = cur[q - 1] + 1;
  }
  return out;
}

/// Matrix of the i-th exterior power on the basis e_I (lex-ordered subsets);
/// entries are the i x i minors of g.
template <class T>
Matrix<T> exterior_power(const Matrix<T>& g, std::size_t i) {
  const std::size_t n = g.rows();
  if (!g.square() || i < 1 || i >= n) throw DomainError("exterior power degree out of range");
  const auto sets = subsets(n, i);
  Matrix<T> out(sets.size(), sets.size(), g.field());
  Matrix<T> minor(i, i, g.field());
  for (std::size_t r = 0; r < sets.size(); ++r)
    for (std::size_t c = 0; c < sets.size(); ++c) {
      for (std::size_t a = 0; a < i; ++a)
        for (std::size_t b = 0; b < i; ++b) minor(a, b) = g(sets[r][a], sets[c][b]);
      out(r, c) = determinant(minor);
    }
  return out;
}

/// |a_1/a_n|^2: a Lipschitz constant for both [g] and [g^{-1}] on P^{n-1}.
template <class T>
double bilip_constant(const CartanTriple<T>& c) {
  if constexpr (is_archimedean_v<T>) {
    const double q = c.abs_a(0) / c.abs_a(c.n() - 1);
    return q * q;
  } else {
    const auto j = c.exponents();
    return Padic::abs_from_valuation(2 * (j.front() - j.back()), c.k.field().prime);
  }
}

template <class T>
double bilip_constant(const Matrix<T>& g) {
  return bilip_constant(cartan_decompose(g));
}

/// |a_{i+1}/a_i| for i = 0..n-2.
template <class T>
std::vector<double> cartan_ratios(const CartanTriple<T>& c) {
  std::vector<double> r;
  for (std::size_t i = 0; i + 1 < c.n(); ++i) {
    if constexpr (is_archimedean_v<T>) {
      r.push_back(c.abs_a(i + 1) / c.abs_a(i));
    } else {
      const auto j = c.exponents();
      r.push_back(Padic::abs_from_valuation(j[i + 1] - j[i], c.k.field().prime));
    }
  }
  return r;
}

}  // namespace pingpong
