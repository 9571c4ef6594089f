#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pingpong/matrix.hpp"

namespace pingpong {

namespace detail {

// First coordinate whose modulus exceeds this (relative to a unit-norm
// representative) fixes the phase of an archimedean representative.
inline constexpr double kPhaseThreshold = 1e-6;

template <class T>
Vec<T> canonical_rep(Vec<T> v) {
  if constexpr (is_archimedean_v<T>) {
    const double n = norm<T>(v);
    if (n == 0.0 || !std::isfinite(n)) throw DomainError("zero vector has no projective class");
    for (auto& x : v) x /= n;
    for (const auto& x : v) {
      if (ScalarTraits<T>::abs(x) > kPhaseThreshold) {
        const T phase = ScalarTraits<T>::phase_fix(x);
        for (auto& y : v) y *= phase;
        break;
      }
    }
    return v;
  } else {
    std::size_t best = v.size();
    int best_val = Padic::kInfinite;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const int val = v[i].valuation();
      if (val < best_val) {
        best_val = val;
        best = i;
      }
    }
    if (best == v.size()) throw DomainError("zero vector has no projective class");
    const Padic inv = v[best].inverse();
    for (auto& x : v) x = x * inv;
    return v;
  }
}

}  // namespace detail

/// A point of P^{n-1}(k), stored through a canonical unit-norm representative:
/// over R/C the first non-negligible coordinate is positive real; over Q_p
/// the first coordinate of least valuation equals 1.
template <class T>
class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(Vec<T> v) : rep_(detail::canonical_rep(std::move(v))) {}

  static ProjPoint basis(std::size_t n, std::size_t i, const FieldSpec& f) {
    Vec<T> v(n, scalar_zero<T>(f));
    v.at(i) = scalar_one<T>(f);
    return ProjPoint(std::move(v));
  }

  const Vec<T>& rep() const { return rep_; }
  std::size_t dim() const { return rep_.size(); }

 private:
  Vec<T> rep_;
};

/// Projective hyperplane [ker f], stored through its normalized linear form.
template <class T>
class ProjHyperplane {
 public:
  ProjHyperplane() = default;
  explicit ProjHyperplane(Vec<T> form) : form_(detail::canonical_rep(std::move(form))) {}

  /// ker of the i-th coordinate function.
  static ProjHyperplane coordinate(std::size_t n, std::size_t i, const FieldSpec& f) {
    return ProjHyperplane(ProjPoint<T>::basis(n, i, f).rep());
  }

  const Vec<T>& form() const { return form_; }
  std::size_t dim() const { return form_.size(); }

 private:
  Vec<T> form_;
};

template <class T>
double norm(const Vec<T>& v) {
  return norm<T>(std::span<const T>(v));
}

/// Norm of v ^ w in the basis e_i ^ e_j (i < j, lexicographic).
template <class T>
double wedge_norm(std::span<const T> v, std::span<const T> w) {
  if (v.size() != w.size()) throw DomainError("wedge of vectors of different lengths");
  const std::size_t n = v.size();
  if constexpr (is_archimedean_v<T>) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = ScalarTraits<T>::abs(v[i] * w[j] - v[j] * w[i]);
        s += a * a;
      }
    return std::sqrt(s);
  } else {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m = std::max(m, (v[i] * w[j] - v[j] * w[i]).abs());
    return m;
  }
}

template <class T>
double wedge_norm(const Vec<T>& v, const Vec<T>& w) {
  return wedge_norm<T>(std::span<const T>(v), std::span<const T>(w));
}

/// Standard metric d([v],[w]) = |v ^ w| / (|v| |w|).
template <class T>
double proj_dist(const ProjPoint<T>& p, const ProjPoint<T>& q) {
  if (p.dim() != q.dim()) throw DomainError("points live in different projective spaces");
  const double d = wedge_norm(p.rep(), q.rep()) / (norm(p.rep()) * norm(q.rep()));
  if constexpr (is_archimedean_v<T>) return std::clamp(d, 0.0, 1.0);
  return d;
}

/// Over Q_p the metric takes values p^-j; this returns j (kInfinite when the
/// points coincide to known precision). Canonical representatives have norm 1
/// so j is just the least valuation of a wedge coefficient.
inline int proj_dist_exponent(const ProjPoint<Padic>& p, const ProjPoint<Padic>& q) {
  if (p.dim() != q.dim()) throw DomainError("points live in different projective spaces");
  const auto& v = p.rep();
  const auto& w = q.rep();
  int j = Padic::kInfinite;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b) j = std::min(j, (v[a] * w[b] - v[b] * w[a]).valuation());
  return j;
}

template <class T>
T evaluate_form(std::span<const T> form, std::span<const T> v) {
  if (form.size() != v.size()) throw DomainError("form and vector have different lengths");
  T s{};
  for (std::size_t i = 0; i < v.size(); ++i) s = s + form[i] * v[i];
  return s;
}

/// d([v], [ker f]) = |f(v)| / (|f| |v|).
template <class T>
double dist_to_hyperplane(const ProjPoint<T>& p, const ProjHyperplane<T>& h) {
  if (p.dim() != h.dim()) throw DomainError("point and hyperplane live in different spaces");
  const T fv = evaluate_form<T>(h.form(), p.rep());
  const double d = ScalarTraits<T>::abs(fv) / (norm(h.form()) * norm(p.rep()));
  if constexpr (is_archimedean_v<T>) return std::clamp(d, 0.0, 1.0);
  return d;
}

/// [g] acting on a point.
template <class T>
ProjPoint<T> act(const Matrix<T>& g, const ProjPoint<T>& p) {
  return ProjPoint<T>(apply<T>(g, p.rep()));
}

/// g^{-1}(H) for H = [ker f]: the hyperplane ker(f o g).
template <class T>
ProjHyperplane<T> preimage(const Matrix<T>& g, const ProjHyperplane<T>& h) {
  return ProjHyperplane<T>(pull_back<T>(h.form(), g));
}

/// g(H), given g^{-1}.
template <class T>
ProjHyperplane<T> image(const Matrix<T>& g_inverse, const ProjHyperplane<T>& h) {
  return preimage(g_inverse, h);
}

/// Archimedean: same point up to `tol` in the metric. Q_p: identical
/// canonical representatives to known precision.
template <class T>
bool same_point(const ProjPoint<T>& p, const ProjPoint<T>& q, double tol = tolerance()) {
  if constexpr (is_archimedean_v<T>)
    return proj_dist(p, q) <= tol;
  else
    return proj_dist_exponent(p, q) == Padic::kInfinite;
}

}  // namespace pingpong
