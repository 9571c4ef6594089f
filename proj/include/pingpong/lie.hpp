#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "pingpong/matrix.hpp"

namespace pingpong {

template <class T>
using LieMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
LieMatrix<T> to_eigen(const Matrix<T>& g) {
  static_assert(is_archimedean_v<T>, "Lie computations need R or C");
  LieMatrix<T> m(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) m(i, j) = g(i, j);
  return m;
}

template <class T>
Matrix<T> from_eigen(const LieMatrix<T>& m, const FieldSpec& f) {
  Matrix<T> g(m.rows(), m.cols(), f);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) g(i, j) = m(i, j);
  return g;
}

template <class T>
double operator_norm(const LieMatrix<T>& m) {
  return Eigen::JacobiSVD<LieMatrix<T>>(m).singularValues()(0);
}

template <class T>
LieMatrix<T> bracket(const LieMatrix<T>& x, const LieMatrix<T>& y) {
  return x * y - y * x;
}

/// exp via Eigen's scaling-and-squaring Pade implementation.
template <class T>
LieMatrix<T> matrix_exp(const LieMatrix<T>& x) {
  return x.exp();
}

inline constexpr double kLogRemainder = 1e-12;

/// Principal logarithm of g with ||g - I|| < 1. Square roots are taken until
/// ||g - I|| <= 1/4, then the Mercator series is summed until its tail bound
/// ||A||^{K+1} / ((K+1)(1 - ||A||)), scaled by 2^s, is below 1e-12.
template <class T>
LieMatrix<T> matrix_log(const LieMatrix<T>& g) {
  if (g.rows() != g.cols()) throw DomainError("matrix_log needs a square matrix");
  const Eigen::Index n = g.rows();
  const LieMatrix<T> id = LieMatrix<T>::Identity(n, n);
  const double dist = operator_norm<T>(g - id);
  if (!std::isfinite(dist) || !(dist < 1.0))
    throw DomainError("matrix_log needs ||g - I|| < 1, got " + std::to_string(dist));

  LieMatrix<T> h = g;
  int s = 0;
  while (operator_norm<T>(h - id) > 0.25) {
    h = LieMatrix<T>(h.sqrt());
    ++s;
  }
  const LieMatrix<T> a = h - id;
  const double q = operator_norm<T>(a);
  const double scale = std::ldexp(1.0, s);
  LieMatrix<T> sum = LieMatrix<T>::Zero(n, n);
  LieMatrix<T> power = a;
  double qpow = q;
  for (int k = 1;; ++k) {
    sum += (k % 2 ? 1.0 : -1.0) / k * power;
    qpow *= q;
    if (q == 0.0 || scale * qpow / ((k + 1) * (1.0 - q)) <= kLogRemainder) break;
    if (k > 10000) throw NumericalFailure("logarithm series did not converge");
    power = power * a;
  }
  return scale * sum;
}

template <class T>
LieMatrix<T> matrix_log(const Matrix<T>& g) {
  return matrix_log<T>(to_eigen(g));
}

inline constexpr double kRankThreshold = 1e-8;
inline constexpr double kGapWarning = 10.0;

/// Basis of a Lie subalgebra of gl_n, orthonormal in the Frobenius inner
/// product. Over C the span is complex.
template <class T>
struct SubalgebraBasis {
  std::vector<LieMatrix<T>> basis;
  bool closed = false;
  std::vector<std::string> warnings;

  std::size_t dimension() const { return basis.size(); }
};

namespace detail {

template <class T>
using LieVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <class T>
LieVec<T> flatten(const LieMatrix<T>& m) {
  return Eigen::Map<const LieVec<T>>(m.data(), m.size());
}

template <class T>
LieMatrix<T> unflatten(const LieVec<T>& v, Eigen::Index n) {
  return Eigen::Map<const LieMatrix<T>>(v.data(), n, n);
}

// Appends to `basis` the directions of `candidates` not already in its span
// (singular values above kRankThreshold after projection). Returns the
// number added and records borderline rank decisions.
template <class T>
std::size_t extend_basis(std::vector<LieMatrix<T>>& basis, const std::vector<LieMatrix<T>>& candidates,
                         Eigen::Index n, std::vector<std::string>& warnings) {
  if (candidates.empty()) return 0;
  LieMatrix<T> r(n * n, static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    LieVec<T> v = flatten<T>(candidates[c]);
    // project twice for numerical orthogonality
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const LieVec<T> bv = flatten<T>(b);
        v -= bv.dot(v) * bv;
      }
    r.col(static_cast<Eigen::Index>(c)) = v;
  }
  Eigen::JacobiSVD<LieMatrix<T>> svd(r, Eigen::ComputeThinU);
  const auto sv = svd.singularValues();
  std::size_t keep = 0;
  while (keep < static_cast<std::size_t>(sv.size()) && sv(keep) > kRankThreshold) ++keep;
  const double kept = keep > 0 ? sv(keep - 1) : 0.0;
  const double dropped = keep < static_cast<std::size_t>(sv.size()) ? sv(keep) : 0.0;
  if (keep > 0 && kept < kGapWarning * std::max(dropped, kRankThreshold))
    warnings.push_back("borderline rank: kept singular value " + std::to_string(kept) + " vs " +
                       std::to_string(std::max(dropped, kRankThreshold)));
  else if (keep == 0 && dropped > kRankThreshold / kGapWarning)
    warnings.push_back("borderline rank: dropped singular value " + std::to_string(dropped));
  for (std::size_t k = 0; k < keep; ++k)
    basis.push_back(unflatten<T>(svd.matrixU().col(static_cast<Eigen::Index>(k)), n));
  return keep;
}

}  // namespace detail

/// Lie subalgebra generated by xs: the inputs are scaled to unit norm, then
/// brackets of basis pairs are adjoined until the span stops growing.
template <class T>
SubalgebraBasis<T> generated_subalgebra(const std::vector<LieMatrix<T>>& xs) {
  if (xs.empty()) throw DomainError("generated_subalgebra needs at least one element");
  const Eigen::Index n = xs.front().rows();
  SubalgebraBasis<T> out;
  std::vector<LieMatrix<T>> scaled;
  for (const auto& x : xs) {
    if (x.rows() != n || x.cols() != n) throw DomainError("Lie elements differ in size");
    const double nx = x.norm();
    scaled.push_back(nx > 0.0 ? LieMatrix<T>(x / nx) : x);
  }
  detail::extend_basis(out.basis, scaled, n, out.warnings);
  std::size_t checked = 0;  // pairs (i, j) with j < checked are done
  while (checked < out.basis.size()) {
    const std::size_t upto = out.basis.size();
    std::vector<LieMatrix<T>> brackets;
    for (std::size_t j = checked; j < upto; ++j)
      for (std::size_t i = 0; i < j; ++i) brackets.push_back(bracket<T>(out.basis[i], out.basis[j]));
    checked = upto;
    detail::extend_basis(out.basis, brackets, n, out.warnings);
  }
  out.closed = true;
  return out;
}

/// log x and log y generate sl_n.
template <class T>
bool dense_pair_test(const LieMatrix<T>& x, const LieMatrix<T>& y, std::vector<std::string>* warnings = nullptr) {
  const Eigen::Index n = x.rows();
  const auto lx = matrix_log<T>(x);
  const auto ly = matrix_log<T>(y);
  for (const auto* l : {&lx, &ly})
    if (std::abs(l->trace()) > tolerance()) throw DomainError("logarithm is not trace free; input is not in SL_n");
  const auto b = generated_subalgebra<T>({lx, ly});
  if (warnings) *warnings = b.warnings;
  return static_cast<Eigen::Index>(b.dimension()) == n * n - 1;
}

template <class T>
bool dense_pair_test(const Matrix<T>& x, const Matrix<T>& y, std::vector<std::string>* warnings = nullptr) {
  return dense_pair_test<T>(to_eigen(x), to_eigen(y), warnings);
}

template <class T>
struct DerivedSeries {
  std::vector<SubalgebraBasis<T>> terms;  // g_0 ... g_k
  std::size_t stabilization_index = 0;    // first k with g_k = g_{k+1}

  std::size_t final_dimension() const { return terms.back().dimension(); }
};

/// g_0 = B, g_{i+1} = [g_i, g_i], up to the first repetition.
template <class T>
DerivedSeries<T> derived_series(const SubalgebraBasis<T>& b) {
  if (!b.closed) throw PreconditionError("derived_series needs a bracket-closed basis");
  DerivedSeries<T> out;
  out.terms.push_back(b);
  for (;;) {
    const auto& cur = out.terms.back();
    SubalgebraBasis<T> next;
    next.closed = true;
    if (!cur.basis.empty()) {
      std::vector<LieMatrix<T>> brackets;
      for (std::size_t i = 0; i < cur.basis.size(); ++i)
        for (std::size_t j = i + 1; j < cur.basis.size(); ++j) brackets.push_back(bracket<T>(cur.basis[i], cur.basis[j]));
      detail::extend_basis(next.basis, brackets, cur.basis.front().rows(), next.warnings);
    }
    // [g, g] is contained in g, so equal dimension means equal
    if (next.dimension() == cur.dimension()) break;
    out.terms.push_back(std::move(next));
  }
  out.stabilization_index = out.terms.size() - 1;
  return out;
}

}  // namespace pingpong
