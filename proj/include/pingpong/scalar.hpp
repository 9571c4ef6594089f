#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <type_traits>

#include "pingpong/field.hpp"
#include "pingpong/padic.hpp"

namespace pingpong {

using Complex = std::complex<double>;

/// Uniform access to the three scalar types (double, std::complex<double>,
/// Padic). Generic code only talks to scalars through this trait.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool archimedean = true;
  static constexpr FieldKind kind = FieldKind::Real;
  static double abs(double x) { return std::abs(x); }
  static double conj(double x) { return x; }
  static bool is_zero(double x) { return x == 0.0; }
  static double from_rational(std::int64_t num, std::int64_t den, const FieldSpec&) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_double(double x, const FieldSpec&) { return x; }
  // Unit-modulus multiplier that turns x into a positive real.
  static double phase_fix(double x) { return x < 0 ? -1.0 : 1.0; }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool archimedean = true;
  static constexpr FieldKind kind = FieldKind::Complex;
  static double abs(const Complex& x) { return std::abs(x); }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
  static Complex from_rational(std::int64_t num, std::int64_t den, const FieldSpec&) {
    return {static_cast<double>(num) / static_cast<double>(den), 0.0};
  }
  static Complex from_double(double x, const FieldSpec&) { return {x, 0.0}; }
  static Complex phase_fix(const Complex& x) {
    const double m = std::abs(x);
    return m == 0.0 ? Complex(1.0, 0.0) : std::conj(x) / m;
  }
};

template <>
struct ScalarTraits<Padic> {
  static constexpr bool archimedean = false;
  static constexpr FieldKind kind = FieldKind::Padic;
  static double abs(const Padic& x) { return x.abs(); }
  static Padic conj(const Padic& x) { return x; }
  static bool is_zero(const Padic& x) { return x.is_zero(); }
  static Padic from_rational(std::int64_t num, std::int64_t den, const FieldSpec& f) {
    return Padic::from_rational(num, den, f.prime, f.precision);
  }
};

template <class T>
concept FieldScalar = requires { ScalarTraits<T>::archimedean; };

template <class T>
inline constexpr bool is_archimedean_v = ScalarTraits<T>::archimedean;

template <class T>
double abs_value(const T& x) {
  return ScalarTraits<T>::abs(x);
}

/// Zero that carries no precision information (safe to skip in sums).
template <class T>
bool is_exact_zero(const T& x) {
  if constexpr (is_archimedean_v<T>)
    return ScalarTraits<T>::is_zero(x);
  else
    return x.is_exact_zero();
}

template <class T>
T scalar_zero(const FieldSpec& f) {
  return ScalarTraits<T>::from_rational(0, 1, f);
}

template <class T>
T scalar_one(const FieldSpec& f) {
  return ScalarTraits<T>::from_rational(1, 1, f);
}

/// Valuation of a p-adic scalar; zero maps to Padic::kInfinite.
template <class T>
int valuation(const T& x, const FieldSpec& f) {
  if constexpr (std::is_same_v<T, Padic>) {
    if (f.kind != FieldKind::Padic) throw DomainError("valuation needs a p-adic field");
    return x.valuation();
  } else {
    (void)x;
    (void)f;
    throw DomainError("valuation is only defined over a p-adic field");
  }
}

/// Canonical norm: hermitian 2-norm over R and C, sup norm over Q_p.
template <class T>
double norm(std::span<const T> v) {
  if constexpr (is_archimedean_v<T>) {
    double scale = 0.0;
    for (const T& x : v) scale = std::max(scale, ScalarTraits<T>::abs(x));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (const T& x : v) {
      const double a = ScalarTraits<T>::abs(x) / scale;
      s += a * a;
    }
    return scale * std::sqrt(s);
  } else {
    double m = 0.0;
    for (const T& x : v) m = std::max(m, x.abs());
    return m;
  }
}

}  // namespace pingpong
