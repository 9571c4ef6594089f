#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace pingpong {

// Error hierarchy. Everything thrown by the library derives from Error so
// callers can separate library failures from std:: failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation called outside its mathematical domain (e.g. valuation on a
// real field, empty separating set).
struct DomainError : Error {
  using Error::Error;
};

// A p-adic computation ran out of known digits.
struct PrecisionExhausted : Error {
  using Error::Error;
};

// A stated hypothesis of a construction does not hold.
struct PreconditionError : Error {
  using Error::Error;
};

struct NotContracting : PreconditionError {
  using PreconditionError::PreconditionError;
};

// No element of a separating set satisfies the requested distance conditions.
struct NoSeparator : Error {
  using Error::Error;
};

struct NumericalFailure : Error {
  using Error::Error;
};

enum class FieldKind { Real, Complex, Padic };

inline const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::Real:
      return "real";
    case FieldKind::Complex:
      return "complex";
    case FieldKind::Padic:
      return "padic";
  }
  return "?";
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Which local field we compute over. For the p-adic case `precision` is the
/// number of base-p digits carried by every unit.
struct FieldSpec {
  FieldKind kind = FieldKind::Real;
  std::int64_t prime = 0;
  int precision = 0;

  static FieldSpec real() { return {FieldKind::Real, 0, 0}; }
  static FieldSpec complex() { return {FieldKind::Complex, 0, 0}; }
  static FieldSpec padic(std::int64_t p, int digits = 20) {
    FieldSpec f{FieldKind::Padic, p, digits};
    f.validate();
    return f;
  }

  bool archimedean() const { return kind != FieldKind::Padic; }

  // The constant d of the very-contracting construction: 4 over R and C,
  // 1/|pi| = p over Q_p.
  double proximality_constant() const {
    return archimedean() ? 4.0 : static_cast<double>(prime);
  }

  void validate() const {
    if (kind != FieldKind::Padic) return;
    if (!is_prime(prime)) throw DomainError("p-adic field needs a prime, got " + std::to_string(prime));
    if (precision < 1) throw DomainError("p-adic precision must be >= 1");
    // p^precision has to fit comfortably in 62 bits so products fit in 128.
    __int128 m = 1;
    for (int i = 0; i < precision; ++i) {
      m *= prime;
      if (m > (static_cast<__int128>(1) << 62))
        throw DomainError("p-adic modulus p^" + std::to_string(precision) + " exceeds 2^62");
    }
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Relative tolerance used by every equality-like archimedean check.
/// Defaults to 1e-9; the PINGPONG_TOL environment variable overrides it.
inline double tolerance() {
  static const double tol = [] {
    if (const char* env = std::getenv("PINGPONG_TOL")) {
      char* end = nullptr;
      double v = std::strtod(env, &end);
      if (end != env && v > 0.0 && v < 1.0) return v;
    }
    return 1e-9;
  }();
  return tol;
}

}  // namespace pingpong
