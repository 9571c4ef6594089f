#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pingpong/field.hpp"

namespace pingpong {

/**
 * Fixed-precision element of Q_p.
 *
 * A nonzero value is p^val * unit where unit is an integer mod p^rel that is
 * prime to p; `rel` is the number of known base-p digits. Bookkeeping is done
 * in absolute precision (val + rel): a sum is only known to the smaller of the
 * operands' absolute precisions, so cancellation of leading digits shows up
 * as a loss of relative digits.
 *
 * Zero comes in two flavours. An exact zero (literal 0, or a product with an
 * exact zero) and a zero known only modulo p^absprec, produced when every
 * known digit of a sum cancels. Dividing by either throws.
 *
 * A default-constructed Padic is an exact zero that is not yet bound to a
 * prime; it adopts the prime of whatever it is combined with.
 */
class Padic {
 public:
  static constexpr int kInfinite = std::numeric_limits<int>::max();

  Padic() = default;

  static Padic zero(std::int64_t p, int cap) {
    Padic z;
    z.p_ = p;
    z.cap_ = cap;
    return z;
  }

  /// Zero known modulo p^absprec.
  static Padic inexact_zero(int absprec, std::int64_t p, int cap) {
    Padic z = zero(p, cap);
    z.absprec_ = absprec;
    return z;
  }

  static Padic one(std::int64_t p, int cap) { return power_of_p(0, p, cap); }

  /// p^j with unit part exactly 1 (carried to full precision).
  static Padic power_of_p(int j, std::int64_t p, int cap) {
    Padic x = zero(p, cap);
    x.zero_ = false;
    x.val_ = j;
    x.unit_ = 1;
    x.rel_ = cap;
    return x;
  }

  static Padic from_int(std::int64_t n, std::int64_t p, int cap) { return from_rational(n, 1, p, cap); }

  static Padic from_rational(std::int64_t num, std::int64_t den, std::int64_t p, int cap) {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (num == 0) return zero(p, cap);
    int v = 0;
    while (num % p == 0) {
      num /= p;
      ++v;
    }
    while (den % p == 0) {
      den /= p;
      --v;
    }
    Padic x = zero(p, cap);
    x.zero_ = false;
    x.val_ = v;
    x.rel_ = cap;
    const std::int64_t m = pow_p(p, cap);
    x.unit_ = mulmod(reduce(num, m), inverse_mod(reduce(den, m), m), m);
    return x;
  }

  /// Value p^val * sum(digits[i] p^i); digits are little-endian base p and
  /// the number of digits given is the known relative precision.
  static Padic from_digits(int val, const std::vector<std::int64_t>& digits, std::int64_t p, int cap) {
    if (digits.empty()) throw DomainError("p-adic digit list is empty");
    if (static_cast<int>(digits.size()) > cap)
      throw DomainError("more p-adic digits than the field precision");
    if (digits[0] % p == 0) throw DomainError("leading p-adic digit must be a unit");
    Padic x = zero(p, cap);
    x.zero_ = false;
    x.val_ = val;
    x.rel_ = static_cast<int>(digits.size());
    std::int64_t acc = 0, place = 1;
    for (std::int64_t d : digits) {
      if (d < 0 || d >= p) throw DomainError("p-adic digit out of range");
      acc += d * place;
      place *= p;
    }
    x.unit_ = acc;
    return x;
  }

  /// Random element: valuation uniform in [vmin, vmax], uniform unit digits.
  template <class Rng>
  static Padic random(Rng& rng, std::int64_t p, int cap, int vmin, int vmax) {
    std::uniform_int_distribution<int> vd(vmin, vmax);
    std::uniform_int_distribution<std::int64_t> dd(0, p - 1);
    std::uniform_int_distribution<std::int64_t> ud(1, p - 1);
    std::vector<std::int64_t> digits(cap);
    digits[0] = ud(rng);
    for (int i = 1; i < cap; ++i) digits[i] = dd(rng);
    return from_digits(vd(rng), digits, p, cap);
  }

  std::int64_t prime() const { return p_; }
  int cap() const { return cap_; }
  bool is_zero() const { return zero_; }
  bool is_exact_zero() const { return zero_ && absprec_ == kInfinite; }

  /// Exponent j with |x| = p^-j; kInfinite for zero.
  int valuation() const { return zero_ ? kInfinite : val_; }
  int relative_precision() const { return zero_ ? 0 : rel_; }
  int absolute_precision() const { return zero_ ? absprec_ : val_ + rel_; }
  std::int64_t unit() const { return unit_; }

  std::vector<std::int64_t> unit_digits() const {
    std::vector<std::int64_t> out;
    std::int64_t u = unit_;
    for (int i = 0; i < rel_ && !zero_; ++i) {
      out.push_back(u % p_);
      u /= p_;
    }
    return out;
  }

  double abs() const {
    if (zero_) return 0.0;
    return abs_from_valuation(val_, p_);
  }

  /// p^-j as a double. Strictly decreasing in j, so comparisons of these
  /// values agree with comparisons of valuations.
  static double abs_from_valuation(int j, std::int64_t p) {
    if (j == kInfinite) return 0.0;
    const int a = j < 0 ? -j : j;
    if (a <= 22) {
      double m = 1.0;
      for (int i = 0; i < a; ++i) m *= static_cast<double>(p);
      if (m < 9007199254740992.0) return j >= 0 ? 1.0 / m : m;
    }
    return std::pow(static_cast<double>(p), -static_cast<double>(j));
  }

  Padic operator-() const {
    Padic r = *this;
    if (!zero_) r.unit_ = (pow_p(p_, rel_) - unit_) % pow_p(p_, rel_);
    return r;
  }

  friend Padic operator+(const Padic& x, const Padic& y) { return add(x, y); }
  friend Padic operator-(const Padic& x, const Padic& y) { return add(x, -y); }

  friend Padic operator*(const Padic& x, const Padic& y) {
    const auto [p, cap] = bind(x, y);
    if (x.is_exact_zero() || y.is_exact_zero()) return zero(p, cap);
    if (x.zero_ || y.zero_) {
      Padic z = zero(p, cap);
      z.absprec_ = x.absolute_precision_for_product() + y.absolute_precision_for_product();
      return z;
    }
    Padic r = zero(p, cap);
    r.zero_ = false;
    r.val_ = x.val_ + y.val_;
    r.rel_ = std::min(x.rel_, y.rel_);
    const std::int64_t m = pow_p(p, r.rel_);
    r.unit_ = mulmod(x.unit_ % m, y.unit_ % m, m);
    return r;
  }

  Padic inverse() const {
    if (is_exact_zero()) throw DomainError("p-adic division by zero");
    if (zero_) throw PrecisionExhausted("p-adic division by a value with no known nonzero digit");
    Padic r = *this;
    r.val_ = -val_;
    const std::int64_t m = pow_p(p_, rel_);
    r.unit_ = inverse_mod(unit_, m);
    return r;
  }

  friend Padic operator/(const Padic& x, const Padic& y) { return x * y.inverse(); }

  Padic& operator+=(const Padic& o) { return *this = *this + o; }
  Padic& operator-=(const Padic& o) { return *this = *this - o; }
  Padic& operator*=(const Padic& o) { return *this = *this * o; }

  /// Representation equality (same value to the same known precision).
  friend bool operator==(const Padic& x, const Padic& y) {
    if (x.zero_ || y.zero_) return x.zero_ && y.zero_;
    return x.val_ == y.val_ && x.rel_ == y.rel_ && x.unit_ == y.unit_;
  }

  /// Equality of values up to the precision both sides know.
  friend bool congruent(const Padic& x, const Padic& y) { return (x - y).is_zero(); }

  std::string to_string() const {
    std::ostringstream os;
    if (zero_) {
      if (absprec_ == kInfinite)
        os << "0";
      else
        os << "O(" << p_ << "^" << absprec_ << ")";
      return os.str();
    }
    os << p_ << "^" << val_ << "*" << unit_ << " (+O(" << p_ << "^" << (val_ + rel_) << "))";
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Padic& x) { return os << x.to_string(); }

  static std::int64_t pow_p(std::int64_t p, int k) {
    std::int64_t m = 1;
    for (int i = 0; i < k; ++i) m *= p;
    return m;
  }

 private:
  int absolute_precision_for_product() const { return zero_ ? absprec_ : val_; }

  static std::int64_t reduce(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
  }

  static std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
  }

  static std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    if (m == 1) return 0;
    std::int64_t g = m, x = 0, x1 = 1, a1 = reduce(a, m);
    while (a1 != 0) {
      const std::int64_t q = g / a1;
      std::int64_t t = g - q * a1;
      g = a1;
      a1 = t;
      t = x - q * x1;
      x = x1;
      x1 = t;
    }
    if (g != 1) throw DomainError("p-adic unit is not invertible");
    return reduce(x, m);
  }

  static std::pair<std::int64_t, int> bind(const Padic& x, const Padic& y) {
    if (x.p_ == 0) return {y.p_, y.cap_};
    if (y.p_ == 0 || (y.p_ == x.p_ && y.cap_ == x.cap_)) return {x.p_, x.cap_};
    throw DomainError("mixing p-adic numbers from different fields");
  }

  static Padic add(const Padic& x, const Padic& y) {
    const auto [p, cap] = bind(x, y);
    if (x.is_exact_zero()) return rebound(y, p, cap);
    if (y.is_exact_zero()) return rebound(x, p, cap);
    const int a = std::min(x.absolute_precision(), y.absolute_precision());
    if (x.zero_ || y.zero_) {
      const Padic& nz = x.zero_ ? y : x;
      if (nz.zero_ || nz.val_ >= a) {
        Padic z = zero(p, cap);
        z.absprec_ = a;
        return z;
      }
      Padic r = nz;
      r.rel_ = a - nz.val_;
      r.unit_ %= pow_p(p, r.rel_);
      return r;
    }
    const int vmin = std::min(x.val_, y.val_);
    const int k = a - vmin;
    const std::int64_t m = pow_p(p, k);
    const std::int64_t ux = shifted(x.unit_, x.val_ - vmin, k, p);
    const std::int64_t uy = shifted(y.unit_, y.val_ - vmin, k, p);
    std::int64_t s = (ux + uy) % m;
    if (s == 0) {
      Padic z = zero(p, cap);
      z.absprec_ = a;
      return z;
    }
    int drop = 0;
    while (s % p == 0) {
      s /= p;
      ++drop;
    }
    Padic r = zero(p, cap);
    r.zero_ = false;
    r.val_ = vmin + drop;
    r.rel_ = k - drop;
    r.unit_ = s;
    return r;
  }

  // unit * p^shift mod p^k
  static std::int64_t shifted(std::int64_t unit, int shift, int k, std::int64_t p) {
    if (shift >= k) return 0;
    const std::int64_t m = pow_p(p, k);
    return mulmod(unit % m, pow_p(p, shift), m);
  }

  static Padic rebound(Padic x, std::int64_t p, int cap) {
    x.p_ = p;
    x.cap_ = cap;
    return x;
  }

  std::int64_t p_ = 0;
  int cap_ = 0;
  bool zero_ = true;
  int val_ = 0;
  std::int64_t unit_ = 0;
  int rel_ = 0;
  int absprec_ = kInfinite;
};

inline int valuation(const Padic& x) { return x.valuation(); }

}  // namespace pingpong
