#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pingpong/contraction.hpp"
#include "pingpong/separation.hpp"

namespace pingpong {

/// Selection step of a construction found no admissible element of F; the
/// message names the requirement that failed.
struct SelectionFailure : NoSeparator {
  using NoSeparator::NoSeparator;
};

/// How a certified element was produced: the clause used and the constants
/// it was fed, so that the declared (r, epsilon) can be recomputed.
struct Derivation {
  std::string clause;  // "cartan", "proximal", "very-contracting", "very-proximal", "pingpong"
  double r_in = 0.0;
  double epsilon_in = 0.0;
  double C = 1.0;  // bi-Lipschitz constant of F (c for the ping-pong clause)
  double d = 0.0;  // proximality constant of the field
};

/// A matrix together with its inverse, a chosen attracting point/repulsive
/// hyperplane for each certified direction and declared (r, epsilon).
/// cert.r == 0 means only contraction is claimed.
template <class T>
struct CertifiedElement {
  Matrix<T> g;
  Matrix<T> g_inv;
  ProximalCert<T> cert;
  std::vector<std::size_t> choices;  // indices into F picked by the construction
  Derivation derivation;

  double epsilon() const { return cert.epsilon; }
  bool very() const { return cert.backward.has_value(); }
  const ProjPoint<T>& attracting() const { return cert.forward.attracting; }
  const ProjHyperplane<T>& repulsive() const { return cert.forward.repulsive; }
  const ProjPoint<T>& attracting_inv() const { return cert.backward->attracting; }
  const ProjHyperplane<T>& repulsive_inv() const { return cert.backward->repulsive; }
};

namespace detail {

template <class T>
ContractionCert<T> flag(double eps, ProjPoint<T> v, ProjHyperplane<T> h, const Matrix<T>& g) {
  return {eps, std::move(v), std::move(h), contraction_ratio(cartan_decompose(g))};
}

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace detail

/// g with its Cartan data: epsilon-contracting for epsilon = sqrt|a_2/a_1|.
/// With `very`, g^{-1} is decomposed too and epsilon is the larger of the two
/// coefficients.
template <class T>
CertifiedElement<T> cartan_element(const Matrix<T>& g, bool very = true) {
  CertifiedElement<T> e;
  e.g = g;
  e.g_inv = sl_inverse(g);
  e.cert.forward = cartan_certificate(cartan_decompose(g));
  e.cert.epsilon = e.cert.forward.epsilon;
  if (very) {
    e.cert.backward = cartan_certificate(cartan_decompose(e.g_inv));
    e.cert.epsilon = std::max(e.cert.epsilon, e.cert.backward->epsilon);
  }
  e.derivation = {"cartan", 0.0, e.cert.epsilon, 1.0, g.field().proximality_constant()};
  return e;
}

/// [f g] is (r, C eps)-proximal for the first f in F with d([f] v_g, H_g) > r.
/// Attracting point [f] v_g, repulsive hyperplane H_g.
template <class T>
CertifiedElement<T> make_proximal(const CertifiedElement<T>& x, const SeparatingSet<T>& F) {
  const double eps = x.epsilon();
  if (!(eps < F.r / (2.0 * F.C)))
    throw PreconditionError("make_proximal needs eps < r/(2C): eps=" + detail::fmt(eps) +
                            ", r/(2C)=" + detail::fmt(F.r / (2.0 * F.C)));
  for (std::size_t i = 0; i < F.size(); ++i) {
    const auto v = act(F.elements[i], x.attracting());
    if (!(dist_to_hyperplane(v, x.repulsive()) > F.r)) continue;
    CertifiedElement<T> out;
    out.g = F.elements[i] * x.g;
    out.g_inv = x.g_inv * F.inverses[i];
    out.cert.r = F.r;
    out.cert.epsilon = F.C * eps;
    out.cert.forward = detail::flag(out.cert.epsilon, v, x.repulsive(), out.g);
    out.choices = {i};
    out.derivation = {"proximal", F.r, eps, F.C, F.field().proximality_constant()};
    return out;
  }
  throw SelectionFailure("no f in F moves the attracting point more than r=" + detail::fmt(F.r) +
                         " from the repulsive hyperplane");
}

struct VeryContractingOptions {
  std::uint64_t seed = 0;
  int max_attempts = 32;
  double probe_noise = 1e-3;
};

/// [g f g^{-1}] is sqrt(2Cd)/r * eps very contracting for an f in F that
/// moves g^{-1} u (both by f and by f^{-1}) more than r away from H_g, where u
/// is a probe point in a region on which [g^{-1}] is sqrt(2)-Lipschitz.
///
/// The probe starts at the point of P^{n-1} farthest from the repulsive
/// hyperplane of g^{-1}, where [g^{-1}] contracts most; later attempts perturb
/// it with seeded noise. The returned element carries the Cartan flags of
/// g f g^{-1} and its inverse, and the construction checks that their
/// coefficients respect the declared epsilon.
template <class T>
CertifiedElement<T> make_very_contracting(const CertifiedElement<T>& x, const SeparatingSet<T>& F,
                                          const VeryContractingOptions& opt = {}) {
  const FieldSpec field = F.field();
  const double eps = x.epsilon();
  const double d = field.proximality_constant();
  const double bound = F.r / std::sqrt(2.0 * F.C * d);
  if (!(eps < bound))
    throw PreconditionError("make_very_contracting needs eps < r/sqrt(2Cd): eps=" + detail::fmt(eps) +
                            ", bound=" + detail::fmt(bound));
  const double eps_out = std::sqrt(2.0 * F.C * d) / F.r * eps;

  const auto inv_cartan = cartan_decompose(x.g_inv);
  const ProjPoint<T> center(sl_inverse(inv_cartan.k_prime).col_vec(0));
  Rng rng = derived_rng(opt.seed, 0);
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    const ProjPoint<T> u = attempt == 0 ? center : perturb(center, opt.probe_noise, rng, field);
    if (empirical_lipschitz(x.g_inv, u, opt.probe_noise, 16, rng) > std::sqrt(2.0)) continue;
    const auto w = act(x.g_inv, u);
    for (std::size_t i = 0; i < F.size(); ++i) {
      if (!(dist_to_hyperplane(act(F.elements[i], w), x.repulsive()) > F.r)) continue;
      if (!(dist_to_hyperplane(act(F.inverses[i], w), x.repulsive()) > F.r)) continue;
      CertifiedElement<T> out;
      out.g = x.g * F.elements[i] * x.g_inv;
      out.g_inv = x.g * F.inverses[i] * x.g_inv;
      const auto fwd = cartan_certificate(cartan_decompose(out.g));
      const auto bwd = cartan_certificate(cartan_decompose(out.g_inv));
      const double slack = is_archimedean_v<T> ? 1.0 + tolerance() : 1.0;
      if (fwd.epsilon > eps_out * slack || bwd.epsilon > eps_out * slack)
        throw NumericalFailure("g f g^-1 has Cartan coefficient " + detail::fmt(std::max(fwd.epsilon, bwd.epsilon)) +
                               " above the declared " + detail::fmt(eps_out));
      out.cert.epsilon = eps_out;
      out.cert.forward = {eps_out, fwd.attracting, fwd.repulsive, fwd.ratio};
      out.cert.backward = ContractionCert<T>{eps_out, bwd.attracting, bwd.repulsive, bwd.ratio};
      out.choices = {i};
      out.derivation = {"very-contracting", F.r, eps, F.C, d};
      return out;
    }
  }
  throw SelectionFailure("no f in F moves g^-1 u more than r=" + detail::fmt(F.r) +
                         " from H_g in both directions (after " + std::to_string(opt.max_attempts) +
                         " probe points)");
}

/// [g f] is (r/C, C eps)-very proximal for f in F with d([f] v_g, H_g) > r and
/// d([f^{-1}] v_{g^{-1}}, H_{g^{-1}}) > r. Flags: (v_g, f^{-1} H_g) forward,
/// (f^{-1} v_{g^{-1}}, H_{g^{-1}}) backward.
template <class T>
CertifiedElement<T> make_very_proximal(const CertifiedElement<T>& x, const SeparatingSet<T>& F) {
  if (!x.very()) throw PreconditionError("make_very_proximal needs a very contracting element");
  const double eps = x.epsilon();
  if (!(eps < F.r / (2.0 * F.C * F.C)))
    throw PreconditionError("make_very_proximal needs eps < r/(2C^2): eps=" + detail::fmt(eps) +
                            ", bound=" + detail::fmt(F.r / (2.0 * F.C * F.C)));
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (!(dist_to_hyperplane(act(F.elements[i], x.attracting()), x.repulsive()) > F.r)) continue;
    const auto back_point = act(F.inverses[i], x.attracting_inv());
    if (!(dist_to_hyperplane(back_point, x.repulsive_inv()) > F.r)) continue;
    CertifiedElement<T> out;
    out.g = x.g * F.elements[i];
    out.g_inv = F.inverses[i] * x.g_inv;
    out.cert.r = F.r / F.C;
    out.cert.epsilon = F.C * eps;
    out.cert.forward = detail::flag(out.cert.epsilon, x.attracting(), preimage(F.elements[i], x.repulsive()), out.g);
    out.cert.backward = detail::flag(out.cert.epsilon, back_point, x.repulsive_inv(), out.g_inv);
    out.choices = {i};
    out.derivation = {"very-proximal", F.r, eps, F.C, F.field().proximality_constant()};
    return out;
  }
  throw SelectionFailure("no f in F takes v_g more than r=" + detail::fmt(F.r) +
                         " from H_g while f^-1 takes v_{g^-1} more than r from H_{g^-1}");
}

/// One entry of the cross-separation table: d(attracting point of
/// x_i^{s_i}, repulsive hyperplane of x_j^{s_j}) for i != j.
struct CrossEntry {
  std::size_t i = 0;
  int si = 1;
  std::size_t j = 0;
  int sj = 1;
  double distance = 0.0;
};

/// Certificate that the generators freely generate a free group: every
/// generator is (r, eps)-very proximal with respect to its Cartan flags and
/// the flags of different generators are r-separated.
template <class T>
struct PingPongCert {
  std::vector<Matrix<T>> generators;
  double r = 0.0;
  double epsilon = 0.0;
  std::vector<ProximalCert<T>> elements;
  std::vector<CrossEntry> cross;
  // construction record (empty for hand-built certificates)
  double c = 1.0;
  double epsilon_gamma = 0.0;
  double r_set = 0.0;
  std::vector<std::size_t> h_choice;  // h_i as index into F
  std::vector<std::optional<std::size_t>> g_choice;  // g_i (absent for i = 1)
  std::vector<std::string> warnings;
};

namespace detail {

// Point/hyperplane data for x and x^{-1}, as carried through the induction.
template <class T>
struct Flags {
  ProjPoint<T> v, v_inv;
  ProjHyperplane<T> h, h_inv;
};

template <class T>
double min_dist(const std::vector<ProjPoint<T>>& pts, const std::vector<ProjHyperplane<T>>& hs) {
  double m = 1.0;
  for (const auto& p : pts)
    for (const auto& h : hs) m = std::min(m, dist_to_hyperplane(p, h));
  return m;
}

template <class T>
ProximalCert<T> cartan_proximal(const Matrix<T>& x, double r, double eps) {
  ProximalCert<T> pc;
  pc.r = r;
  pc.epsilon = eps;
  pc.forward = cartan_certificate(cartan_decompose(x));
  pc.backward = cartan_certificate(cartan_decompose(sl_inverse(x)));
  return pc;
}

template <class T>
std::vector<CrossEntry> cross_table(const std::vector<ProximalCert<T>>& els) {
  std::vector<CrossEntry> out;
  for (std::size_t i = 0; i < els.size(); ++i)
    for (std::size_t j = 0; j < els.size(); ++j) {
      if (i == j) continue;
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          const auto& a = si > 0 ? els[i].forward : *els[i].backward;
          const auto& b = sj > 0 ? els[j].forward : *els[j].backward;
          out.push_back({i, si, j, sj, dist_to_hyperplane(a.attracting, b.repulsive)});
        }
    }
  return out;
}

}  // namespace detail

/// Inductive assembly of a ping-pong m-tuple
///   x_1 = gamma a_1 h_1,  x_i = g_i gamma a_i h_i  (i >= 2)
/// with h_i, g_i in F. gamma must be eps-very contracting with
/// eps < r / (2 c^4), c the largest bi-Lipschitz constant of {a_i} and F.
/// The tuple is declared (r/c, c^3 eps)-very proximal; the returned
/// certificate carries the Cartan flags of each x_i and x_i^{-1}. Run
/// verify_pingpong on it to check the inequalities.
template <class T>
PingPongCert<T> build_pingpong_tuple(const std::vector<Matrix<T>>& a, const SeparatingSet<T>& F,
                                     const CertifiedElement<T>& gamma) {
  if (a.empty()) throw DomainError("build_pingpong_tuple needs at least one matrix");
  if (!gamma.very()) throw PreconditionError("gamma must be very contracting");
  const double r = F.r;
  const double eps = gamma.epsilon();
  double c = F.C;
  for (const auto& ai : a) c = std::max(c, bilip_constant(ai));
  const double bound = r / (2.0 * std::pow(c, 4));
  if (!(eps < bound))
    throw PreconditionError("build_pingpong_tuple needs eps < r/(2c^4): eps=" + detail::fmt(eps) +
                            ", bound=" + detail::fmt(bound));

  PingPongCert<T> cert;
  cert.c = c;
  cert.r_set = r;
  cert.epsilon_gamma = eps;
  cert.r = r / c;
  cert.epsilon = c * c * c * eps;
  if (bilip_constant(gamma.g) > c)
    cert.warnings.push_back("bi-Lipschitz constant of gamma (" + detail::fmt(bilip_constant(gamma.g)) +
                            ") exceeds c=" + detail::fmt(c));

  std::vector<detail::Flags<T>> done;
  std::vector<Matrix<T>> xs;

  auto gamma_times = [&](const Matrix<T>& ai) {
    // gamma a_i is c eps-very contracting with flags
    // (v_gamma, a_i^{-1} H_gamma) and (a_i^{-1} v_{gamma^-1}, H_{gamma^-1})
    CertifiedElement<T> y;
    y.g = gamma.g * ai;
    const Matrix<T> ai_inv = sl_inverse(ai);
    y.g_inv = ai_inv * gamma.g_inv;
    y.cert.epsilon = c * eps;
    y.cert.forward = {c * eps, gamma.attracting(), preimage(ai, gamma.repulsive()), 0.0};
    y.cert.backward = ContractionCert<T>{c * eps, act(ai_inv, gamma.attracting_inv()), gamma.repulsive_inv(), 0.0};
    return y;
  };

  // x_1 through the very-proximal clause
  {
    const auto y = gamma_times(a[0]);
    const auto x1 = make_very_proximal(y, F);
    cert.h_choice.push_back(x1.choices.front());
    cert.g_choice.push_back(std::nullopt);
    done.push_back({x1.attracting(), x1.attracting_inv(), x1.repulsive(), x1.repulsive_inv()});
    xs.push_back(x1.g);
  }

  for (std::size_t i = 1; i < a.size(); ++i) {
    const auto y = gamma_times(a[i]);
    std::vector<ProjPoint<T>> prev_points;
    std::vector<ProjHyperplane<T>> prev_planes;
    for (const auto& fl : done) {
      prev_points.push_back(fl.v);
      prev_points.push_back(fl.v_inv);
      prev_planes.push_back(fl.h);
      prev_planes.push_back(fl.h_inv);
    }

    // h_i: h^{-1} takes v_{y^-1} r-away from the previous repulsive
    // hyperplanes, and h takes the previous attracting points r-away from H_y.
    std::optional<std::size_t> h;
    for (std::size_t k = 0; k < F.size() && !h; ++k) {
      const auto moved = act(F.inverses[k], y.attracting_inv());
      if (!(detail::min_dist<T>({moved}, prev_planes) > r)) continue;
      std::vector<ProjPoint<T>> pushed;
      for (const auto& p : prev_points) pushed.push_back(act(F.elements[k], p));
      if (!(detail::min_dist<T>(pushed, {y.repulsive()}) > r)) continue;
      h = k;
    }
    if (!h)
      throw SelectionFailure("step " + std::to_string(i + 1) +
                             ": no h in F with h^-1 v((gamma a_i)^-1) and h(previous attracting points) "
                             "r-separated from the relevant repulsive hyperplanes");
    const Matrix<T>& hm = F.elements[*h];
    const Matrix<T>& hm_inv = F.inverses[*h];
    // z = y h: flags (v_y, h^-1 H_y) and (h^-1 v_{y^-1}, H_{y^-1})
    const ProjPoint<T> z_v = y.attracting();
    const ProjHyperplane<T> z_h = preimage(hm, y.repulsive());
    const ProjPoint<T> z_v_inv = act(hm_inv, y.attracting_inv());
    const ProjHyperplane<T> z_h_inv = y.repulsive_inv();

    // g_i: g takes v_z r-away from the previous repulsive hyperplanes and from
    // H_z; g^{-1} takes the previous attracting points and v_{z^-1} r-away
    // from H_{z^-1}.
    std::optional<std::size_t> gsel;
    for (std::size_t k = 0; k < F.size() && !gsel; ++k) {
      auto planes = prev_planes;
      planes.push_back(z_h);
      if (!(detail::min_dist<T>({act(F.elements[k], z_v)}, planes) > r)) continue;
      std::vector<ProjPoint<T>> pulled;
      for (const auto& p : prev_points) pulled.push_back(act(F.inverses[k], p));
      pulled.push_back(act(F.inverses[k], z_v_inv));
      if (!(detail::min_dist<T>(pulled, {z_h_inv}) > r)) continue;
      gsel = k;
    }
    if (!gsel)
      throw SelectionFailure("step " + std::to_string(i + 1) +
                             ": no g in F with g v(gamma a_i h_i) and g^-1 of the attracting points "
                             "r-separated from the relevant repulsive hyperplanes");
    const Matrix<T>& gm = F.elements[*gsel];
    const Matrix<T>& gm_inv = F.inverses[*gsel];
    // x = g z: flags (g v_z, H_z) and (v_{z^-1}, g H_{z^-1})
    done.push_back({act(gm, z_v), z_v_inv, z_h, preimage(gm_inv, z_h_inv)});
    xs.push_back(gm * y.g * hm);
    cert.h_choice.push_back(*h);
    cert.g_choice.push_back(*gsel);
  }

  cert.generators = xs;
  for (const auto& x : xs) cert.elements.push_back(detail::cartan_proximal(x, cert.r, cert.epsilon));
  cert.cross = detail::cross_table(cert.elements);
  return cert;
}

/// Certificate for a given tuple using its own Cartan data: epsilon is the
/// largest coefficient, r the smallest of all flag distances.
template <class T>
PingPongCert<T> pingpong_cert_from_generators(const std::vector<Matrix<T>>& gens) {
  if (gens.empty()) throw DomainError("no generators");
  PingPongCert<T> cert;
  cert.generators = gens;
  double eps = 0.0, r = 1.0;
  for (const auto& x : gens) {
    auto pc = detail::cartan_proximal(x, 0.0, 0.0);
    eps = std::max({eps, pc.forward.epsilon, pc.backward->epsilon});
    r = std::min({r, dist_to_hyperplane(pc.forward.attracting, pc.forward.repulsive),
                  dist_to_hyperplane(pc.backward->attracting, pc.backward->repulsive)});
    cert.elements.push_back(std::move(pc));
  }
  cert.cross = detail::cross_table(cert.elements);
  for (const auto& e : cert.cross) r = std::min(r, e.distance);
  cert.r = r;
  cert.epsilon = eps;
  for (auto& e : cert.elements) {
    e.r = r;
    e.epsilon = eps;
  }
  return cert;
}

struct PingPongCheck {
  bool passed = true;
  double gap = 0.0;  // r - 2 eps
  double min_proximal_distance = 1.0;
  double min_cross_distance = 1.0;
  double max_coefficient = 0.0;
  std::vector<std::string> failures;
};

/// Recomputes Cartan flags and coefficients of every generator and its
/// inverse from scratch and checks: eps < 1/4, r - 2 eps >= margin, every
/// coefficient <= eps, every d(v, H) >= r and every cross distance >= r.
/// `margin` defaults to the global tolerance over R/C and 0 over Q_p.
template <class T>
PingPongCheck verify_pingpong(const PingPongCert<T>& cert, std::optional<double> margin = std::nullopt) {
  const double mg = margin.value_or(is_archimedean_v<T> ? tolerance() : 0.0);
  PingPongCheck out;
  auto fail = [&](std::string why) {
    out.passed = false;
    out.failures.push_back(std::move(why));
  };
  out.gap = cert.r - 2.0 * cert.epsilon;
  if (cert.generators.empty()) fail("empty tuple");
  if (!(cert.epsilon < 0.25)) fail("declared epsilon " + detail::fmt(cert.epsilon) + " is not below 1/4");
  if (!(out.gap >= mg) || (mg == 0.0 && !(out.gap > 0.0)))
    fail("r=" + detail::fmt(cert.r) + " does not exceed 2 eps=" + detail::fmt(2.0 * cert.epsilon));

  std::vector<ProximalCert<T>> fresh;
  for (std::size_t i = 0; i < cert.generators.size(); ++i) {
    const auto pc = detail::cartan_proximal(cert.generators[i], cert.r, cert.epsilon);
    for (int s : {1, -1}) {
      const auto& side = s > 0 ? pc.forward : *pc.backward;
      const std::string name = "x" + std::to_string(i + 1) + (s > 0 ? "" : "^-1");
      out.max_coefficient = std::max(out.max_coefficient, side.epsilon);
      if (side.epsilon > cert.epsilon) fail(name + ": Cartan coefficient " + detail::fmt(side.epsilon) +
                                            " exceeds eps=" + detail::fmt(cert.epsilon));
      const double dvh = dist_to_hyperplane(side.attracting, side.repulsive);
      out.min_proximal_distance = std::min(out.min_proximal_distance, dvh);
      if (dvh < cert.r) fail(name + ": d(v, H)=" + detail::fmt(dvh) + " < r=" + detail::fmt(cert.r));
    }
    fresh.push_back(pc);
  }
  for (const auto& e : detail::cross_table(fresh)) {
    out.min_cross_distance = std::min(out.min_cross_distance, e.distance);
    if (e.distance < cert.r)
      fail("cross: d(v(x" + std::to_string(e.i + 1) + (e.si > 0 ? "" : "^-1") + "), H(x" + std::to_string(e.j + 1) +
           (e.sj > 0 ? "" : "^-1") + "))=" + detail::fmt(e.distance) + " < r=" + detail::fmt(cert.r));
  }
  return out;
}

/// Reduced word: (generator index, +1 or -1) letters, no letter next to its
/// inverse.
struct Word {
  std::vector<std::pair<std::size_t, int>> letters;

  std::size_t size() const { return letters.size(); }

  /// "aba⁻¹b⁻¹"
  std::string to_string() const {
    std::string s;
    for (const auto& [g, e] : letters) {
      s += static_cast<char>('a' + g);
      if (e < 0) s += "⁻¹";
    }
    return s;
  }

  /// "abAB": upper case for inverses.
  std::string to_ascii() const {
    std::string s;
    for (const auto& [g, e] : letters) s += static_cast<char>((e < 0 ? 'A' : 'a') + g);
    return s;
  }
};

/// M is a scalar multiple of the identity: within relative `tol` of the
/// largest entry over R/C, to known precision over Q_p.
template <class T>
bool is_projective_identity(const Matrix<T>& m, double tol = 1e-7) {
  const std::size_t n = m.rows();
  if constexpr (is_archimedean_v<T>) {
    const double scale = m.max_abs();
    if (scale == 0.0) return false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const T target = i == j ? m(0, 0) : T(0.0);
        if (ScalarTraits<T>::abs(m(i, j) - target) > tol * scale) return false;
      }
    return true;
  } else {
    (void)tol;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j ? !(m(i, i) - m(0, 0)).is_zero() : !m(i, j).is_zero()) return false;
      }
    return !m(0, 0).is_zero();
  }
}

/// Enumerates reduced words by length, and within a length in lexicographic
/// order of letters a < a^-1 < b < b^-1 < ...; returns the first word whose
/// matrix is a scalar (a relation in PSL_n), or nothing up to max_len.
template <class T>
std::optional<Word> freeness_falsifier(const std::vector<Matrix<T>>& gens, std::size_t max_len,
                                       double tol = 1e-7) {
  if (max_len < 1) throw DomainError("max_len must be at least 1");
  if (gens.empty()) return std::nullopt;
  struct Node {
    Word word;
    Matrix<T> product;
  };
  std::vector<std::pair<std::pair<std::size_t, int>, Matrix<T>>> letters;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    letters.push_back({{g, 1}, gens[g]});
    letters.push_back({{g, -1}, sl_inverse(gens[g])});
  }
  std::vector<Node> level;
  level.push_back({Word{}, Matrix<T>::identity(gens.front().rows(), gens.front().field())});
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Node> next;
    for (const auto& node : level) {
      for (const auto& [letter, mat] : letters) {
        if (!node.word.letters.empty()) {
          const auto& last = node.word.letters.back();
          if (last.first == letter.first && last.second == -letter.second) continue;
        }
        Node child{node.word, node.product * mat};
        child.word.letters.push_back(letter);
        if (is_projective_identity(child.product, tol)) return child.word;
        if (len < max_len) next.push_back(std::move(child));
      }
    }
    level = std::move(next);
  }
  return std::nullopt;
}

}  // namespace pingpong
