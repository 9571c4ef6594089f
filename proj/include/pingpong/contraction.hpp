#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "pingpong/cartan.hpp"
#include "pingpong/parallel.hpp"
#include "pingpong/random.hpp"

namespace pingpong {

/// Attracting point v_g, repulsive hyperplane H_g and the contraction
/// parameter epsilon: [g] maps the complement of the epsilon-neighbourhood
/// of H_g into the epsilon-ball around v_g. `ratio` is |a_2/a_1| of g.
template <class T>
struct ContractionCert {
  double epsilon = 1.0;
  ProjPoint<T> attracting;
  ProjHyperplane<T> repulsive;
  double ratio = 1.0;
};

/// (r, epsilon)-proximality: epsilon-contracting with d(v, H) >= r > 2 epsilon.
/// With `backward` present the certificate also covers g^{-1} (very proximal).
template <class T>
struct ProximalCert {
  double r = 0.0;
  double epsilon = 1.0;
  ContractionCert<T> forward;
  std::optional<ContractionCert<T>> backward;

  bool very() const { return backward.has_value(); }
};

/// |a_2(g) / a_1(g)|; exact power of p over Q_p.
template <class T>
double contraction_ratio(const CartanTriple<T>& c) {
  return cartan_ratios(c).front();
}

namespace detail {

template <class T>
double coefficient_from_ratio(double ratio) {
  if constexpr (is_archimedean_v<T>) {
    if (ratio >= 1.0 - tolerance()) return 1.0;
  } else {
    if (ratio >= 1.0) return 1.0;
  }
  return std::sqrt(ratio);
}

}  // namespace detail

/// Smallest epsilon certified through |a_2/a_1| <= epsilon^2, i.e.
/// sqrt(|a_2/a_1|). Returns 1 when a_1 and a_2 have equal modulus.
template <class T>
double contraction_coefficient(const CartanTriple<T>& c) {
  return detail::coefficient_from_ratio<T>(contraction_ratio(c));
}

template <class T>
double contraction_coefficient(const Matrix<T>& g) {
  return contraction_coefficient(cartan_decompose(g));
}

/// Certificate read off a Cartan decomposition, with no hypothesis on epsilon.
template <class T>
ContractionCert<T> cartan_certificate(const CartanTriple<T>& c) {
  const double ratio = contraction_ratio(c);
  return {detail::coefficient_from_ratio<T>(ratio), c.attracting_point(), c.repulsive_hyperplane(), ratio};
}

template <class T>
ContractionCert<T> contraction_data(const Matrix<T>& g) {
  const auto c = cartan_decompose(g);
  auto cert = cartan_certificate(c);
  if (!(cert.epsilon < 0.25))
    throw NotContracting("contraction coefficient " + std::to_string(cert.epsilon) + " is not below 1/4");
  return cert;
}

struct ContractionCheck {
  bool passed = true;
  std::size_t samples = 0;
  std::size_t tested = 0;      // samples outside the epsilon-neighbourhood of H
  std::size_t violations = 0;
  double worst = 0.0;          // largest d([g]P, v) among tested samples
};

inline constexpr std::size_t kSampleChunk = 1024;

/// Empirical check of the defining property of an epsilon-contracting map on
/// `samples` seeded random points. Deterministic in (seed, samples).
template <class T>
ContractionCheck check_contracting(const ContractionCert<T>& cert, const Matrix<T>& g, std::size_t samples,
                                   std::uint64_t seed, unsigned threads = 1) {
  const std::size_t n = g.rows();
  const FieldSpec f = g.field();
  const double eps = cert.epsilon;
  const double slack = is_archimedean_v<T> ? tolerance() : 0.0;
  const std::size_t chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  auto parts = map_chunks<ContractionCheck>(chunks, threads, [&](std::size_t chunk) {
    ContractionCheck part;
    Rng rng = derived_rng(seed, chunk);
    const std::size_t begin = chunk * kSampleChunk;
    const std::size_t end = std::min(samples, begin + kSampleChunk);
    for (std::size_t s = begin; s < end; ++s) {
      const auto p = random_point<T>(rng, n, f);
      ++part.samples;
      if (dist_to_hyperplane(p, cert.repulsive) < eps) continue;
      ++part.tested;
      const double d = proj_dist(act(g, p), cert.attracting);
      part.worst = std::max(part.worst, d);
      if (d > eps * (1.0 + slack)) ++part.violations;
    }
    return part;
  });
  ContractionCheck total;
  for (const auto& p : parts) {
    total.samples += p.samples;
    total.tested += p.tested;
    total.violations += p.violations;
    total.worst = std::max(total.worst, p.worst);
  }
  total.passed = total.violations == 0;
  return total;
}

template <class T>
bool verify_contracting(const ContractionCert<T>& cert, const Matrix<T>& g, std::size_t samples, std::uint64_t seed,
                        unsigned threads = 1) {
  return check_contracting(cert, g, samples, seed, threads).passed;
}

/// Converse bound: an epsilon-contracting [g] has |a_2/a_1| <= 4 eps^2
/// (archimedean) or eps^2 / |pi| = p eps^2 (Q_p).
inline double ratio_upper_bound_from_contraction(double epsilon, const FieldSpec& f) {
  if (!(epsilon >= 0.0 && epsilon < 0.25)) throw DomainError("epsilon must lie in [0, 1/4)");
  return f.archimedean() ? 4.0 * epsilon * epsilon : static_cast<double>(f.prime) * epsilon * epsilon;
}

/// If |a_2/a_1| <= eps then [g] is eps/r^2-Lipschitz outside the
/// r-neighbourhood of H_g; returns |a_2/a_1| / r^2.
template <class T>
double lipschitz_outside(const CartanTriple<T>& c, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("r must lie in (0, 1]");
  return contraction_ratio(c) / (r * r);
}

template <class T>
double lipschitz_outside(const Matrix<T>& g, double r) {
  return lipschitz_outside(cartan_decompose(g), r);
}

/// An eps-Lipschitz restriction of [g] to an open set forces |a_2/a_1| <= eps
/// over Q_p and <= eps / sqrt(1 - eps^2) over R, C.
inline double ratio_from_lipschitz(double epsilon, const FieldSpec& f) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in [0, 1)");
  return f.archimedean() ? epsilon / std::sqrt(1.0 - epsilon * epsilon) : epsilon;
}

/// Very-proximal certificate from the Cartan data of g and of g^{-1} (the
/// latter decomposed on its own). Absent unless both coefficients are below
/// 1/4 and r = min d(v, H) exceeds 2 eps with eps the larger coefficient.
template <class T>
std::optional<ProximalCert<T>> proximal_cert(const Matrix<T>& g) {
  const auto fwd = cartan_certificate(cartan_decompose(g));
  const auto bwd = cartan_certificate(cartan_decompose(sl_inverse(g)));
  const double eps = std::max(fwd.epsilon, bwd.epsilon);
  if (!(eps < 0.25)) return std::nullopt;
  const double r = std::min(dist_to_hyperplane(fwd.attracting, fwd.repulsive),
                            dist_to_hyperplane(bwd.attracting, bwd.repulsive));
  if (!(r > 2.0 * eps)) return std::nullopt;
  return ProximalCert<T>{r, eps, fwd, bwd};
}

/// Random point at distance about `scale` from `center` (at most `scale`
/// over Q_p).
template <class T>
ProjPoint<T> perturb(const ProjPoint<T>& center, double scale, Rng& rng, const FieldSpec& f) {
  Vec<T> v = center.rep();
  if constexpr (is_archimedean_v<T>) {
    const Vec<T> noise = random_vector<T>(rng, v.size(), f);
    const double nn = norm(noise);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += noise[i] * (scale / nn);
  } else {
    int k = 0;
    while (Padic::abs_from_valuation(k, f.prime) > scale) ++k;
    const Padic shift = Padic::power_of_p(k, f.prime, f.precision);
    for (auto& x : v) x = x + shift * random_padic_integer(rng, f);
  }
  return ProjPoint<T>(std::move(v));
}

/// Largest observed d([g]P, [g]Q) / d(P, Q) over `pairs` random pairs in the
/// ball of the given radius around `center`.
template <class T>
double empirical_lipschitz(const Matrix<T>& g, const ProjPoint<T>& center, double radius, std::size_t pairs,
                           Rng& rng) {
  const FieldSpec f = g.field();
  double worst = 0.0;
  for (std::size_t s = 0; s < pairs; ++s) {
    const auto p = perturb(center, radius, rng, f);
    const auto q = perturb(center, radius, rng, f);
    const double d = proj_dist(p, q);
    if (d <= 0.0) continue;
    worst = std::max(worst, proj_dist(act(g, p), act(g, q)) / d);
  }
  return worst;
}

}  // namespace pingpong
