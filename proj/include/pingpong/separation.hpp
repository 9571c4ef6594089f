#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "pingpong/cartan.hpp"
#include "pingpong/parallel.hpp"
#include "pingpong/random.hpp"

namespace pingpong {

/// Finite set F with its separation parameters. `r` is whatever margin the
/// caller claims (certified or estimated); `C` is the uniform bi-Lipschitz
/// constant max |a_1/a_n|^2 over F.
template <class T>
struct SeparatingSet {
  std::vector<Matrix<T>> elements;
  std::vector<Matrix<T>> inverses;
  int m = 1;
  double r = 0.0;
  double C = 1.0;

  static SeparatingSet make(std::vector<Matrix<T>> elems, int m, double r) {
    if (elems.empty()) throw DomainError("separating set is empty");
    if (m < 1) throw DomainError("separating set needs m >= 1");
    if (!(r > 0.0)) throw DomainError("separation radius must be positive");
    SeparatingSet s;
    s.m = m;
    s.r = r;
    s.C = 1.0;
    for (auto& e : elems) {
      s.C = std::max(s.C, bilip_constant(e));
      s.inverses.push_back(inverse(e));
      s.elements.push_back(std::move(e));
    }
    return s;
  }

  std::size_t size() const { return elements.size(); }
  std::size_t dim() const { return elements.front().rows(); }
  const FieldSpec& field() const { return elements.front().field(); }
};

template <class T>
struct Configuration {
  std::vector<ProjPoint<T>> points;
  std::vector<ProjHyperplane<T>> hyperplanes;
};

struct Separator {
  std::size_t index = 0;
  double margin = 0.0;
};

/// min over i, j of d(gamma v_i, H_j) and d(gamma^{-1} v_i, H_j).
template <class T>
double separation_margin(const Matrix<T>& gamma, const Matrix<T>& gamma_inv, const Configuration<T>& cfg) {
  double m = 1.0;
  for (const auto& v : cfg.points) {
    const auto fv = act(gamma, v);
    const auto bv = act(gamma_inv, v);
    for (const auto& h : cfg.hyperplanes) m = std::min({m, dist_to_hyperplane(fv, h), dist_to_hyperplane(bv, h)});
  }
  return m;
}

/// The element of F with the largest margin on cfg; ties go to the earlier
/// element.
template <class T>
Separator best_separator(const SeparatingSet<T>& F, const Configuration<T>& cfg) {
  if (F.elements.empty()) throw DomainError("separating set is empty");
  const std::size_t cap = 2 * static_cast<std::size_t>(F.m);
  if (cfg.points.size() > cap || cfg.hyperplanes.size() > cap)
    throw DomainError("configuration has more than 2m points or hyperplanes");
  Separator best{0, -1.0};
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double m = separation_margin(F.elements[i], F.inverses[i], cfg);
    if (m > best.margin) best = {i, m};
  }
  return best;
}

/// Some gamma in F separates cfg with margin strictly above F.r.
template <class T>
bool verify_separating_for(const SeparatingSet<T>& F, const Configuration<T>& cfg) {
  return best_separator(F, cfg).margin > F.r;
}

/// Random hyperplane through the point v.
template <class T>
ProjHyperplane<T> random_hyperplane_through(const ProjPoint<T>& v, Rng& rng, const FieldSpec& f) {
  const auto& rep = v.rep();
  for (;;) {
    Vec<T> g = random_vector<T>(rng, rep.size(), f);
    const T gv = evaluate_form<T>(g, rep);
    if constexpr (is_archimedean_v<T>) {
      // rep has unit norm: subtract g(v) * conj(rep)^T
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= gv * ScalarTraits<T>::conj(rep[i]);
    } else {
      // the canonical rep has a coordinate equal to 1
      std::size_t anchor = 0;
      while (!congruent(rep[anchor], Padic::one(f.prime, f.precision))) ++anchor;
      g[anchor] -= gv;
    }
    if (norm(g) > 0.0) return ProjHyperplane<T>(std::move(g));
  }
}

/// Random configuration of 2m points and 2m hyperplanes. Each hyperplane
/// passes through one of the points with probability 1/2, which is where
/// separation is hardest.
template <class T>
Configuration<T> random_configuration(Rng& rng, std::size_t n, int m, const FieldSpec& f) {
  Configuration<T> cfg;
  const std::size_t k = 2 * static_cast<std::size_t>(m);
  for (std::size_t i = 0; i < k; ++i) cfg.points.push_back(random_point<T>(rng, n, f));
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  for (std::size_t i = 0; i < k; ++i) {
    if (coin(rng))
      cfg.hyperplanes.push_back(random_hyperplane_through(cfg.points[pick(rng)], rng, f));
    else
      cfg.hyperplanes.push_back(random_hyperplane<T>(rng, n, f));
  }
  return cfg;
}

struct RadiusEstimate {
  double r = 0.0;              // min over trials of the best margin
  bool separating = true;      // false if some trial had margin 0 for all of F
  std::size_t worst_trial = 0;
  std::vector<std::size_t> wins;  // per element: trials where it was the best separator
};

inline constexpr std::size_t kTrialChunk = 256;

/// Monte-Carlo estimate of the separation radius of F: the minimum over
/// `trials` sampled configurations of the best margin. This is an upper
/// estimate of the true infimum, never a certified bound. Trial t is drawn
/// from its own stream derived from (seed, t), so the first k trials are the
/// same for any larger trial count.
template <class T>
RadiusEstimate estimate_radius(const std::vector<Matrix<T>>& elements, int m, std::size_t trials,
                               std::uint64_t seed, unsigned threads = 1) {
  if (trials < 1) throw DomainError("estimate_radius needs at least one trial");
  // r only matters for verify_separating_for; any positive placeholder will do
  const auto F = SeparatingSet<T>::make(elements, m, 1.0);
  const std::size_t n = F.dim();
  const FieldSpec f = F.field();
  const double zero_tol = is_archimedean_v<T> ? tolerance() : 0.0;

  struct Part {
    double r = std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    bool zero = false;
    std::vector<std::size_t> wins;
  };
  const std::size_t chunks = (trials + kTrialChunk - 1) / kTrialChunk;
  auto parts = map_chunks<Part>(chunks, threads, [&](std::size_t chunk) {
    Part part;
    part.wins.assign(F.size(), 0);
    const std::size_t begin = chunk * kTrialChunk;
    const std::size_t end = std::min(trials, begin + kTrialChunk);
    for (std::size_t t = begin; t < end; ++t) {
      Rng rng = derived_rng(seed, t);
      const auto cfg = random_configuration<T>(rng, n, m, f);
      const auto best = best_separator(F, cfg);
      ++part.wins[best.index];
      if (best.margin <= zero_tol) part.zero = true;
      if (best.margin < part.r) {
        part.r = best.margin;
        part.worst = t;
      }
    }
    return part;
  });
  RadiusEstimate est;
  est.r = std::numeric_limits<double>::infinity();
  est.wins.assign(F.size(), 0);
  for (const auto& p : parts) {
    if (p.r < est.r) {
      est.r = p.r;
      est.worst_trial = p.worst;
    }
    if (p.zero) est.separating = false;
    for (std::size_t i = 0; i < F.size(); ++i) est.wins[i] += p.wins[i];
  }
  if (!est.separating) est.r = 0.0;
  return est;
}

/// Greedy construction of a candidate separating set: repeatedly add the
/// candidate that most improves the worst margin over a fixed sample of
/// configurations, until the worst margin reaches target_r or nothing
/// improves it. Heuristic; the result is not certified.
template <class T>
SeparatingSet<T> greedy_separating_set(const std::vector<Matrix<T>>& candidates, int m, double target_r,
                                       std::size_t trials, std::uint64_t seed) {
  if (candidates.empty()) throw DomainError("no candidate elements");
  const std::size_t n = candidates.front().rows();
  const FieldSpec f = candidates.front().field();
  std::vector<Configuration<T>> cfgs;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = derived_rng(seed, t);
    cfgs.push_back(random_configuration<T>(rng, n, m, f));
  }
  std::vector<Matrix<T>> inverses;
  for (const auto& c : candidates) inverses.push_back(inverse(c));

  std::vector<double> current(cfgs.size(), 0.0);
  std::vector<bool> used(candidates.size(), false);
  std::vector<Matrix<T>> chosen;
  double worst = 0.0;
  while (worst < target_r) {
    std::size_t pick = candidates.size();
    double pick_worst = worst;
    std::vector<double> pick_margins;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      std::vector<double> margins(cfgs.size());
      double w = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < cfgs.size(); ++t) {
        margins[t] = std::max(current[t], separation_margin(candidates[c], inverses[c], cfgs[t]));
        w = std::min(w, margins[t]);
      }
      if (w > pick_worst || (chosen.empty() && pick == candidates.size())) {
        pick = c;
        pick_worst = w;
        pick_margins = std::move(margins);
      }
    }
    if (pick == candidates.size()) break;
    used[pick] = true;
    chosen.push_back(candidates[pick]);
    current = std::move(pick_margins);
    worst = pick_worst;
  }
  if (!(worst > 0.0)) throw NoSeparator("no candidate separates the sampled configurations");
  return SeparatingSet<T>::make(std::move(chosen), m, worst);
}

}  // namespace pingpong
