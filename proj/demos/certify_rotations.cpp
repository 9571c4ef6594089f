// Build a ping-pong pair in SL_2(R) from a large diagonal element and the
// eighth-turn rotations, then print the certificate.

#include <cmath>
#include <cstdio>

#include "pingpong.hpp"

using namespace pingpong;

int main() {
  const FieldSpec R = FieldSpec::real();
  std::vector<Matrix<double>> F;
  for (int k = 0; k < 8; ++k) F.push_back(rotation(k * M_PI / 8));
  const auto set = SeparatingSet<double>::make(F, 2, 0.2);

  const Matrix<double> g0({{1e3, 0}, {0, 1e-3}}, R);
  const auto gamma = make_very_contracting(cartan_element(g0), set, {.seed = 1});
  std::printf("gamma = g f g^-1 with f = F[%zu], eps = %.4g\n", gamma.choices.front(), gamma.epsilon());

  const auto I = Matrix<double>::identity(2, R);
  const auto cert = build_pingpong_tuple<double>({I, I}, set, gamma);
  const auto check = verify_pingpong(cert);
  std::printf("r = %.4g, eps = %.4g, c = %.4g\n", cert.r, cert.epsilon, cert.c);
  for (std::size_t i = 0; i < cert.generators.size(); ++i) {
    const auto& x = cert.generators[i];
    std::printf("x%zu = [[%.6g, %.6g], [%.6g, %.6g]]\n", i + 1, x(0, 0), x(0, 1), x(1, 0), x(1, 1));
  }
  std::printf("verified: %s (gap %.4g, closest cross distance %.4g)\n", check.passed ? "yes" : "no", check.gap,
              check.min_cross_distance);

  const auto w = freeness_falsifier(cert.generators, 8);
  std::printf("relation up to length 8: %s\n", w ? w->to_string().c_str() : "none");
  return check.passed && !w ? 0 : 1;
}
