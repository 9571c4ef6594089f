// Smith-form Cartan decomposition over Q_5 and the contraction data it gives.

#include <cstdio>
#include <iostream>

#include "pingpong.hpp"

using namespace pingpong;

int main() {
  const FieldSpec Q5 = FieldSpec::padic(5, 20);
  auto q = [](std::int64_t a, std::int64_t b = 1) { return Padic::from_rational(a, b, 5, 20); };

  // [[1, 1/25], [0, 1]] times an integral matrix
  const Matrix<Padic> u({{q(1), q(1, 25)}, {q(0), q(1)}}, Q5);
  const Matrix<Padic> k({{q(2), q(1)}, {q(1), q(1)}}, Q5);
  const auto g = u * k;

  const auto c = cartan_decompose(g);
  std::printf("exponents:");
  for (int j : c.exponents()) std::printf(" %d", j);
  std::printf("\n|a_i| = %g %g, digits lost = %d\n", c.abs_a(0), c.abs_a(1), c.precision_loss);

  const auto cert = contraction_data(g);
  std::cout << "eps = " << cert.epsilon << ", ratio = " << cert.ratio << "\n";
  std::cout << "attracting point: [" << cert.attracting.rep()[0] << " : " << cert.attracting.rep()[1] << "]\n";
  std::cout << "sampled check: " << (verify_contracting(cert, g, 5000, 1) ? "contracting" : "violated") << "\n";
  std::cout << "bi-Lipschitz constant: " << bilip_constant(g) << "\n";
  return 0;
}
