// Do log x and log y generate sl_n? A few pairs near the identity.

#include <cstdio>

#include "pingpong.hpp"

using namespace pingpong;

int main() {
  using M = LieMatrix<double>;
  M e(2, 2), f(2, 2), h(2, 2);
  e << 0, 1, 0, 0;
  f << 0, 0, 1, 0;
  h << 1, 0, 0, -1;

  const std::pair<const char*, std::pair<M, M>> pairs[] = {
      {"exp(.1e), exp(.1f)", {matrix_exp<double>(0.1 * e), matrix_exp<double>(0.1 * f)}},
      {"exp(.1h), exp(.2h)", {matrix_exp<double>(0.1 * h), matrix_exp<double>(0.2 * h)}},
      {"exp(.1h), exp(.1e)", {matrix_exp<double>(0.1 * h), matrix_exp<double>(0.1 * e)}},
  };
  for (const auto& [name, xy] : pairs) {
    const auto b = generated_subalgebra<double>({matrix_log<double>(xy.first), matrix_log<double>(xy.second)});
    const auto series = derived_series(b);
    std::printf("%-20s dim %zu, generates sl_2: %s, derived series:", name, b.dimension(),
                dense_pair_test<double>(xy.first, xy.second) ? "yes" : "no ");
    for (const auto& t : series.terms) std::printf(" %zu", t.dimension());
    std::printf("\n");
  }
  return 0;
}
