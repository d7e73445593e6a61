// Walk through the zero-free example: growth, windings and the log-derivative.
#include <cstdio>

#include "valdist/valdist.hpp"

int main() {
  using namespace valdist;
  const auto f = catalog_get("notLP");

  for (double r : {0.0, 0.5, 0.9}) {
    const double lm = log_max_modulus(f, r);
    std::printf("r = %.2f  log M = %.12g  closed form = %.12g\n", r, lm, 3.0 * std::exp((1 + r) / (1 - r)));
  }

  const auto circle = Contour::circle({}, 0.95);
  for (int k = 0; k <= 2; ++k) {
    const auto g = k == 0 ? f : derivative(f, k);
    std::printf("winding of f^(%d) on |z| = 0.95: %d\n", k, winding_number(g, circle));
  }

  for (double r : {0.2, 0.5, 0.8}) {
    const auto s = characteristic_T(f, r);
    std::printf("T(%.1f) = %.10g\n", r, s.T);
  }

  // A second entry from a JSON file next to this sample, if present.
  try {
    const auto extra = Catalog::builtin().merged(Catalog::from_file(VALDIST_SAMPLE_DIR "/extra_catalog.json"));
    const auto g = extra.get("half-disc-rational");
    std::printf("T(0.5, half-disc-rational) = %.10g\n", characteristic_T(g, 0.5).T);
  } catch (const Error& e) {
    std::printf("extra catalog skipped: %s\n", e.what());
  }
}
