// Builds the cosine-series model of sqrt(b1) for one sample size and compares
// its upper tail with a seeded simulation.
//
//   skewness_demo [n]     (default n = 10)

#include <momcos/momcos.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
  using namespace momcos;
  const int n = argc > 1 ? std::atoi(argv[1]) : 10;
  if (n < 3) {
    std::fprintf(stderr, "n must be >= 3\n");
    return 2;
  }

  const auto model = build_default_model(Family::NormalSkewness, n);
  std::printf("sqrt(b1), n = %d: support [-%.6f, %.6f], K = %d, J = %d\n", n,
              model.a(), model.a(), model.harmonics(), model.moment_order());

  std::printf("\n  k  a_k\n");
  const auto& c = model.cosine_coefficients();
  for (std::size_t k = 0; k < c.size(); ++k) {
    std::printf(" %2zu  % .6e\n", k, c[k]);
  }

  const auto batch = sample_skewness(n, 1'000'000, 1);
  std::printf("\n  x    model tail  simulated\n");
  for (double x = 0.2; x < model.a() && x <= 2.0 + 1e-9; x += 0.2) {
    const auto above = static_cast<double>(
        batch.values.end() - std::upper_bound(batch.values.begin(), batch.values.end(), x));
    std::printf(" %.1f  %.4f      %.4f\n", x, tail_prob(model, x),
                above / static_cast<double>(batch.values.size()));
  }

  std::printf("\n  alpha  x_alpha\n");
  for (double alpha : {0.90, 0.95, 0.975, 0.99, 0.995, 0.999}) {
    std::printf(" %.3f  %.4f\n", alpha, percentile(model, alpha));
  }
  std::printf("\nKS distance to 10^6 draws: %.5f\n", ks_distance(batch, model));
  return 0;
}
