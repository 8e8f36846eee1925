#ifndef MOMCOS_MONTECARLO_HPP
#define MOMCOS_MONTECARLO_HPP

// Seeded sampling of both statistics, empirical distribution checks and
// density histograms.
//
// Generator: xoshiro256** seeded through splitmix64. Draws are produced in
// fixed blocks of 2^16 replications; block b uses its own stream seeded from
// splitmix64(seed ^ splitmix64(b)), so output is independent of thread count.
// Normal variates use the Box-Muller transform (both outputs consumed, no
// rejection step).

#include <momcos/moments.hpp>
#include <momcos/series.hpp>
#include <momcos/support.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace momcos {

inline constexpr const char* kGeneratorName = "xoshiro256**/splitmix64 v1";
inline constexpr std::size_t kBlockSize = std::size_t{1} << 16;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) { return splitmix64(x); }

class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) {
      w = splitmix64(sm);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_left() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_{};
};

inline std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  return mix64(seed ^ mix64(block));
}

class NormalStream {
 public:
  explicit NormalStream(Xoshiro256& rng) : rng_(rng) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(rng_.uniform_open_left()));
    const double phi = 2.0 * std::numbers::pi * rng_.uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  Xoshiro256& rng_;
  double spare_ = 0;
  bool has_spare_ = false;
};

struct SampleBatch {
  Family family = Family::UniformSum;
  int n = 0;
  std::size_t N = 0;
  std::uint64_t seed = 0;
  std::string generator = kGeneratorName;
  std::vector<double> values;  // sorted ascending
  std::size_t redraws = 0;     // degenerate skewness samples replaced
};

namespace detail {

// Fills out[0..N) block by block in parallel. draw(rng, i) returns one
// replication and may report a redraw through the counter.
template <class Draw>
std::size_t generate_blocks(std::vector<double>& out, std::uint64_t seed,
                            unsigned threads, Draw draw) {
  const std::size_t N = out.size();
  const std::size_t blocks = (N + kBlockSize - 1) / kBlockSize;
  std::atomic<std::size_t> next_block{0};
  std::atomic<std::size_t> redraws{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= blocks) {
        return;
      }
      Xoshiro256 rng(block_seed(seed, b));
      std::size_t local_redraws = 0;
      const std::size_t end = std::min(N, (b + 1) * kBlockSize);
      for (std::size_t i = b * kBlockSize; i < end; ++i) {
        out[i] = draw(rng, local_redraws);
      }
      redraws += local_redraws;
    }
  };
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(blocks, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& th : pool) {
    th.join();
  }
  return redraws.load();
}

}  // namespace detail

/// N draws of X_1 + ... + X_n, X_i ~ U(-1/2, 1/2).
inline SampleBatch sample_uniform_sum(int n, std::size_t N, std::uint64_t seed,
                                      unsigned threads = 0) {
  if (n < 1 || N < 1) {
    throw std::domain_error("sample_uniform_sum: need n >= 1 and N >= 1");
  }
  SampleBatch batch;
  batch.family = Family::UniformSum;
  batch.n = n;
  batch.N = N;
  batch.seed = seed;
  batch.values.resize(N);
  detail::generate_blocks(batch.values, seed, threads,
                          [n](Xoshiro256& rng, std::size_t&) {
                            double s = 0;
                            for (int i = 0; i < n; ++i) {
                              s += rng.uniform() - 0.5;
                            }
                            return s;
                          });
  std::sort(batch.values.begin(), batch.values.end());
  return batch;
}

/// sqrt(b1) = m3 / m2^{3/2} of a single sample.
inline double sample_skewness_of(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0;
  for (double x : xs) {
    mean += x;
  }
  mean /= n;
  double m2 = 0, m3 = 0;
  for (double x : xs) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (!(m2 > 0)) {
    return NAN;
  }
  return m3 / (m2 * std::sqrt(m2));
}

/// N draws of sqrt(b1) from standard normal samples of size n.
inline SampleBatch sample_skewness(int n, std::size_t N, std::uint64_t seed,
                                   unsigned threads = 0) {
  if (n < 3 || N < 1) {
    throw std::domain_error("sample_skewness: need n >= 3 and N >= 1");
  }
  SampleBatch batch;
  batch.family = Family::NormalSkewness;
  batch.n = n;
  batch.N = N;
  batch.seed = seed;
  batch.values.resize(N);
  batch.redraws = detail::generate_blocks(
      batch.values, seed, threads, [n](Xoshiro256& rng, std::size_t& redraws) {
        NormalStream normal(rng);
        std::vector<double> xs(static_cast<std::size_t>(n));
        for (;;) {
          for (auto& x : xs) {
            x = normal.next();
          }
          const double v = sample_skewness_of(xs);
          if (std::isfinite(v)) {
            return v;
          }
          ++redraws;
        }
      });
  std::sort(batch.values.begin(), batch.values.end());
  const double bound = skewness_support(n, 64).a_double + 1e-12;
  if (-batch.values.front() > bound || batch.values.back() > bound) {
    throw std::logic_error("sample_skewness: value outside the range +-(n-2)/sqrt(n-1)");
  }
  return batch;
}

inline SampleBatch sample_family(Family family, int n, std::size_t N,
                                 std::uint64_t seed, unsigned threads = 0) {
  return family == Family::UniformSum ? sample_uniform_sum(n, N, seed, threads)
                                      : sample_skewness(n, N, seed, threads);
}

/// sup_x |F_N(x) - F(x)| over a sorted sample, checking both sides of each
/// ECDF step.
template <class Cdf>
double ks_distance_cdf(const std::vector<double>& sorted, Cdf&& cdf) {
  const double N = static_cast<double>(sorted.size());
  double d = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = cdf(sorted[i]);
    const double below = static_cast<double>(i) / N;
    const double above = static_cast<double>(i + 1) / N;
    d = std::max({d, above - F, F - below});
  }
  return d;
}

inline double ks_distance(const SampleBatch& batch,
                          const FourierCosineModel& model) {
  if (batch.family != model.family() || batch.n != model.n()) {
    throw std::invalid_argument("ks_distance: batch and model differ in family or n");
  }
  return ks_distance_cdf(batch.values,
                         [&](double x) { return cdf_eval(model, x); });
}

struct Histogram {
  std::vector<double> edges;    // bins + 1 uniform edges over [-A, A]
  std::vector<std::size_t> counts;
  std::vector<double> heights;  // count / (N * width)
  double width = 0;
  std::size_t total = 0;

  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

inline Histogram histogram(const SampleBatch& batch, int bins) {
  if (bins < 1) {
    throw std::domain_error("histogram: bins must be >= 1");
  }
  const double a = family_support(batch.family, batch.n, 64).a_double;
  Histogram h;
  const auto nb = static_cast<std::size_t>(bins);
  h.width = 2 * a / bins;
  h.edges.resize(nb + 1);
  for (std::size_t i = 0; i <= nb; ++i) {
    h.edges[i] = -a + h.width * static_cast<double>(i);
  }
  h.edges[nb] = a;
  h.counts.assign(nb, 0);
  for (double v : batch.values) {
    auto idx = static_cast<long>(std::floor((v + a) / h.width));
    idx = std::clamp(idx, 0L, static_cast<long>(nb) - 1);
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  h.total = batch.values.size();
  h.heights.resize(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    h.heights[i] = static_cast<double>(h.counts[i]) /
                   (static_cast<double>(h.total) * h.width);
  }
  return h;
}

}  // namespace momcos

#endif  // MOMCOS_MONTECARLO_HPP
