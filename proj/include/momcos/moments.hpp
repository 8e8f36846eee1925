#ifndef MOMCOS_MOMENTS_HPP
#define MOMCOS_MOMENTS_HPP

#include <momcos/numerics.hpp>

#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace momcos {

enum class Family { UniformSum, NormalSkewness };

inline const char* family_name(Family f) {
  return f == Family::UniformSum ? "uniform-sum" : "skewness";
}

/// Even moments mu'_{n,0}, mu'_{n,2}, ..., mu'_{n,2J} about the origin.
/// Odd moments are zero for both families and are not stored.
struct MomentSequence {
  Family family = Family::UniformSum;
  int n = 1;
  std::vector<BigRational> even_moments;

  std::size_t order() const {
    return even_moments.empty() ? 0 : even_moments.size() - 1;
  }
  const BigRational& operator[](std::size_t j) const { return even_moments[j]; }
};

/// Sum of n independent U(-1/2, 1/2) variables, via
/// mu'_{n,2j} = sum_k C(2j,2k) mu'_{n-1,2j-2k} / ((2k+1) 4^k).
inline MomentSequence uniform_sum_moments(int n, int J) {
  if (n < 1) {
    throw std::domain_error("uniform_sum_moments: n must be >= 1");
  }
  if (J < 0) {
    throw std::domain_error("uniform_sum_moments: J must be >= 0");
  }
  const auto size = static_cast<std::size_t>(J) + 1;

  // Moments of a single U(-1/2, 1/2): 1 / ((2k+1) 4^k).
  std::vector<BigRational> single(size);
  for (std::size_t k = 0; k < size; ++k) {
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 4, k);
    den *= static_cast<unsigned long>(2 * k + 1);
    single[k] = BigRational(BigInt(1), den);
  }

  std::vector<BigRational> row = single;
  for (int m = 2; m <= n; ++m) {
    std::vector<BigRational> next(size);
    for (std::size_t j = 0; j < size; ++j) {
      BigRational acc(0);
      for (std::size_t k = 0; k <= j; ++k) {
        acc += binomial(2 * j, 2 * k) * single[k] * row[j - k];
      }
      next[j] = acc;
    }
    row = std::move(next);
  }
  return MomentSequence{Family::UniformSum, n, std::move(row)};
}

/// Closed form for n = 4: 8(4*4^j - 1) / ((1+2j)(2+2j)(3+2j)(4+2j)).
inline BigRational uniform4_moment_closed(unsigned long j) {
  BigInt four_pow;
  mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, j);
  BigInt num = 8 * (4 * four_pow - 1);
  BigInt den = BigInt(1 + 2 * j) * BigInt(2 + 2 * j) * BigInt(3 + 2 * j) *
               BigInt(4 + 2 * j);
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

namespace detail {

// Product prod_{l<m} (start + 2l) for m = 0..count-1. Used to express the
// half-integer Pochhammer symbols (start/2)_m as integer / 2^m.
inline std::vector<BigInt> odd_step_products(long start, std::size_t count) {
  std::vector<BigInt> out(count);
  out[0] = 1;
  for (std::size_t m = 1; m < count; ++m) {
    out[m] = out[m - 1] * (start + 2 * static_cast<long>(m - 1));
  }
  return out;
}

// One step of the skewness moment recurrence: row for sample size n to row
// for n + 1. All half-integer Pochhammer symbols carry a 2^{-3s} factor that
// cancels between the prefactor and the inner sum, so the inner sum is
// accumulated in integers.
inline std::vector<BigRational> skewness_next_row(
    const std::vector<BigRational>& row, long n) {
  const std::size_t S = row.size() - 1;
  const std::size_t len = 3 * S + 1;
  const auto half_prod = odd_step_products(1, len);       // 2^m (1/2)_m
  const auto nm1_prod = odd_step_products(n - 1, len);    // 2^m ((n-1)/2)_m
  const auto n_prod = odd_step_products(n, len);          // 2^m (n/2)_m

  std::vector<BigInt> pow3(2 * S + 1), pow1mn(2 * S + 1);
  pow3[0] = 1;
  pow1mn[0] = 1;
  for (std::size_t e = 1; e <= 2 * S; ++e) {
    pow3[e] = pow3[e - 1] * 3;
    pow1mn[e] = pow1mn[e - 1] * (1 - n);
  }

  std::vector<BigRational> next(S + 1);
  for (std::size_t s = 0; s <= S; ++s) {
    BigRational outer(0);
    BigInt np1_pow_j(1);  // (n+1)^j
    for (std::size_t j = 0; j <= s; ++j) {
      BigInt inner(0);
      for (std::size_t i = 0; i <= 2 * j; ++i) {
        BigInt c;
        mpz_bin_uiui(c.get_mpz_t(), 2 * j, i);
        inner += c * pow3[2 * j - i] * pow1mn[i] * half_prod[j + i] *
                 nm1_prod[3 * s - j - i];
      }
      if (row[s - j] != 0) {
        BigInt c;
        mpz_bin_uiui(c.get_mpz_t(), 2 * s, 2 * j);
        BigRational term(BigInt(c * inner), np1_pow_j);
        term.canonicalize();
        outer += term * row[s - j];
      }
      np1_pow_j *= n + 1;
    }
    BigInt np1_s, n_s;
    mpz_ui_pow_ui(np1_s.get_mpz_t(), static_cast<unsigned long>(n + 1), s);
    mpz_ui_pow_ui(n_s.get_mpz_t(), static_cast<unsigned long>(n), s);
    BigRational pre(np1_s, n_s * n_prod[3 * s]);
    pre.canonicalize();
    next[s] = pre * outer;
  }
  return next;
}

// Memoized rows n = 2, 3, ... for a fixed order S.
class SkewnessRowCache {
 public:
  std::vector<BigRational> row(int n, std::size_t S) {
    std::lock_guard<std::mutex> lock(mu_);
    if (S > order_) {
      order_ = S;
      rows_.clear();
    }
    if (rows_.empty()) {
      std::vector<BigRational> base(order_ + 1, BigRational(0));
      base[0] = 1;  // n = 2: m3 is identically zero, so sqrt(b1) == 0
      rows_.push_back(std::move(base));
    }
    while (static_cast<int>(rows_.size()) + 1 < n) {
      const long cur = static_cast<long>(rows_.size()) + 1;
      rows_.push_back(skewness_next_row(rows_.back(), cur));
    }
    const auto& full = rows_[static_cast<std::size_t>(n - 2)];
    return {full.begin(), full.begin() + static_cast<long>(S) + 1};
  }

 private:
  std::mutex mu_;
  std::size_t order_ = 0;
  std::vector<std::vector<BigRational>> rows_;  // rows_[i] is sample size i+2
};

inline SkewnessRowCache& skewness_cache() {
  static SkewnessRowCache cache;
  return cache;
}

}  // namespace detail

inline constexpr int kDefaultSkewnessOrder = 50;

/// Even moments of sample skewness sqrt(b1) for a normal sample of size n,
/// obtained by lifting the degenerate n = 2 row through the moment
/// recurrence. Rows are memoized process-wide.
inline MomentSequence skewness_moments(int n, int S = kDefaultSkewnessOrder) {
  if (n < 3) {
    throw std::domain_error("skewness_moments: n must be >= 3, got " +
                            std::to_string(n));
  }
  if (S < 0) {
    throw std::domain_error("skewness_moments: S must be >= 0");
  }
  return MomentSequence{
      Family::NormalSkewness, n,
      detail::skewness_cache().row(n, static_cast<std::size_t>(S))};
}

inline MomentSequence family_moments(Family family, int n, int J) {
  return family == Family::UniformSum ? uniform_sum_moments(n, J)
                                      : skewness_moments(n, J);
}

/// Var(sqrt(b1)) = 6(n-2)/((n+1)(n+3)) for a normal parent.
inline BigRational skewness_variance(int n) {
  BigRational q(6 * (n - 2), (n + 1) * (n + 3));
  q.canonicalize();
  return q;
}

}  // namespace momcos

#endif  // MOMCOS_MOMENTS_HPP
