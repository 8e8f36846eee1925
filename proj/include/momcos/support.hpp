#ifndef MOMCOS_SUPPORT_HPP
#define MOMCOS_SUPPORT_HPP

#include <momcos/moments.hpp>
#include <momcos/numerics.hpp>

#include <stdexcept>
#include <string>

namespace momcos {

/// Symmetric support [-A, A]. A^2 is kept exactly; A itself is irrational
/// for the skewness family and is held in BigFloat plus a double view.
struct SupportSpec {
  int n = 0;
  BigRational a_squared;
  BigFloat a;
  double a_double = 0;

  SupportSpec(int n_, BigRational a_sq, long precision_bits)
      : n(n_),
        a_squared(std::move(a_sq)),
        a(sqrt(BigFloat(a_squared, precision_bits))),
        a_double(a.to_double()) {
    if (a_squared <= 0) {
      throw std::domain_error("SupportSpec: A^2 must be positive");
    }
  }

  BigFloat a_at(long precision_bits) const {
    return sqrt(BigFloat(a_squared, precision_bits));
  }
};

/// Centered Irwin-Hall support: A = n/2.
inline SupportSpec uniform_sum_support(int n,
                                       long precision_bits = kDefaultPrecisionBits) {
  if (n < 1) {
    throw std::domain_error("uniform_sum_support: n must be >= 1");
  }
  return SupportSpec(n, make_rational(n * n, 4), precision_bits);
}

/// Range of sqrt(b1) for sample size n: A = (n-2)/sqrt(n-1).
inline SupportSpec skewness_support(int n,
                                    long precision_bits = kDefaultPrecisionBits) {
  if (n < 3) {
    throw std::domain_error("skewness_support: n must be >= 3, got " +
                            std::to_string(n));
  }
  return SupportSpec(n, make_rational((n - 2) * (n - 2), n - 1),
                     precision_bits);
}

inline SupportSpec family_support(Family family, int n,
                                  long precision_bits = kDefaultPrecisionBits) {
  return family == Family::UniformSum ? uniform_sum_support(n, precision_bits)
                                      : skewness_support(n, precision_bits);
}

}  // namespace momcos

#endif  // MOMCOS_SUPPORT_HPP
