#ifndef MOMCOS_NUMERICS_HPP
#define MOMCOS_NUMERICS_HPP

// Exact rational arithmetic (GMP) and fixed-precision binary floating point
// (MPFR) used to evaluate alternating moment series without cancellation.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace momcos {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline constexpr long kDefaultPrecisionBits = 320;

inline BigRational make_rational(long num, long den = 1) {
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

/// RAII wrapper over an MPFR value. The precision is fixed at construction;
/// binary operators produce a result at the larger of the operand precisions.
class BigFloat {
 public:
  explicit BigFloat(long precision_bits = kDefaultPrecisionBits) {
    if (precision_bits < MPFR_PREC_MIN) {
      throw std::invalid_argument("BigFloat: precision too small");
    }
    mpfr_init2(v_, precision_bits);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(double x, long precision_bits) : BigFloat(precision_bits) {
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  BigFloat(const BigRational& q, long precision_bits)
      : BigFloat(precision_bits) {
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) : BigFloat(o.precision_bits()) {
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept : BigFloat(o.precision_bits()) {
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, o.precision_bits());
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  long precision_bits() const { return static_cast<long>(mpfr_get_prec(v_)); }

  /// Single rounding to the nearest double.
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  std::string to_string(int digits = 20) const {
    std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return buf.data();
  }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  BigFloat& operator+=(const BigFloat& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(const BigFloat& o) {
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(const BigFloat& o) {
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(const BigFloat& o) {
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.precision_bits(), b.precision_bits()));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.precision_bits(), b.precision_bits()));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.precision_bits(), b.precision_bits()));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.precision_bits(), b.precision_bits()));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  BigFloat operator-() const {
    BigFloat r(precision_bits());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const BigFloat& a, const BigFloat& b) {
    return mpfr_less_p(a.v_, b.v_) != 0;
  }
  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }

 private:
  mpfr_t v_;
};

inline BigFloat sqrt(const BigFloat& x) {
  BigFloat r(x.precision_bits());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

inline BigFloat abs(const BigFloat& x) {
  BigFloat r(x.precision_bits());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

inline BigFloat sin(const BigFloat& x) {
  BigFloat r(x.precision_bits());
  mpfr_sin(r.get(), x.get(), MPFR_RNDN);
  return r;
}

inline BigFloat pow(const BigFloat& x, unsigned long e) {
  BigFloat r(x.precision_bits());
  mpfr_pow_ui(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

/// Relative difference |a-b|/max(|a|,|b|), computed at the larger precision.
inline BigFloat relative_difference(const BigFloat& a, const BigFloat& b) {
  BigFloat d = abs(a - b);
  BigFloat m = std::max(abs(a), abs(b));
  if (mpfr_zero_p(m.get())) {
    return d;
  }
  return d / m;
}

/// Exact binomial coefficient; k > n is a caller error.
inline BigRational binomial(unsigned long n, unsigned long k) {
  if (k > n) {
    throw std::domain_error("binomial: k > n (" + std::to_string(k) + " > " +
                            std::to_string(n) + ")");
  }
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return BigRational(r);
}

/// Rising factorial a(a+1)...(a+m-1), equal to 1 for m = 0.
inline BigRational pochhammer(const BigRational& a, unsigned long m) {
  BigRational r(1);
  BigRational term = a;
  for (unsigned long i = 0; i < m; ++i) {
    r *= term;
    term += 1;
  }
  return r;
}

inline BigFloat pi_at(long precision_bits) {
  if (precision_bits < 64) {
    throw std::invalid_argument("pi_at: precision_bits must be >= 64");
  }
  BigFloat r(precision_bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

/// sum_j coeffs[j] * pi^(2j), times sqrt(scale_squared).
///
/// The scale is kept as an exact squared rational so the same polynomial can
/// be evaluated consistently at any precision; for the moment-series
/// coefficients it is 1/A^2, i.e. the scale is the 1/A prefactor.
struct PiPolynomial {
  std::vector<BigRational> coeffs;
  BigRational scale_squared{1};
};

inline BigFloat eval_pi_polynomial(const PiPolynomial& p, long precision_bits) {
  if (precision_bits < 256) {
    throw std::invalid_argument(
        "eval_pi_polynomial: precision_bits must be >= 256");
  }
  const BigFloat pi = pi_at(precision_bits);
  const BigFloat pi2 = pi * pi;
  BigFloat power(1.0, precision_bits);
  BigFloat sum(precision_bits);
  for (const auto& c : p.coeffs) {
    if (c != 0) {
      sum += BigFloat(c, precision_bits) * power;
    }
    power *= pi2;
  }
  if (p.scale_squared != 1) {
    sum *= sqrt(BigFloat(p.scale_squared, precision_bits));
  }
  return sum;
}

/// B(1/2, (n-2)/2) for integer n >= 4. Even n gives a rational value,
/// odd n a rational multiple of pi.
inline BigFloat beta_half(int n, long precision_bits) {
  if (n < 4) {
    throw std::domain_error("beta_half: n must be >= 4");
  }
  const BigRational half(1, 2);
  if (n % 2 == 0) {
    // q = (n-2)/2:  B = (q-1)! / (1/2)_q
    const unsigned long q = static_cast<unsigned long>((n - 2) / 2);
    BigInt fact;
    mpz_fac_ui(fact.get_mpz_t(), q - 1);
    BigRational value = BigRational(fact) / pochhammer(half, q);
    value.canonicalize();
    return BigFloat(value, precision_bits);
  }
  // (n-2)/2 = q + 1/2:  B = pi (1/2)_q / q!
  const unsigned long q = static_cast<unsigned long>((n - 3) / 2);
  BigInt fact;
  mpz_fac_ui(fact.get_mpz_t(), q);
  BigRational value = pochhammer(half, q) / BigRational(fact);
  value.canonicalize();
  return BigFloat(value, precision_bits) * pi_at(precision_bits);
}

}  // namespace momcos

#endif  // MOMCOS_NUMERICS_HPP
