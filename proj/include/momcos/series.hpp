#ifndef MOMCOS_SERIES_HPP
#define MOMCOS_SERIES_HPP

// Truncated Fourier cosine models of even densities on [-A, A]:
//
//   f(x) ~ a_0/2 + sum_{k=1}^K a_k cos(k pi x / A)
//   F(x) ~ (x/A + 1)/2 + sum_{k=1}^K a_k A/(k pi) sin(k pi x / A)
//
// with a_0 = 1/A and a_k either integrated from a known density or summed
// from the even moments, a_k ~ (1/A) sum_{j<=J} (-1)^j/(2j)! (k pi/A)^{2j} mu'_{2j}.

#include <momcos/moments.hpp>
#include <momcos/numerics.hpp>
#include <momcos/quadrature.hpp>
#include <momcos/support.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace momcos {

struct TruncationSpec {
  int K = 0;  // cosine harmonics kept
  int J = 0;  // moment-series order per coefficient
};

/// Published (K, J) pairs: uniform sums per n = 2(2)12, skewness (12, 50).
inline std::optional<TruncationSpec> default_truncation(Family family, int n) {
  if (family == Family::NormalSkewness) {
    return TruncationSpec{12, kDefaultSkewnessOrder};
  }
  switch (n) {
    case 2: return TruncationSpec{8, 35};
    case 4: return TruncationSpec{8, 35};
    case 6: return TruncationSpec{8, 30};
    case 8: return TruncationSpec{8, 30};
    case 10: return TruncationSpec{7, 25};
    case 12: return TruncationSpec{6, 20};
    default: return std::nullopt;
  }
}

enum class Provenance { FromMoments, FromIntegral, ClosedForm };

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::FromMoments: return "moments";
    case Provenance::FromIntegral: return "integral";
    case Provenance::ClosedForm: return "closed-form";
  }
  return "?";
}

class FourierCosineModel {
 public:
  /// coeffs[0] must be a_0 = 1/A; it is not recomputed.
  FourierCosineModel(Family family, SupportSpec support,
                     std::vector<BigFloat> coeffs, Provenance provenance,
                     int moment_order = 0)
      : family_(family),
        support_(std::move(support)),
        coeffs_(std::move(coeffs)),
        provenance_(provenance),
        moment_order_(moment_order) {
    if (coeffs_.empty()) {
      throw std::invalid_argument("FourierCosineModel: need at least a_0");
    }
    const long bits = coeffs_.front().precision_bits();
    const BigFloat pi = pi_at(std::max(64L, bits));
    const BigFloat a = support_.a_at(std::max(64L, bits));
    omega_ = (pi / a).to_double();
    cos_coeffs_.reserve(coeffs_.size());
    sin_coeffs_.reserve(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      cos_coeffs_.push_back(coeffs_[k].to_double());
      if (k == 0) {
        sin_coeffs_.push_back(0.0);
      } else {
        const BigFloat kk(static_cast<double>(k), bits);
        sin_coeffs_.push_back((coeffs_[k] * a / (kk * pi)).to_double());
      }
    }
  }

  Family family() const { return family_; }
  int n() const { return support_.n; }
  const SupportSpec& support() const { return support_; }
  double a() const { return support_.a_double; }
  int harmonics() const { return static_cast<int>(coeffs_.size()) - 1; }
  Provenance provenance() const { return provenance_; }
  int moment_order() const { return moment_order_; }

  const std::vector<BigFloat>& coefficients() const { return coeffs_; }
  /// a_0, a_1, ..., a_K rounded to double.
  const std::vector<double>& cosine_coefficients() const { return cos_coeffs_; }
  /// a_k A/(k pi) rounded to double; entry 0 is unused.
  const std::vector<double>& sine_coefficients() const { return sin_coeffs_; }
  /// pi / A
  double angular_step() const { return omega_; }

 private:
  Family family_;
  SupportSpec support_;
  std::vector<BigFloat> coeffs_;
  Provenance provenance_;
  int moment_order_;
  double omega_ = 0;
  std::vector<double> cos_coeffs_;
  std::vector<double> sin_coeffs_;
};

/// The J-truncated moment series for a_k as an exact polynomial in pi^2:
/// c_j = (-1)^j k^{2j} mu'_{2j} / ((2j)! (A^2)^j), scaled by 1/A.
inline PiPolynomial coeff_from_moments(const SupportSpec& support,
                                       const MomentSequence& moments, int k,
                                       int J) {
  if (k < 1) {
    throw std::domain_error("coeff_from_moments: k must be >= 1");
  }
  if (J < 0) {
    throw std::domain_error("coeff_from_moments: J must be >= 0");
  }
  if (moments.order() < static_cast<std::size_t>(J) ||
      moments.even_moments.empty()) {
    throw std::invalid_argument(
        "coeff_from_moments: J = " + std::to_string(J) + " requires " +
        std::to_string(J + 1) + " even moments, got " +
        std::to_string(moments.even_moments.size()));
  }
  PiPolynomial p;
  p.coeffs.reserve(static_cast<std::size_t>(J) + 1);
  const BigRational k2(k * k);
  const BigRational ratio = k2 / support.a_squared;  // (k/A)^2
  BigRational power(1);                              // (k/A)^{2j}
  BigInt fact(1);                                    // (2j)!
  for (int j = 0; j <= J; ++j) {
    if (j > 0) {
      power *= ratio;
      fact *= (2 * j - 1) * (2 * j);
    }
    BigRational c = power * moments[static_cast<std::size_t>(j)] / BigRational(fact);
    if (j % 2 == 1) {
      c = -c;
    }
    p.coeffs.push_back(std::move(c));
  }
  p.scale_squared = 1 / support.a_squared;
  return p;
}

/// (1/A) int_{-A}^{A} pdf(x) cos(k pi x / A) dx by composite Gauss-Legendre.
/// `knots` are interior points where the density is not smooth; panels are
/// aligned to them.
inline double coeff_from_pdf(const std::function<double(double)>& pdf,
                             const SupportSpec& support, int k,
                             const std::vector<double>& knots = {},
                             const QuadratureSpec& quad = {}) {
  if (k < 0) {
    throw std::domain_error("coeff_from_pdf: k must be >= 0");
  }
  const double a = support.a_double;
  std::vector<double> breaks{-a};
  for (double t : knots) {
    if (t > -a && t < a) {
      breaks.push_back(t);
    }
  }
  breaks.push_back(a);
  std::sort(breaks.begin(), breaks.end());
  const double w = k * std::numbers::pi / a;
  auto integrand = [&](double x) { return pdf(x) * std::cos(w * x); };
  return integrate_adaptive(integrand, breaks, quad) / a;
}

/// Model from the moment series: a_0 = 1/A, a_k for k = 1..K summed to order J.
inline FourierCosineModel build_model(Family family, int n,
                                      const TruncationSpec& trunc,
                                      long precision_bits = kDefaultPrecisionBits) {
  if (trunc.K < 0 || trunc.J < 0) {
    throw std::domain_error("build_model: K and J must be >= 0");
  }
  SupportSpec support = family_support(family, n, precision_bits);
  const MomentSequence moments = family_moments(family, n, trunc.J);
  std::vector<BigFloat> coeffs;
  coeffs.reserve(static_cast<std::size_t>(trunc.K) + 1);
  coeffs.push_back(BigFloat(1.0, precision_bits) / support.a_at(precision_bits));
  for (int k = 1; k <= trunc.K; ++k) {
    const PiPolynomial p = coeff_from_moments(support, moments, k, trunc.J);
    coeffs.push_back(eval_pi_polynomial(p, precision_bits));
  }
  return FourierCosineModel(family, std::move(support), std::move(coeffs),
                            Provenance::FromMoments, trunc.J);
}

/// Model with the published default truncation for (family, n).
inline FourierCosineModel build_default_model(
    Family family, int n, long precision_bits = kDefaultPrecisionBits) {
  const auto trunc = default_truncation(family, n);
  if (!trunc) {
    throw std::invalid_argument("no default truncation for " +
                                std::string(family_name(family)) +
                                " n = " + std::to_string(n) +
                                "; give K and J explicitly");
  }
  return build_model(family, n, *trunc, precision_bits);
}

/// Raw truncated series (no clipping of negative values); 0 outside [-A, A].
inline double pdf_eval(const FourierCosineModel& model, double x) {
  const double ax = std::fabs(x);
  if (!(ax <= model.a())) {
    return 0.0;
  }
  const auto& c = model.cosine_coefficients();
  const double theta = model.angular_step() * ax;
  double sum = 0;
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    sum += c[k] * std::cos(static_cast<double>(k) * theta);
  }
  return 0.5 * c[0] + sum;
}

inline double cdf_eval(const FourierCosineModel& model, double x) {
  const double a = model.a();
  if (std::isnan(x)) {
    return x;
  }
  if (x <= -a) {
    return 0.0;
  }
  if (x >= a) {
    return 1.0;
  }
  const double ax = std::fabs(x);
  const auto& s = model.sine_coefficients();
  const double theta = model.angular_step() * ax;
  double sum = 0;
  for (std::size_t k = s.size() - 1; k >= 1; --k) {
    sum += s[k] * std::sin(static_cast<double>(k) * theta);
  }
  double upper = 0.5 * (ax / a + 1.0) + sum;  // F(|x|)
  double value = x < 0 ? 1.0 - upper : upper;
  return std::clamp(value, 0.0, 1.0);
}

inline double tail_prob(const FourierCosineModel& model, double x) {
  return std::clamp(1.0 - cdf_eval(model, x), 0.0, 1.0);
}

inline constexpr double kPercentileTolerance = 1e-12;

/// Solves F(x) = alpha by Newton's method from x = 0, keeping a bracket
/// [lo, hi] with F(lo) < alpha < F(hi). A step that leaves the bracket, or a
/// density below 1e-12, is replaced by bisection.
inline double percentile(const FourierCosineModel& model, double alpha,
                         double tol = kPercentileTolerance) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("percentile: alpha must lie in (0, 1)");
  }
  double lo = -model.a();
  double hi = model.a();
  double x = 0.0;
  double best_x = x;
  double best_err = INFINITY;
  for (int iter = 0; iter < 1000; ++iter) {
    const double f = cdf_eval(model, x) - alpha;
    if (std::fabs(f) < best_err) {
      best_err = std::fabs(f);
      best_x = x;
    }
    if (std::fabs(f) <= tol) {
      // One more in-bracket Newton step: the residual test bounds F, not x,
      // and where the density is small the two differ by a factor 1/f(x).
      const double d = pdf_eval(model, x);
      if (std::fabs(d) >= 1e-12 && f != 0) {
        const double polished = x - f / d;
        if (polished > lo && polished < hi &&
            std::fabs(cdf_eval(model, polished) - alpha) <= std::fabs(f)) {
          return polished;
        }
      }
      return x;
    }
    if (f < 0) {
      lo = x;
    } else {
      hi = x;
    }
    if (!(hi - lo > 2 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::fabs(x)))) {
      break;
    }
    const double d = pdf_eval(model, x);
    double next = 0.5 * (lo + hi);
    if (std::fabs(d) >= 1e-12) {
      const double newton = x - f / d;
      if (newton > lo && newton < hi) {
        next = newton;
      }
    }
    if (next == x) {
      next = 0.5 * (lo + hi);
    }
    x = next;
  }
  return best_x;
}

}  // namespace momcos

#endif  // MOMCOS_SERIES_HPP
