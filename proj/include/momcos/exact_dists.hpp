#ifndef MOMCOS_EXACT_DISTS_HPP
#define MOMCOS_EXACT_DISTS_HPP

#include <momcos/numerics.hpp>
#include <momcos/quadrature.hpp>
#include <momcos/series.hpp>
#include <momcos/support.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace momcos {

/// Centered Irwin-Hall density as exact piecewise polynomials.
///
/// Piece i covers [-n/2 + i, -n/2 + i + 1]; with t = x - (-n/2 + i),
///   f(x) = 1/(n-1)! sum_{j<=i} (-1)^j C(n,j) (t + i - j)^{n-1}.
/// The cdf piece is the exact antiderivative plus the accumulated mass of the
/// pieces to the left.
class PiecewisePolynomialPdf {
 public:
  explicit PiecewisePolynomialPdf(int n) : n_(n) {
    if (n < 1) {
      throw std::domain_error("PiecewisePolynomialPdf: n must be >= 1");
    }
    const auto deg = static_cast<unsigned long>(n - 1);
    BigInt fact;
    mpz_fac_ui(fact.get_mpz_t(), deg);
    BigRational mass(0);
    for (int i = 0; i < n; ++i) {
      breakpoints_.push_back(make_rational(2 * i - n, 2));
      std::vector<BigRational> poly(deg + 1, BigRational(0));
      for (int j = 0; j <= i; ++j) {
        const BigRational sign_binom =
            (j % 2 == 0 ? 1 : -1) * binomial(static_cast<unsigned long>(n),
                                             static_cast<unsigned long>(j));
        const BigInt shift(i - j);
        for (unsigned long m = 0; m <= deg; ++m) {
          BigInt shift_pow;
          mpz_pow_ui(shift_pow.get_mpz_t(), shift.get_mpz_t(), deg - m);
          poly[m] += sign_binom * binomial(deg, m) * BigRational(shift_pow);
        }
      }
      for (auto& c : poly) {
        c /= BigRational(fact);
      }
      std::vector<BigRational> antider(deg + 2, BigRational(0));
      antider[0] = mass;
      for (unsigned long m = 0; m <= deg; ++m) {
        antider[m + 1] = poly[m] / BigRational(static_cast<long>(m + 1));
      }
      BigRational piece_mass(0);
      for (unsigned long m = 1; m < antider.size(); ++m) {
        piece_mass += antider[m];  // evaluated at t = 1
      }
      mass += piece_mass;
      pdf_pieces_.push_back(std::move(poly));
      cdf_pieces_.push_back(std::move(antider));
    }
    breakpoints_.push_back(make_rational(n, 2));
    total_mass_ = mass;
  }

  int n() const { return n_; }
  const std::vector<BigRational>& breakpoints() const { return breakpoints_; }
  /// Local-variable coefficients of piece i, lowest degree first.
  const std::vector<BigRational>& piece(std::size_t i) const {
    return pdf_pieces_[i];
  }
  /// Sum of the exact piece integrals; 1 by construction of the density.
  const BigRational& total_mass() const { return total_mass_; }

  BigRational pdf_exact(const BigRational& x) const {
    const auto idx = locate(x);
    if (idx < 0) {
      return BigRational(0);
    }
    return horner(pdf_pieces_[static_cast<std::size_t>(idx)],
                  x - breakpoints_[static_cast<std::size_t>(idx)]);
  }

  BigRational cdf_exact(const BigRational& x) const {
    if (x <= breakpoints_.front()) {
      return BigRational(0);
    }
    if (x >= breakpoints_.back()) {
      return BigRational(1);
    }
    const auto idx = static_cast<std::size_t>(locate(x));
    return horner(cdf_pieces_[idx], x - breakpoints_[idx]);
  }

  double pdf(double x) const {
    if (!std::isfinite(x)) {
      return 0.0;
    }
    return pdf_exact(BigRational(x)).get_d();
  }

  double cdf(double x) const {
    if (std::isnan(x)) {
      return x;
    }
    if (std::isinf(x)) {
      return x < 0 ? 0.0 : 1.0;
    }
    return cdf_exact(BigRational(x)).get_d();
  }

 private:
  // Piece index containing x, or -1 outside the closed support.
  long locate(const BigRational& x) const {
    if (x < breakpoints_.front() || x > breakpoints_.back()) {
      return -1;
    }
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
      if (x <= breakpoints_[i + 1]) {
        return static_cast<long>(i);
      }
    }
    return static_cast<long>(breakpoints_.size()) - 2;
  }

  static BigRational horner(const std::vector<BigRational>& c,
                            const BigRational& t) {
    BigRational r(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      r = r * t + *it;
    }
    return r;
  }

  int n_;
  std::vector<BigRational> breakpoints_;
  std::vector<std::vector<BigRational>> pdf_pieces_;
  std::vector<std::vector<BigRational>> cdf_pieces_;
  BigRational total_mass_;
};

inline const PiecewisePolynomialPdf& irwin_hall(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PiecewisePolynomialPdf>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<PiecewisePolynomialPdf>(n);
  }
  return *slot;
}

inline double irwin_hall_pdf(int n, double x) { return irwin_hall(n).pdf(x); }

inline double irwin_hall_cdf(int n, double x) { return irwin_hall(n).cdf(x); }

/// Interior knots -n/2 + i, i = 1..n-1.
inline std::vector<double> irwin_hall_knots(int n) {
  std::vector<double> knots;
  for (int i = 1; i < n; ++i) {
    knots.push_back(-0.5 * n + i);
  }
  return knots;
}

/// Exact Fourier cosine coefficient of the centered Irwin-Hall density, from
/// its characteristic function: a_{n,k} = (2/n) (sin(k pi/n) / (k pi/n))^n.
inline BigFloat uniform_sum_coeff_exact_big(int n, int k,
                                            long precision_bits = kDefaultPrecisionBits) {
  if (n < 1 || k < 0) {
    throw std::domain_error("uniform_sum_coeff_exact: need n >= 1, k >= 0");
  }
  const BigFloat two_over_n(make_rational(2, n), precision_bits);
  if (k == 0) {
    return two_over_n;
  }
  if (k % n == 0) {
    return BigFloat(precision_bits);
  }
  const BigFloat t =
      BigFloat(make_rational(k, n), precision_bits) * pi_at(precision_bits);
  return two_over_n * pow(sin(t) / t, static_cast<unsigned long>(n));
}

inline double uniform_sum_coeff_exact(int n, int k) {
  return uniform_sum_coeff_exact_big(n, k).to_double();
}

/// Closed-form model sum_{k<=K} with exact Irwin-Hall coefficients.
inline FourierCosineModel uniform_sum_exact_model(
    int n, int K, long precision_bits = kDefaultPrecisionBits) {
  std::vector<BigFloat> coeffs;
  for (int k = 0; k <= K; ++k) {
    coeffs.push_back(uniform_sum_coeff_exact_big(n, k, precision_bits));
  }
  return FourierCosineModel(Family::UniformSum,
                            uniform_sum_support(n, precision_bits),
                            std::move(coeffs), Provenance::ClosedForm);
}

/// Model whose coefficients are integrated from the exact Irwin-Hall density.
inline FourierCosineModel uniform_sum_integral_model(
    int n, int K, long precision_bits = kDefaultPrecisionBits) {
  SupportSpec support = uniform_sum_support(n, precision_bits);
  const auto& ih = irwin_hall(n);
  const auto knots = irwin_hall_knots(n);
  std::vector<BigFloat> coeffs;
  coeffs.push_back(BigFloat(1.0, precision_bits) / support.a_at(precision_bits));
  for (int k = 1; k <= K; ++k) {
    const double ak = coeff_from_pdf([&](double x) { return ih.pdf(x); },
                                     support, k, knots);
    coeffs.push_back(BigFloat(ak, precision_bits));
  }
  return FourierCosineModel(Family::UniformSum, std::move(support),
                            std::move(coeffs), Provenance::FromIntegral);
}

struct GearyPoint {
  double x = 0;
  double rhs = 0;         // recurrence applied to the size n-1 model
  double model = 0;       // size n model at x
  double quad_error = 0;  // |rhs(Q) - rhs(2Q)|
};

struct GearyReport {
  int n = 0;
  std::vector<GearyPoint> points;
  double max_deviation = 0;
  double max_quad_error = 0;
};

class GearyQuadratureError : public std::runtime_error {
 public:
  GearyQuadratureError(const std::string& what, std::vector<GearyPoint> pts)
      : std::runtime_error(what), points_(std::move(pts)) {}
  const std::vector<GearyPoint>& points() const { return points_; }

 private:
  std::vector<GearyPoint> points_;
};

namespace detail {

// sigma_{n-1}(x, z) with z = sin(theta).
inline double geary_sigma(int n, double x, double theta) {
  const double z = std::sin(theta);
  const double c = std::cos(theta);
  return (std::sqrt(n - 1.0) * x - 3.0 * z + (n + 1.0) * z * z * z) /
         (std::sqrt(static_cast<double>(n)) * c * c * c);
}

// Integral over theta in (-pi/2, pi/2) of f_{n-1}(sigma) cos^{n-6}(theta),
// split where |sigma| crosses the support edge of f_{n-1} (the truncated
// density jumps to zero there).
inline double geary_integral(const FourierCosineModel& prev, int n, double x,
                             int points) {
  const double edge = prev.a();
  const double half_pi = std::numbers::pi / 2;
  const int scan = 4096;
  auto inside = [&](double th) {
    return std::fabs(geary_sigma(n, x, th)) <= edge;
  };
  std::vector<double> breaks{-half_pi};
  double prev_th = -half_pi + half_pi / scan;
  bool prev_in = inside(prev_th);
  for (int i = 1; i < 2 * scan - 1; ++i) {
    const double th = -half_pi + (i + 1) * half_pi / scan;
    const bool in = inside(th);
    if (in != prev_in) {
      double lo = prev_th, hi = th;
      for (int b = 0; b < 80 && hi - lo > 1e-15; ++b) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) == prev_in ? lo : hi) = mid;
      }
      breaks.push_back(0.5 * (lo + hi));
    }
    prev_th = th;
    prev_in = in;
  }
  breaks.push_back(half_pi);

  const auto& rule = gauss_legendre(points);
  auto integrand = [&](double th) {
    const double c = std::cos(th);
    if (c <= 0) {
      return 0.0;
    }
    return pdf_eval(prev, geary_sigma(n, x, th)) * std::pow(c, n - 6);
  };
  double sum = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    if (!inside(mid)) {
      continue;
    }
    sum += integrate_gl(integrand, breaks[i], breaks[i + 1], rule);
  }
  return sum;
}

}  // namespace detail

inline constexpr int kGearyQuadPoints = 256;

// Regression bound on max |rhs - model| for n = 6 over 101 points on
// [-A/2, A/2], frozen from a measured 0.00373.
inline constexpr double kGearyRegressionBound = 0.005;

/// Applies the density recurrence for sqrt(b1)
///   f_n(x) = sqrt((n-1)/n) / B(1/2, (n-2)/2)
///            * int_{-1}^{1} f_{n-1}(sigma_{n-1}(x, z)) (1 - z^2)^{(n-7)/2} dz
/// to the size n-1 model and compares with the size n model on `grid`.
/// Substituting z = sin(theta) removes the endpoint singularity for n >= 6.
inline GearyReport geary_consistency(const FourierCosineModel& model_prev,
                                     const FourierCosineModel& model_cur,
                                     const std::vector<double>& grid,
                                     int quad_points = kGearyQuadPoints,
                                     double quad_tolerance = 1e-8) {
  const int n = model_cur.n();
  if (n < 6) {
    throw std::domain_error(
        "geary_consistency: n must be >= 6 (the (n-7)/2 exponent is not "
        "integrable under the sine substitution for smaller n)");
  }
  if (model_prev.n() != n - 1 || model_prev.family() != model_cur.family() ||
      model_cur.family() != Family::NormalSkewness) {
    throw std::invalid_argument(
        "geary_consistency: need skewness models for sizes n-1 and n");
  }
  const double prefactor = std::sqrt((n - 1.0) / n) /
                           beta_half(n, kDefaultPrecisionBits).to_double();
  GearyReport report;
  report.n = n;
  bool failed = false;
  for (double x : grid) {
    GearyPoint p;
    p.x = x;
    const double coarse =
        prefactor * detail::geary_integral(model_prev, n, x, quad_points);
    const double fine =
        prefactor * detail::geary_integral(model_prev, n, x, 2 * quad_points);
    p.rhs = fine;
    p.quad_error = std::fabs(fine - coarse);
    p.model = pdf_eval(model_cur, x);
    report.max_deviation = std::max(report.max_deviation, std::fabs(p.rhs - p.model));
    report.max_quad_error = std::max(report.max_quad_error, p.quad_error);
    failed = failed || !(p.quad_error <= quad_tolerance);
    report.points.push_back(p);
  }
  if (failed) {
    throw GearyQuadratureError("geary_consistency: quadrature error above " +
                                   std::to_string(quad_tolerance),
                               report.points);
  }
  return report;
}

}  // namespace momcos

#endif  // MOMCOS_EXACT_DISTS_HPP
