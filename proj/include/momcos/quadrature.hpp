#ifndef MOMCOS_QUADRATURE_HPP
#define MOMCOS_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace momcos {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Nodes and weights by Newton iteration on the three-term Legendre
/// recurrence, carried out in long double.
inline GaussLegendreRule make_gauss_legendre(int points) {
  if (points < 1) {
    throw std::invalid_argument("make_gauss_legendre: points must be >= 1");
  }
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(points));
  rule.weights.resize(static_cast<std::size_t>(points));
  const long double pi = std::numbers::pi_v<long double>;
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    long double x = std::cos(pi * (i + 0.75L) / (points + 0.5L));
    long double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= points; ++k) {
        long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (points == 1) {
        p1 = x;
        p0 = 1;
      }
      dp = points * (x * p1 - p0) / (x * x - 1);
      long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) {
        break;
      }
    }
    // Recompute the derivative at the converged node.
    long double p0 = 1, p1 = x;
    for (int k = 2; k <= points; ++k) {
      long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (points == 1) {
      x = 0;
      dp = 1;
    } else {
      dp = points * (x * p1 - p0) / (x * x - 1);
    }
    const long double w = 2 / ((1 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(points - 1 - i);
    rule.nodes[lo] = static_cast<double>(-x);
    rule.nodes[hi] = static_cast<double>(x);
    rule.weights[lo] = static_cast<double>(w);
    rule.weights[hi] = static_cast<double>(w);
  }
  return rule;
}

/// Cached rule; rules are immutable once built.
inline const GaussLegendreRule& gauss_legendre(int points) {
  static std::mutex mu;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(points);
  if (it == cache.end()) {
    it = cache.emplace(points, make_gauss_legendre(points)).first;
  }
  return it->second;
}

template <class F>
double integrate_gl(F&& f, double a, double b, const GaussLegendreRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

/// Composite rule: each [breaks[i], breaks[i+1]] split into `panels` equal
/// pieces, each integrated with `rule`.
template <class F>
double integrate_composite(F&& f, const std::vector<double>& breaks,
                           int panels, const GaussLegendreRule& rule) {
  double sum = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double h = (breaks[i + 1] - a) / panels;
    for (int p = 0; p < panels; ++p) {
      sum += integrate_gl(f, a + p * h, a + (p + 1) * h, rule);
    }
  }
  return sum;
}

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate,
                  double error_bound)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}
  double best_estimate() const { return best_estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

struct QuadratureSpec {
  int points = 64;
  double tolerance = 1e-13;
  int max_doublings = 10;
};

/// Doubles the panel count per breakpoint interval until two successive
/// estimates differ by less than spec.tolerance.
template <class F>
double integrate_adaptive(F&& f, const std::vector<double>& breaks,
                          const QuadratureSpec& spec = {}) {
  const auto& rule = gauss_legendre(spec.points);
  int panels = 1;
  double prev = integrate_composite(f, breaks, panels, rule);
  double diff = 0;
  for (int d = 0; d < spec.max_doublings; ++d) {
    panels *= 2;
    const double cur = integrate_composite(f, breaks, panels, rule);
    diff = std::fabs(cur - prev);
    if (diff < spec.tolerance) {
      return cur;
    }
    prev = cur;
  }
  throw QuadratureError("quadrature did not converge after " +
                            std::to_string(spec.max_doublings) + " doublings",
                        prev, diff);
}

}  // namespace momcos

#endif  // MOMCOS_QUADRATURE_HPP
