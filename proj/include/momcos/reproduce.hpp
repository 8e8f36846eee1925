#ifndef MOMCOS_REPRODUCE_HPP
#define MOMCOS_REPRODUCE_HPP

#include <momcos/exact_dists.hpp>
#include <momcos/series.hpp>
#include <momcos/tables.hpp>

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace momcos {

enum class ToleranceRule {
  Absolute,      // |computed - printed| <= tolerance
  FactorBand,    // printed / tolerance <= computed <= printed * tolerance
  TinyMagnitude  // |computed| <= tolerance (printed value is rounding noise)
};

inline const char* rule_name(ToleranceRule r) {
  switch (r) {
    case ToleranceRule::Absolute: return "abs";
    case ToleranceRule::FactorBand: return "factor";
    case ToleranceRule::TinyMagnitude: return "tiny";
  }
  return "?";
}

struct CellComparison {
  int table_id = 0;
  std::string row_label;
  std::string column_label;
  std::string reference_text;
  double reference = 0;
  double computed = 0;
  double abs_difference = 0;
  ToleranceRule rule = ToleranceRule::Absolute;
  double tolerance = 0;
  bool underlined = false;
  bool pass = false;
};

struct ComparisonReport {
  int table_id = 0;
  std::string caption;
  std::vector<CellComparison> cells;  // row-major
  double max_difference = 0;
  std::size_t failures = 0;
  bool pass = false;
};

// Tolerances
inline constexpr double kCoefficientDigitUnits = 5;   // of the 6th significant digit
inline constexpr double kTinyCellThreshold = 1e-12;   // printed rounding noise
inline constexpr double kFourDecimalTolerance = 1e-4;
inline constexpr double kUnderlinedTolerance = 2e-4;
inline constexpr double kMaxDeviationFactor = 2;

namespace detail {

inline int label_int(const std::string& label) {
  const auto eq = label.find('=');
  return std::stoi(eq == std::string::npos ? label : label.substr(eq + 1));
}

inline double label_double(const std::string& label) {
  const auto eq = label.find('=');
  return std::stod(eq == std::string::npos ? label : label.substr(eq + 1));
}

inline CellComparison compare_cell(int id, const ReferenceTable& t, std::size_t r,
                                   std::size_t c, double computed,
                                   ToleranceRule rule, double tolerance) {
  const ReferenceCell& ref = t.cells[r][c];
  CellComparison cmp;
  cmp.table_id = id;
  cmp.row_label = t.row_labels[r];
  cmp.column_label = t.column_labels[c];
  cmp.reference_text = ref.text;
  cmp.reference = ref.decimal.value();
  cmp.computed = computed;
  cmp.abs_difference = std::fabs(computed - cmp.reference);
  cmp.rule = rule;
  cmp.tolerance = tolerance;
  cmp.underlined = ref.underlined;
  switch (rule) {
    case ToleranceRule::Absolute:
      cmp.pass = cmp.abs_difference <= tolerance;
      break;
    case ToleranceRule::FactorBand:
      cmp.pass = computed >= cmp.reference / tolerance &&
                 computed <= cmp.reference * tolerance;
      break;
    case ToleranceRule::TinyMagnitude:
      cmp.pass = std::fabs(computed) <= tolerance;
      break;
  }
  return cmp;
}

// Six-significant-digit coefficient rule shared by the coefficient tables.
inline CellComparison compare_coefficient(int id, const ReferenceTable& t,
                                          std::size_t r, std::size_t c,
                                          double computed) {
  const auto& dec = t.cells[r][c].decimal;
  if (std::fabs(dec.value()) < kTinyCellThreshold) {
    return compare_cell(id, t, r, c, computed, ToleranceRule::TinyMagnitude,
                        kTinyCellThreshold);
  }
  return compare_cell(id, t, r, c, computed, ToleranceRule::Absolute,
                      kCoefficientDigitUnits * dec.significant_digit_unit(6));
}

inline double four_decimal_tolerance(const ReferenceCell& cell) {
  return cell.underlined ? kUnderlinedTolerance : kFourDecimalTolerance;
}

}  // namespace detail

/// Recomputes every non-gap cell of reference table `table` and compares.
inline ComparisonReport compare_table(const ReferenceTable& t,
                                      long precision_bits = kDefaultPrecisionBits) {
  ComparisonReport rep;
  rep.table_id = t.id;
  rep.caption = t.caption;
  std::map<int, FourierCosineModel> models;
  auto model_for = [&](Family f, int n, int K, int J) -> const FourierCosineModel& {
    const int key = n * 1000 + K;
    auto it = models.find(key);
    if (it == models.end()) {
      it = models.emplace(key, build_model(f, n, {K, J}, precision_bits)).first;
    }
    return it->second;
  };
  const int id = t.id;

  if (t.kind == "max-deviation") {
    std::size_t kcol = 0, jcol = 1, vcol = 2;
    for (std::size_t c = 0; c < t.columns(); ++c) {
      if (t.column_labels[c] == "K") kcol = c;
      if (t.column_labels[c] == "J") jcol = c;
      if (t.column_labels[c] == "max_dev") vcol = c;
    }
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const int n = detail::label_int(t.row_labels[r]);
      const int K = std::stoi(t.cells[r][kcol].text);
      const int J = std::stoi(t.cells[r][jcol].text);
      const auto& m = model_for(Family::UniformSum, n, K, J);
      double max_dev = 0;
      for (int k = 0; k <= K; ++k) {
        const BigFloat diff =
            m.coefficients()[static_cast<std::size_t>(k)] -
            uniform_sum_coeff_exact_big(n, k, precision_bits);
        max_dev = std::max(max_dev, std::fabs(diff.to_double()));
      }
      rep.cells.push_back(detail::compare_cell(id, t, r, vcol, max_dev,
                                               ToleranceRule::FactorBand,
                                               kMaxDeviationFactor));
    }
  } else if (t.kind == "uniform-coefficients" ||
             t.kind == "skewness-coefficients") {
    const bool uniform = t.kind == "uniform-coefficients";
    const Family fam = uniform ? Family::UniformSum : Family::NormalSkewness;
    const int K = detail::label_int(t.row_labels.back());
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const auto k = static_cast<std::size_t>(detail::label_int(t.row_labels[r]));
      for (std::size_t c = 0; c < t.columns(); ++c) {
        if (t.cells[r][c].gap) {
          continue;
        }
        const int n = detail::label_int(t.column_labels[c]);
        const int J = default_truncation(fam, n).value().J;
        const auto& m = model_for(fam, n, K, J);
        rep.cells.push_back(detail::compare_coefficient(
            id, t, r, c, m.cosine_coefficients()[k]));
      }
    }
  } else if (t.kind == "uniform-percentiles" ||
             t.kind == "skewness-percentiles") {
    const Family fam = t.kind == "uniform-percentiles" ? Family::UniformSum
                                                        : Family::NormalSkewness;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const int n = detail::label_int(t.row_labels[r]);
      const auto trunc = default_truncation(fam, n).value();
      const auto& m = model_for(fam, n, trunc.K, trunc.J);
      for (std::size_t c = 0; c < t.columns(); ++c) {
        if (t.cells[r][c].gap) {
          continue;
        }
        const double alpha = detail::label_double(t.column_labels[c]);
        rep.cells.push_back(detail::compare_cell(
            id, t, r, c, percentile(m, alpha), ToleranceRule::Absolute,
            detail::four_decimal_tolerance(t.cells[r][c])));
      }
    }
  } else if (t.kind == "skewness-tail") {
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double x = detail::label_double(t.row_labels[r]);
      for (std::size_t c = 0; c < t.columns(); ++c) {
        if (t.cells[r][c].gap) {
          continue;
        }
        const int n = detail::label_int(t.column_labels[c]);
        const auto trunc = default_truncation(Family::NormalSkewness, n).value();
        const auto& m = model_for(Family::NormalSkewness, n, trunc.K, trunc.J);
        rep.cells.push_back(detail::compare_cell(
            id, t, r, c, tail_prob(m, x), ToleranceRule::Absolute,
            detail::four_decimal_tolerance(t.cells[r][c])));
      }
    }
  } else {
    throw std::invalid_argument("compare_table: unknown table kind '" + t.kind + "'");
  }

  for (const auto& cell : rep.cells) {
    rep.max_difference = std::max(rep.max_difference, cell.abs_difference);
    if (!cell.pass) {
      ++rep.failures;
    }
  }
  rep.pass = rep.failures == 0;
  return rep;
}

inline ComparisonReport reproduce_table(int id,
                                        const std::string& data_dir = kDefaultDataDir,
                                        long precision_bits = kDefaultPrecisionBits) {
  return compare_table(load_reference_table(data_dir, id), precision_bits);
}

}  // namespace momcos

#endif  // MOMCOS_REPRODUCE_HPP
