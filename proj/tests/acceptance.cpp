// Acceptance checks 1-10. One PASS/FAIL line per check; exit status is the
// number of failed checks (0 when all pass).

#include <momcos/momcos.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace momcos;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string failed_cells(const ComparisonReport& r) {
  std::string s;
  for (const auto& c : r.cells) {
    if (c.pass) continue;
    s += " [T" + std::to_string(r.table_id) + " " + c.row_label + "/" + c.column_label +
         " printed " + c.reference_text + " got " + fmt("%.6g", c.computed) + "]";
  }
  return s;
}

Outcome tables_check(const std::vector<int>& ids) {
  Outcome o{true, ""};
  for (int id : ids) {
    const auto rep = reproduce_table(id);
    o.pass = o.pass && rep.pass;
    o.detail += "T" + std::to_string(id) + " " + std::to_string(rep.cells.size() - rep.failures) +
                "/" + std::to_string(rep.cells.size()) + " ";
    o.detail += failed_cells(rep);
  }
  return o;
}

// ---- 1
Outcome check_table1() {
  const auto rep = reproduce_table(1);
  std::string d;
  for (const auto& c : rep.cells) {
    d += c.row_label + ":" + fmt("%.3e", c.computed) + "(" + c.reference_text + ") ";
  }
  return {rep.pass, d};
}

// ---- 2
Outcome check_tables23() { return tables_check({2, 3}); }

// ---- 3
Outcome check_table4() {
  Outcome o = tables_check({4});
  const auto m = build_default_model(Family::UniformSum, 4);
  const double x99 = percentile(m, 0.99);
  const double mass = irwin_hall_cdf(4, x99);
  const bool cross = std::fabs(mass - 0.990006) <= 2e-6;
  o.pass = o.pass && cross;
  o.detail += "F4_exact(x_0.99=" + fmt("%.6f", x99) + ")=" + fmt("%.7f", mass);
  return o;
}

// ---- 4
Outcome check_tables567() {
  Outcome o = tables_check({5, 6, 7});
  double worst = 0;
  for (int n = 4; n <= 22; n += 2) {
    const auto m = build_default_model(Family::NormalSkewness, n);
    // a_0 = 1/A = sqrt(n-1)/(n-2)
    const BigFloat analytic =
        sqrt(BigFloat(make_rational(n - 1, (n - 2) * (n - 2)), kDefaultPrecisionBits));
    worst = std::max(worst, std::fabs((m.coefficients()[0] - analytic).to_double()));
  }
  const bool a0_ok = worst < 1e-60;
  const double a0_4 = build_default_model(Family::NormalSkewness, 4).cosine_coefficients()[0];
  const bool n4_ok = std::fabs(a0_4 - std::sqrt(3.0) / 2) < 1e-15;
  o.pass = o.pass && a0_ok && n4_ok;
  o.detail += "a0 vs 1/A max " + fmt("%.1e", worst) + "; n=4 a0 " + fmt("%.9f", a0_4);
  return o;
}

// ---- 5, 6
Outcome check_table8() { return tables_check({8}); }
Outcome check_table9() { return tables_check({9}); }

// ---- 7
Outcome check_moments() {
  const auto m4 = uniform_sum_moments(4, 35);
  bool closed_ok = m4.even_moments.size() == 36;
  for (unsigned long j = 0; j <= 35 && closed_ok; ++j) {
    closed_ok = m4[j] == uniform4_moment_closed(j);
  }
  bool exact_ok = true;
  bool mc_ok = true;
  double worst_z = 0;
  for (int n = 3; n <= 22; ++n) {
    const BigRational var = skewness_moments(n, 1)[1];
    exact_ok = exact_ok && var == skewness_variance(n);
    const auto batch = sample_skewness(n, 1'000'000, 20 + static_cast<std::uint64_t>(n));
    double s = 0, s2 = 0;
    for (double v : batch.values) {
      s += v * v;
      s2 += v * v * v * v;
    }
    const double N = static_cast<double>(batch.values.size());
    const double mean = s / N;
    const double se = std::sqrt((s2 / N - mean * mean) / N);
    const double z = std::fabs(mean - var.get_d()) / se;
    worst_z = std::max(worst_z, z);
    mc_ok = mc_ok && z <= 3;
  }
  return {closed_ok && exact_ok && mc_ok,
          std::string("closed form 36/36 ") + (closed_ok ? "equal" : "DIFFER") +
              "; variance n=3..22 " + (exact_ok ? "exact" : "MISMATCH") +
              "; MC worst |z| " + fmt("%.2f", worst_z)};
}

// ---- 8
struct Config {
  Family family;
  int n;
};

std::vector<Config> shipped_configs() {
  std::vector<Config> out;
  for (int n = 2; n <= 12; n += 2) out.push_back({Family::UniformSum, n});
  for (int n = 4; n <= 22; n += 2) out.push_back({Family::NormalSkewness, n});
  return out;
}

Outcome check_properties() {
  std::string mono_fail, sym_fail, fd_fail, rt_fail, edge_fail;
  double worst_drop = 0, worst_sym = 0, worst_fd = 0, worst_rt = 0;
  for (const auto& cfg : shipped_configs()) {
    const auto m = build_default_model(cfg.family, cfg.n);
    const double a = m.a();
    const std::string tag =
        std::string(cfg.family == Family::UniformSum ? "U" : "S") + std::to_string(cfg.n) + " ";
    const int N = 10000;

    double prev = cdf_eval(m, -a), drop = 0, sym = 0, fd = 0;
    for (int i = 0; i <= N; ++i) {
      const double x = -a + 2 * a * i / N;
      const double c = cdf_eval(m, x);
      drop = std::max(drop, prev - c);
      prev = c;
      sym = std::max(sym, std::fabs(c + cdf_eval(m, -x) - 1));
      const double h = 1e-4;
      if (x - h >= -a && x + h <= a) {
        const double d = (cdf_eval(m, x + h) - cdf_eval(m, x - h)) / (2 * h);
        fd = std::max(fd, std::fabs(d - pdf_eval(m, x)));
      }
    }
    double rt = 0;
    for (int i = 1; i < 2000; ++i) {
      const double x = -a + 2 * a * i / 2000;
      if (!(pdf_eval(m, x) > 1e-6)) continue;
      const double alpha = cdf_eval(m, x);
      if (!(alpha > 0 && alpha < 1)) {
        rt = std::numeric_limits<double>::infinity();
        continue;
      }
      rt = std::max(rt, std::fabs(percentile(m, alpha) - x));
    }
    if (drop > 0) mono_fail += tag;
    if (sym > 1e-13) sym_fail += tag;
    if (fd > 1e-5) fd_fail += tag;
    if (rt > 1e-9) rt_fail += tag;
    if (cdf_eval(m, -a) != 0.0 || cdf_eval(m, a) != 1.0) edge_fail += tag;
    worst_drop = std::max(worst_drop, drop);
    worst_sym = std::max(worst_sym, sym);
    worst_fd = std::max(worst_fd, fd);
    worst_rt = std::max(worst_rt, rt);
  }
  const bool pass = mono_fail.empty() && sym_fail.empty() && fd_fail.empty() &&
                    rt_fail.empty() && edge_fail.empty();
  auto part = [](const char* name, const std::string& f, const std::string& worst) {
    return std::string(name) + (f.empty() ? " ok" : " FAIL{" + f.substr(0, f.size() - 1) + "}") +
           " (" + worst + "); ";
  };
  return {pass, part("monotone", mono_fail, "max drop " + fmt("%.2e", worst_drop)) +
                    part("symmetry", sym_fail, fmt("%.1e", worst_sym)) +
                    part("fd h=1e-4", fd_fail, fmt("%.2e", worst_fd)) +
                    part("round trip", rt_fail, fmt("%.2e", worst_rt)) +
                    part("cdf(+-A)", edge_fail, "exact")};
}

// ---- 9
Outcome check_monte_carlo() {
  bool pass = true;
  std::string d;
  for (int n : {2, 4, 6, 8, 10, 12}) {
    const auto batch = sample_uniform_sum(n, 1'000'000, 1);
    const double ks = ks_distance(batch, build_default_model(Family::UniformSum, n));
    pass = pass && ks <= 0.003;
    d += "U" + std::to_string(n) + "=" + fmt("%.5f", ks) + " ";
  }
  for (int n : {6, 20}) {
    const auto batch = sample_skewness(n, 1'000'000, 1);
    const double ks = ks_distance(batch, build_default_model(Family::NormalSkewness, n));
    pass = pass && ks <= 0.005;
    d += "S" + std::to_string(n) + "=" + fmt("%.5f", ks) + " ";
  }
  const auto a = sample_skewness(6, 1'000'000, 1, 1);
  const auto b = sample_skewness(6, 1'000'000, 1, 4);
  const bool same = a.values == b.values;
  pass = pass && same;
  d += same ? "; repeat run identical" : "; repeat run DIFFERS";
  return {pass, d};
}

// ---- 10
Outcome check_precision() {
  double worst = 0;
  for (int n = 4; n <= 22; n += 2) {
    const auto lo = build_model(Family::NormalSkewness, n, {12, 50}, 320);
    const auto hi = build_model(Family::NormalSkewness, n, {12, 50}, 640);
    for (int k = 0; k <= 12; ++k) {
      const BigFloat diff = lo.coefficients()[static_cast<std::size_t>(k)] -
                            hi.coefficients()[static_cast<std::size_t>(k)];
      worst = std::max(worst, std::fabs(diff.to_double()));
    }
  }
  return {worst <= 1e-20, "max |a(320) - a(640)| = " + fmt("%.2e", worst)};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Table 1 max deviation within factor 2", 10, check_table1},
      {2, "Tables 2-3 coefficients", 10, check_tables23},
      {3, "Table 4 percentiles + exact cdf cross-check", 30, check_table4},
      {4, "Tables 5-7 skewness coefficients + a0 = 1/A", 60, check_tables567},
      {5, "Table 8 tail probabilities", 60, check_table8},
      {6, "Table 9 percentiles", 0, check_table9},
      {7, "Moment oracles", 0, check_moments},
      {8, "Property suite over shipped models", 0, check_properties},
      {9, "Monte Carlo KS distances", 300, check_monte_carlo},
      {10, "Precision regression 320 vs 640 bits", 0, check_precision},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = c.limit_seconds <= 0 || secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << " ("
         << fmt("%.2f", secs) << " s";
    if (c.limit_seconds > 0) line << ", limit " << c.limit_seconds << " s";
    line << "): " << o.detail;
    std::printf("%s\n", line.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
