// momcos: command-line front end for the Fourier cosine moment models.
//
//   momcos coeffs      --dist uniform-sum|skewness -n N [-K K -J J] [--exact]
//   momcos eval        pdf|cdf|tail --dist D -n N (-x X... | --grid a:b:steps)
//   momcos percentile  --dist D -n N [--alpha a1,a2,...]
//   momcos reproduce   --table 1..9
//   momcos mc          --dist D -n N [-N draws] [--seed S] [--bins B] [--out FILE]
//   momcos check-geary -n N [--points P] [--xmax X] [--bound B]
//
// Exit status: 0 success, 1 comparison failure, 2 usage error,
// 3 numerical or I/O error.

#include <momcos/momcos.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

using json = nlohmann::ordered_json;
using namespace momcos;

namespace {

constexpr const char* kSchema = "momcos.output/1";

enum Exit { kOk = 0, kComparisonFailed = 1, kUsage = 2, kRuntime = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, long long, std::string, bool>;

struct Output {
  std::string command;
  json params = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json summary = json::object();
  int default_decimals = 10;
};

struct Globals {
  long precision_bits = kDefaultPrecisionBits;
  std::string format = "csv";
  std::optional<int> decimals;
  std::string data_dir = kDefaultDataDir;
};

std::string format_number(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  if (v != 0 && std::fabs(v) < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.*e", decimals, v);
  } else {
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  }
  return buf;
}

std::string csv_field(const Cell& c, int decimals) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(v, decimals);
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) {
            if (ch == '"') q += '"';
            q += ch;
          }
          return q + "\"";
        }
      },
      c);
}

json json_value(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
        }
        return v;
      },
      c);
}

void emit(const Output& out, const Globals& g) {
  const int decimals = g.decimals.value_or(out.default_decimals);
  if (g.format == "json") {
    json rows = json::array();
    for (const auto& r : out.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < out.columns.size(); ++i) {
        obj[out.columns[i]] = json_value(r[i]);
      }
      rows.push_back(std::move(obj));
    }
    json params = out.params;
    params["precision_bits"] = g.precision_bits;
    json doc = {{"schema", kSchema},
                {"command", out.command},
                {"params", params},
                {"results", {{"columns", out.columns},
                             {"rows", rows},
                             {"summary", out.summary}}}};
    std::cout << doc.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < out.columns.size(); ++i) {
    std::cout << (i ? "," : "") << out.columns[i];
  }
  std::cout << '\n';
  for (const auto& r : out.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::cout << (i ? "," : "") << csv_field(r[i], decimals);
    }
    std::cout << '\n';
  }
  // csv keeps stdout a single table; the summary goes to stderr
  for (const auto& [key, val] : out.summary.items()) {
    std::cerr << "# " << key << ": "
              << (val.is_string() ? val.get<std::string>() : val.dump()) << '\n';
  }
}

Family parse_family(const std::string& s) {
  if (s == "uniform-sum") return Family::UniformSum;
  if (s == "skewness") return Family::NormalSkewness;
  throw UsageError("--dist must be uniform-sum or skewness, got '" + s + "'");
}

void check_n(Family f, int n) {
  if (f == Family::UniformSum && n < 1) {
    throw UsageError("uniform-sum needs n >= 1");
  }
  if (f == Family::NormalSkewness && n < 3) {
    throw UsageError("skewness needs n >= 3");
  }
}

struct ModelArgs {
  std::string dist = "uniform-sum";
  int n = 0;
  std::optional<int> K;
  std::optional<int> J;
};

void add_model_options(CLI::App* cmd, ModelArgs& m) {
  cmd->add_option("--dist", m.dist, "uniform-sum or skewness")->required();
  cmd->add_option("-n", m.n, "number of summands / sample size")->required();
  cmd->add_option("-K", m.K, "cosine harmonics (default per distribution)");
  cmd->add_option("-J", m.J, "moment-series order (default per distribution)");
}

TruncationSpec resolve_truncation(Family f, const ModelArgs& m) {
  const auto def = default_truncation(f, m.n);
  if ((!m.K || !m.J) && !def) {
    throw UsageError("no default (K, J) for " + m.dist + " n = " +
                     std::to_string(m.n) + "; give -K and -J");
  }
  TruncationSpec t = def.value_or(TruncationSpec{});
  if (m.K) t.K = *m.K;
  if (m.J) t.J = *m.J;
  if (t.K < 0 || t.J < 0) {
    throw UsageError("-K and -J must be >= 0");
  }
  return t;
}

json model_params(const ModelArgs& m, const TruncationSpec& t) {
  return {{"dist", m.dist}, {"n", m.n}, {"K", t.K}, {"J", t.J}};
}

// ---- coeffs

Output cmd_coeffs(const ModelArgs& m, bool exact, const Globals& g) {
  const Family f = parse_family(m.dist);
  if (exact && f != Family::UniformSum) {
    throw UsageError("--exact is only available for --dist uniform-sum");
  }
  check_n(f, m.n);
  const TruncationSpec t = resolve_truncation(f, m);
  const auto model = build_model(f, m.n, t, g.precision_bits);

  Output out;
  out.command = "coeffs";
  out.params = model_params(m, t);
  out.params["exact"] = exact;
  out.columns = {"k", "coefficient"};
  if (exact) {
    out.columns.insert(out.columns.end(), {"exact", "difference"});
  }
  double max_diff = 0;
  for (int k = 0; k <= t.K; ++k) {
    const BigFloat& c = model.coefficients()[static_cast<std::size_t>(k)];
    std::vector<Cell> row{static_cast<long long>(k), c.to_double()};
    if (exact) {
      const BigFloat e = uniform_sum_coeff_exact_big(m.n, k, g.precision_bits);
      const double diff = (c - e).to_double();
      max_diff = std::max(max_diff, std::fabs(diff));
      row.push_back(e.to_double());
      row.push_back(diff);
    }
    out.rows.push_back(std::move(row));
  }
  out.summary["provenance"] = provenance_name(model.provenance());
  if (exact) {
    out.summary["max_abs_difference"] = max_diff;
  }
  return out;
}

// ---- eval

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(p);
  if (parts.size() != 3 || spec.back() == ':') {
    throw UsageError("--grid must look like a:b:steps, got '" + spec + "'");
  }
  double a = 0, b = 0;
  long steps = 0;
  try {
    std::size_t used = 0;
    a = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    b = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    steps = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::exception&) {
    throw UsageError("--grid must look like a:b:steps, got '" + spec + "'");
  }
  if (!(b > a) || steps < 1 || steps > 10'000'000) {
    throw UsageError("--grid needs a < b and 1 <= steps <= 1e7");
  }
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(steps) + 1);
  for (long i = 0; i <= steps; ++i) {
    xs.push_back(i == steps ? b : a + (b - a) * static_cast<double>(i) / steps);
  }
  return xs;
}

Output cmd_eval(const ModelArgs& m, const std::string& which,
                const std::vector<double>& xs_in, const std::string& grid,
                bool clip, const Globals& g) {
  const Family f = parse_family(m.dist);
  check_n(f, m.n);
  if (which != "pdf" && which != "cdf" && which != "tail") {
    throw UsageError("eval: function must be pdf, cdf or tail");
  }
  if (xs_in.empty() == grid.empty()) {
    throw UsageError("eval: give either -x or --grid");
  }
  if (clip && which != "pdf") {
    throw UsageError("--clip applies to pdf only");
  }
  const TruncationSpec t = resolve_truncation(f, m);
  const auto model = build_model(f, m.n, t, g.precision_bits);
  const std::vector<double> xs = grid.empty() ? xs_in : parse_grid(grid);
  const double a = model.a();
  for (double x : xs) {
    if (!(x >= -a - 1 && x <= a + 1)) {
      throw UsageError("eval: points must lie in [-A-1, A+1] = [" +
                       std::to_string(-a - 1) + ", " + std::to_string(a + 1) + "]");
    }
  }
  Output out;
  out.command = "eval";
  out.params = model_params(m, t);
  out.params["function"] = which;
  if (!grid.empty()) out.params["grid"] = grid;
  out.params["clip"] = clip;
  out.columns = {"x", which};
  for (double x : xs) {
    double v = 0;
    if (which == "pdf") {
      v = pdf_eval(model, x);
      if (clip) v = std::max(0.0, v);
    } else if (which == "cdf") {
      v = cdf_eval(model, x);
    } else {
      v = tail_prob(model, x);
    }
    out.rows.push_back({x, v});
  }
  out.summary["A"] = a;
  return out;
}

// ---- percentile

Output cmd_percentile(const ModelArgs& m, std::vector<double> alphas,
                      const Globals& g) {
  const Family f = parse_family(m.dist);
  check_n(f, m.n);
  if (alphas.empty()) {
    alphas = {0.9, 0.95, 0.975, 0.99, 0.995, 0.999};
  }
  for (double al : alphas) {
    if (!(al > 0 && al < 1)) {
      throw UsageError("alpha must lie in (0, 1), got " + std::to_string(al));
    }
  }
  const TruncationSpec t = resolve_truncation(f, m);
  const auto model = build_model(f, m.n, t, g.precision_bits);
  Output out;
  out.command = "percentile";
  out.params = model_params(m, t);
  out.params["tolerance"] = kPercentileTolerance;
  out.columns = {"alpha", "x"};
  out.default_decimals = 4;
  for (double al : alphas) {
    out.rows.push_back({al, percentile(model, al)});
  }
  return out;
}

// ---- reproduce

Output cmd_reproduce(int table, const Globals& g, int& status) {
  if (table < 1 || table > 9) {
    throw UsageError("--table must be in 1..9, got " + std::to_string(table));
  }
  const ComparisonReport rep = reproduce_table(table, g.data_dir, g.precision_bits);
  Output out;
  out.command = "reproduce";
  out.params = {{"table", table}, {"data_dir", g.data_dir}};
  out.columns = {"row", "column", "printed", "computed", "difference",
                 "rule", "tolerance", "underlined", "pass"};
  out.default_decimals = 8;
  for (const auto& c : rep.cells) {
    out.rows.push_back({c.row_label, c.column_label, c.reference_text, c.computed,
                        c.abs_difference, std::string(rule_name(c.rule)),
                        c.tolerance, c.underlined, c.pass});
  }
  out.summary["caption"] = rep.caption;
  out.summary["cells"] = rep.cells.size();
  out.summary["failures"] = rep.failures;
  out.summary["max_difference"] = rep.max_difference;
  out.summary["pass"] = rep.pass;
  status = rep.pass ? kOk : kComparisonFailed;
  return out;
}

// ---- mc

struct McArgs {
  ModelArgs model;
  long long draws = 1'000'000;
  std::uint64_t seed = 1;
  int bins = 100;
  unsigned threads = 0;
  std::string out_path;
};

Output cmd_mc(const McArgs& a, const Globals& g) {
  const Family f = parse_family(a.model.dist);
  check_n(f, a.model.n);
  if (a.draws < 100) {
    throw UsageError("-N must be >= 100");
  }
  if (a.bins < 1) {
    throw UsageError("--bins must be >= 1");
  }
  const TruncationSpec t = resolve_truncation(f, a.model);
  const auto model = build_model(f, a.model.n, t, g.precision_bits);

  std::ofstream file;
  if (!a.out_path.empty()) {
    file.open(a.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + a.out_path + "' for writing");
  }

  const SampleBatch batch = sample_family(
      f, a.model.n, static_cast<std::size_t>(a.draws), a.seed, a.threads);
  const double ks = ks_distance(batch, model);

  if (file.is_open()) {
    const Histogram h = histogram(batch, a.bins);
    file << "center,height,model_pdf\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      const double c = h.center(i);
      file << format_number(c, 10) << ',' << format_number(h.heights[i], 10)
           << ',' << format_number(pdf_eval(model, c), 10) << '\n';
    }
    file.close();
    if (!file) throw IoError("write to '" + a.out_path + "' failed");
  }

  Output out;
  out.command = "mc";
  out.params = model_params(a.model, t);
  out.params["N"] = a.draws;
  out.params["seed"] = a.seed;
  out.params["bins"] = a.bins;
  out.params["generator"] = batch.generator;
  if (!a.out_path.empty()) out.params["out"] = a.out_path;
  out.columns = {"dist", "n", "N", "seed", "ks_distance", "redraws"};
  out.default_decimals = 6;
  out.rows.push_back({a.model.dist, static_cast<long long>(a.model.n),
                      static_cast<long long>(a.draws),
                      static_cast<long long>(a.seed), ks,
                      static_cast<long long>(batch.redraws)});
  return out;
}

// ---- check-geary

struct GearyArgs {
  int n = 6;
  int points = 101;
  std::optional<double> xmax;
  double bound = kGearyRegressionBound;
};

Output cmd_check_geary(const GearyArgs& a, const Globals& g, int& status) {
  if (a.n < 6) {
    throw UsageError(
        "check-geary needs n >= 6: the recurrence kernel (1 - z^2)^((n-7)/2) "
        "is not integrable after the z = sin(theta) substitution for n < 6");
  }
  if (a.points < 1) {
    throw UsageError("--points must be >= 1");
  }
  const auto prev = build_default_model(Family::NormalSkewness, a.n - 1, g.precision_bits);
  const auto cur = build_default_model(Family::NormalSkewness, a.n, g.precision_bits);
  const double xmax = a.xmax.value_or(cur.a() / 2);
  if (!(xmax > 0 && xmax <= cur.a())) {
    throw UsageError("--xmax must lie in (0, A]");
  }
  std::vector<double> grid;
  for (int i = 0; i < a.points; ++i) {
    grid.push_back(a.points == 1 ? 0.0 : xmax * (2 * i - (a.points - 1)) / (a.points - 1));
  }
  const GearyReport rep = geary_consistency(prev, cur, grid);
  Output out;
  out.command = "check-geary";
  out.params = {{"n", a.n}, {"points", a.points}, {"xmax", xmax}, {"bound", a.bound}};
  out.columns = {"x", "recurrence", "model", "deviation", "quad_error"};
  out.default_decimals = 8;
  for (const auto& p : rep.points) {
    out.rows.push_back({p.x, p.rhs, p.model, p.rhs - p.model, p.quad_error});
  }
  const bool pass = rep.max_deviation <= a.bound;
  out.summary["max_deviation"] = rep.max_deviation;
  out.summary["max_quad_error"] = rep.max_quad_error;
  out.summary["pass"] = pass;
  status = pass ? kOk : kComparisonFailed;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier cosine moment models for uniform sums and sample skewness"};
  app.require_subcommand(1);

  Globals g;
  app.add_option("--precision-bits", g.precision_bits, "MPFR working precision")
      ->check(CLI::Range(256L, 1L << 20));
  app.add_option("--format", g.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--decimals", g.decimals, "digits after the point in csv output")
      ->check(CLI::Range(0, 30));
  app.add_option("--data-dir", g.data_dir, "directory holding table1.tsv..table9.tsv");

  ModelArgs coeffs_m;
  bool exact = false;
  auto* coeffs = app.add_subcommand("coeffs", "Fourier coefficients a_0..a_K");
  add_model_options(coeffs, coeffs_m);
  coeffs->add_flag("--exact", exact, "add exact uniform-sum coefficients and differences");

  ModelArgs eval_m;
  std::string which;
  std::vector<double> xs;
  std::string grid;
  bool clip = false;
  auto* eval = app.add_subcommand("eval", "evaluate pdf, cdf or upper tail");
  eval->add_option("function", which, "pdf, cdf or tail")->required();
  add_model_options(eval, eval_m);
  eval->add_option("-x", xs, "evaluation points");
  eval->add_option("--grid", grid, "a:b:steps, steps + 1 equally spaced points");
  eval->add_flag("--clip", clip, "clip negative pdf values to zero");

  ModelArgs pct_m;
  std::vector<double> alphas;
  auto* pct = app.add_subcommand("percentile", "solve F(x) = alpha");
  add_model_options(pct, pct_m);
  pct->add_option("--alpha", alphas, "probabilities in (0, 1)")->delimiter(',');

  int table = 0;
  auto* repro = app.add_subcommand("reproduce", "compare against a reference table");
  repro->add_option("--table", table, "table id 1..9")->required();

  McArgs mc_a;
  auto* mc = app.add_subcommand("mc", "Monte Carlo KS distance and histogram");
  add_model_options(mc, mc_a.model);
  mc->add_option("-N", mc_a.draws, "replications (>= 100)");
  mc->add_option("--seed", mc_a.seed, "generator seed");
  mc->add_option("--bins", mc_a.bins, "histogram bins over [-A, A]");
  mc->add_option("--threads", mc_a.threads, "worker threads (0 = all cores)");
  mc->add_option("--out", mc_a.out_path, "histogram CSV path");

  GearyArgs geary_a;
  auto* geary = app.add_subcommand("check-geary", "density recurrence consistency");
  geary->add_option("-n", geary_a.n, "sample size (>= 6)")->required();
  geary->add_option("--points", geary_a.points, "grid points");
  geary->add_option("--xmax", geary_a.xmax, "grid half-width (default A/2)");
  geary->add_option("--bound", geary_a.bound, "maximum allowed deviation");

  // global flags may follow the subcommand
  for (auto* sub : {coeffs, eval, pct, repro, mc, geary}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    int status = kOk;
    Output out;
    if (*coeffs) {
      out = cmd_coeffs(coeffs_m, exact, g);
    } else if (*eval) {
      out = cmd_eval(eval_m, which, xs, grid, clip, g);
    } else if (*pct) {
      out = cmd_percentile(pct_m, alphas, g);
    } else if (*repro) {
      out = cmd_reproduce(table, g, status);
    } else if (*mc) {
      out = cmd_mc(mc_a, g);
    } else {
      out = cmd_check_geary(geary_a, g, status);
    }
    emit(out, g);
    std::cout.flush();
    return status;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
