#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pxy/bootstrap.hpp"
#include "pxy/csv.hpp"
#include "pxy/estimators.hpp"
#include "pxy/kernels.hpp"
#include "pxy/simulate.hpp"

namespace pxy {

enum class OutputFormat { Text, Csv, Json };

/// Stream index reserved for generating simulated data, kept apart from the
/// bootstrap streams 0, 1, 2, ...
inline constexpr std::uint64_t kDataStream = std::uint64_t{1} << 63;

struct RunConfig {
  std::optional<std::string> input;
  std::optional<SinhArcsinhParams> simulate;
  std::size_t n = 100;
  std::vector<Method> estimators{std::begin(kAllMethods), std::end(kAllMethods)};
  std::size_t replicates = 2000;
  double level = 0.95;
  Seed seed{1};
  unsigned threads = 0;
  OutputFormat format = OutputFormat::Text;
  bool export_replicates = false;
  std::string export_dir = ".";
  std::optional<double> bandwidth;
  std::optional<std::array<double, 3>> bandwidth_matrix;

  void validate() const {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("--level must lie in (0,1)");
    if (replicates < 1) throw DomainError("--B must be at least 1");
    if (estimators.empty()) throw DomainError("select at least one estimator");
    if (input.has_value() == simulate.has_value())
      throw DomainError("give exactly one of --input or --simulate");
    if (simulate) {
      simulate->validate();
      if (n < 2) throw DomainError("--n must be at least 2");
    }
    if (bandwidth) Bandwidth1D check(*bandwidth);
    if (bandwidth_matrix) {
      const auto& h = *bandwidth_matrix;
      BandwidthMatrix2D check(h[0], h[1], h[2]);
    }
  }

  EstimatorSpec spec_for(Method m) const {
    EstimatorSpec spec{m};
    const bool scalar = m == Method::Kernel1D || m == Method::Independent || m == Method::Paired;
    if (scalar && bandwidth) spec.bandwidth = Bandwidth1D(*bandwidth);
    if (m == Method::Kernel2D && bandwidth_matrix) {
      const auto& h = *bandwidth_matrix;
      spec.bandwidth = BandwidthMatrix2D(h[0], h[1], h[2]);
    }
    return spec;
  }
};

inline PairedSample simulated_sample(const SinhArcsinhParams& p, std::size_t n, Seed seed) {
  RngStream rng(seed, kDataStream);
  return sample_sas(p, n, rng);
}

inline PairedSample load_sample(const RunConfig& cfg) {
  if (cfg.input) return ingest_csv(*cfg.input);
  return simulated_sample(*cfg.simulate, cfg.n, cfg.seed);
}

struct ReportRow {
  Method method;
  ResamplingScheme scheme;
  std::optional<double> point;
  std::optional<ConfidenceInterval> normal, basic, percentile, bca;
  std::vector<double> replicates;
  std::vector<std::string> notes;  ///< per-row failures or warnings
};

struct ThetaReport {
  std::size_t n = 0;
  std::size_t replicates = 0;
  double level = 0.95;
  Seed seed{};
  std::vector<ReportRow> rows;
};

/// Point estimate, bootstrap replicates and the four intervals for every
/// requested estimator. A failing estimator yields a row with notes and
/// leaves the other rows untouched.
inline ThetaReport estimate_command(const PairedSample& data, const RunConfig& cfg) {
  cfg.validate();
  ThetaReport report{data.size(), cfg.replicates, cfg.level, cfg.seed, {}};
  const BootstrapOptions opt{cfg.replicates, cfg.seed, cfg.threads};

  for (Method m : cfg.estimators) {
    ReportRow row{};
    row.method = m;
    row.scheme = default_scheme(m);
    const auto spec = cfg.spec_for(m);
    try {
      auto boot = run_bootstrap(data, spec, row.scheme, opt);
      row.point = boot.point.value;
      row.replicates = boot.replicates;
      auto attempt = [&](auto&& make, std::optional<ConfidenceInterval>& slot, const char* what) {
        try {
          slot = make();
        } catch (const Error& e) {
          row.notes.push_back(std::string(what) + ": " + e.what());
        }
      };
      attempt([&] { return ci_normal(boot, cfg.level); }, row.normal, "normal");
      attempt([&] { return ci_basic(boot, cfg.level); }, row.basic, "basic");
      attempt([&] { return ci_percentile(boot, cfg.level); }, row.percentile, "percentile");
      attempt(
          [&] {
            const auto jack = jackknife(data, spec, cfg.threads);
            return ci_bca(boot, jack, cfg.level);
          },
          row.bca, "bca");
      if (row.bca && row.bca->zero_jackknife_variance)
        row.notes.push_back("bca: zero jackknife variance, acceleration set to 0");
    } catch (const Error& e) {
      row.notes.push_back(e.what());
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline ThetaReport estimate_command(const RunConfig& cfg) {
  cfg.validate();
  return estimate_command(load_sample(cfg), cfg);
}

// ---------------------------------------------------------------------------
// Rendering.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string text_interval(const std::optional<ConfidenceInterval>& ci) {
  if (!ci) return "-";
  std::string s = "(" + fixed3(ci->lo) + ", " + fixed3(ci->hi) + ")";
  if (ci->exits_unit_interval) s += "*";
  return s;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline nlohmann::ordered_json json_interval(const std::optional<ConfidenceInterval>& ci) {
  if (!ci) return nullptr;
  nlohmann::ordered_json j;
  j["lo"] = ci->lo;
  j["hi"] = ci->hi;
  j["exits_unit_interval"] = ci->exits_unit_interval;
  if (ci->kind == CiKind::BCa) j["zero_jackknife_variance"] = ci->zero_jackknife_variance;
  return j;
}

inline std::string join_notes(const std::vector<std::string>& notes) {
  std::string out;
  for (const auto& n : notes) {
    if (!out.empty()) out += "; ";
    out += n;
  }
  return out;
}

}  // namespace detail

inline std::string render_text(const ThetaReport& r) {
  std::string out = "n = " + std::to_string(r.n) + ", B = " + std::to_string(r.replicates) +
                    ", level = " + detail::fixed3(r.level) +
                    ", seed = " + std::to_string(r.seed.value) + "\n";
  out += detail::pad("Estimator", 13) + detail::pad("theta", 7) + detail::pad("Normal", 18) +
         detail::pad("Basic", 18) + detail::pad("Percentile", 18) + "BCa\n";
  bool any_star = false;
  std::string notes;
  for (const auto& row : r.rows) {
    out += detail::pad(std::string(method_name(row.method)), 13);
    out += detail::pad(row.point ? detail::fixed3(*row.point) : "-", 7);
    out += detail::pad(detail::text_interval(row.normal), 18);
    out += detail::pad(detail::text_interval(row.basic), 18);
    out += detail::pad(detail::text_interval(row.percentile), 18);
    out += detail::text_interval(row.bca) + "\n";
    for (const auto* ci : {&row.normal, &row.basic, &row.percentile, &row.bca})
      any_star = any_star || (*ci && (*ci)->exits_unit_interval);
    for (const auto& n : row.notes)
      notes += "  " + std::string(method_name(row.method)) + ": " + n + "\n";
  }
  if (any_star) out += "* interval extends outside [0, 1]; reported unclipped\n";
  if (!notes.empty()) out += "notes:\n" + notes;
  return out;
}

inline std::string render_csv(const ThetaReport& r) {
  std::string out =
      "method,scheme,theta,normal_lo,normal_hi,basic_lo,basic_hi,percentile_lo,percentile_hi,"
      "bca_lo,bca_hi,notes\n";
  auto num = [](const std::optional<double>& v) { return v ? format_full(*v) : std::string(); };
  auto lo = [](const std::optional<ConfidenceInterval>& c) {
    return c ? format_full(c->lo) : std::string();
  };
  auto hi = [](const std::optional<ConfidenceInterval>& c) {
    return c ? format_full(c->hi) : std::string();
  };
  for (const auto& row : r.rows) {
    std::string notes = detail::join_notes(row.notes);
    for (auto& ch : notes) {
      if (ch == '"') ch = '\'';
    }
    out += std::string(method_key(row.method)) + "," + std::string(scheme_name(row.scheme)) +
           "," + num(row.point) + "," + lo(row.normal) + "," + hi(row.normal) + "," +
           lo(row.basic) + "," + hi(row.basic) + "," + lo(row.percentile) + "," +
           hi(row.percentile) + "," + lo(row.bca) + "," + hi(row.bca) + ",\"" + notes + "\"\n";
  }
  return out;
}

inline std::string render_json(const ThetaReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["B"] = r.replicates;
  j["level"] = r.level;
  j["seed"] = r.seed.value;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json jr;
    jr["method"] = method_key(row.method);
    jr["scheme"] = scheme_name(row.scheme);
    jr["theta"] = row.point ? nlohmann::ordered_json(*row.point) : nlohmann::ordered_json();
    jr["normal"] = detail::json_interval(row.normal);
    jr["basic"] = detail::json_interval(row.basic);
    jr["percentile"] = detail::json_interval(row.percentile);
    jr["bca"] = detail::json_interval(row.bca);
    jr["notes"] = row.notes;
    j["rows"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

inline std::string render(const ThetaReport& r, OutputFormat f) {
  switch (f) {
    case OutputFormat::Text: return render_text(r);
    case OutputFormat::Csv: return render_csv(r);
    case OutputFormat::Json: return render_json(r);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Plot-data exports.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDensityGridPoints = 512;

inline std::string replicates_csv(const ReportRow& row) {
  std::string out = "replicate_index,theta\n";
  for (std::size_t i = 0; i < row.replicates.size(); ++i)
    out += std::to_string(i) + "," + format_full(row.replicates[i]) + "\n";
  return out;
}

/// Gaussian KDE of the replicates (Silverman bandwidth) on 512 equispaced
/// points spanning [min - 3h, max + 3h].
inline std::string density_csv(const ReportRow& row) {
  const auto& v = row.replicates;
  const double h = silverman_density_bw(v).value();
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  const double lo = *mn - 3.0 * h;
  const double hi = *mx + 3.0 * h;
  const double norm = 1.0 / (static_cast<double>(v.size()) * h);
  std::string out = "grid_z,density\n";
  for (std::size_t g = 0; g < kDensityGridPoints; ++g) {
    const double z = lo + (hi - lo) * static_cast<double>(g) /
                              static_cast<double>(kDensityGridPoints - 1);
    double d = 0.0;
    for (double t : v) d += normal_pdf((z - t) / h);
    out += format_full(z) + "," + format_full(d * norm) + "\n";
  }
  return out;
}

/// Writes <dir>/<method>_replicates.csv and <dir>/<method>_density.csv per
/// row with replicates. Returns the paths written.
inline std::vector<std::string> export_replicates(const ThetaReport& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& row : r.rows) {
    if (row.replicates.empty()) continue;
    const std::string base = (std::filesystem::path(dir) / std::string(method_key(row.method))).string();
    write_text_file(base + "_replicates.csv", replicates_csv(row));
    written.push_back(base + "_replicates.csv");
    try {
      write_text_file(base + "_density.csv", density_csv(row));
      written.push_back(base + "_density.csv");
    } catch (const DegenerateSample&) {
      // constant replicates have no density curve
    }
  }
  return written;
}

// ---------------------------------------------------------------------------
// Ground-truth oracles for simulated data.
// ---------------------------------------------------------------------------

struct OracleValues {
  double theta;
  double theta_independent;
  double correlation;
  double tolerance;
};

inline OracleValues oracle_command(const SinhArcsinhParams& p, double tol = 1e-10) {
  return {theta_oracle(p, tol), theta_independent_oracle(p, tol), correlation_oracle(p, tol * 10),
          tol};
}

inline std::string render_oracle(const OracleValues& o, OutputFormat f) {
  if (f == OutputFormat::Json) {
    nlohmann::ordered_json j;
    j["theta"] = o.theta;
    j["theta_independent"] = o.theta_independent;
    j["correlation"] = o.correlation;
    j["tolerance"] = o.tolerance;
    return j.dump(2) + "\n";
  }
  if (f == OutputFormat::Csv) {
    return "quantity,value\ntheta," + format_full(o.theta) + "\ntheta_independent," +
           format_full(o.theta_independent) + "\ncorrelation," + format_full(o.correlation) +
           "\ntolerance," + format_full(o.tolerance) + "\n";
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "theta              %.6f\ntheta_independent  %.6f\ncorrelation        %.6f\n"
                "quadrature tol     %.0e\n",
                o.theta, o.theta_independent, o.correlation, o.tolerance);
  return buf;
}

}  // namespace pxy
