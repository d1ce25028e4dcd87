#include "cli/runner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "spinwire/chain.hpp"
#include "spinwire/dynamics.hpp"
#include "spinwire/experiments.hpp"
#include "spinwire/oracle.hpp"
#include "spinwire/random.hpp"

namespace spinwire::cli {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256: digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::filesystem::path output_directory(const RunOptions& options, const std::string& name) {
  if (options.out_dir) return *options.out_dir;
  if (const char* root = std::getenv("SPINWIRE_OUT"); root != nullptr && *root != '\0')
    return std::filesystem::path(root) / name;
  return std::filesystem::path("spinwire-out") / name;
}

ResolvedRun prepare_run(Json user, const RunOptions& options) {
  if (!user.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& o : options.overrides) apply_override(user, o);
  if (options.seed) {
    set_path(user, "disorder.seed", *options.seed);
    set_path(user, "oracle.seed", *options.seed);
  }
  return prepare(user);
}

namespace {

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  void write(const std::string& file, const std::string& contents) {
    const auto path = dir_ / file;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
    outputs_.push_back({{"file", file}, {"bytes", contents.size()}, {"sha256", sha256_hex(contents)}});
  }

  void write_json(const std::string& file, const Json& doc) { write(file, doc.dump(2) + "\n"); }

  const Json& outputs() const { return outputs_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  Json outputs_ = Json::array();
};

std::string trace_csv(const AmplitudeTrace& trace, FidelityConvention convention) {
  std::string csv = "t,re_A,im_A,F\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const Complex a = trace.amplitudes[i];
    csv += format_number(trace.times[i]) + ',' + format_number(a.real()) + ',' + format_number(a.imag()) + ',' +
           format_number(fidelity_of(a, convention)) + '\n';
  }
  return csv;
}

std::string label_of(const Json& value) {
  if (value.is_number()) return format_number(value.get<double>());
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

Json peak_json(const PeakResult& p) {
  return {{"f_max", p.f_max}, {"t_mf", p.t_mf}, {"at_boundary", p.at_boundary}};
}

std::vector<double> record_grid(const ResolvedRun& run) {
  return uniform_grid(run.t_max, detail::default_step(run.t_max, run.step));
}

Json run_trace(const ResolvedRun& run, ArtifactWriter& out) {
  const auto grid = record_grid(run);
  const auto trace = fidelity_trace(run.chain, grid);
  out.write("trace.csv", trace_csv(trace, run.convention));
  return {{"peak", peak_json(find_peak(run.chain, run.t_max, run.step, run.convention))}};
}

Json run_contour(const ResolvedRun& run, ArtifactWriter& out, std::size_t jobs) {
  const std::string param = run.config.at("contour").at("parameter").get<std::string>();
  const Json& values = run.config.at("contour").at("values");
  std::vector<double> rows(values.size());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = static_cast<double>(r);

  auto family = [&](double row) {
    Json doc = run.config;
    set_path(doc, param, values.at(static_cast<std::size_t>(row)));
    return chain_from(doc);
  };
  const auto grid_t = record_grid(run);
  const ContourGrid grid = contour_scan(param, rows, family, grid_t, run.convention, jobs);

  std::string csv = "param,t,F\n";
  Json row_info = Json::array();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string label = label_of(values[r]);
    Json info = {{"param", values[r]}};
    if (!grid.row_ok(r)) {
      info["error"] = *grid.errors[r];
      row_info.push_back(info);
      continue;
    }
    for (std::size_t k = 0; k < grid.times.size(); ++k)
      csv += label + ',' + format_number(grid.times[k]) + ',' + format_number(grid.fidelity[r][k]) + '\n';
    info["peak"] = peak_json(find_peak(family(rows[r]), run.t_max, run.step, run.convention));
    row_info.push_back(info);
  }
  out.write("contour.csv", csv);
  return {{"rows", row_info}};
}

std::string noise_label(const DisorderSpec& d) {
  const bool statics = !d.is_static_free();
  if (statics && d.has_dynamic()) return "static+dynamic";
  if (d.has_dynamic()) return "dynamic";
  return statics ? "static" : "none";
}

Json stats_json(const EnsembleStats& s) {
  return {{"n_realizations", s.n_realizations}, {"mean", s.mean}, {"std", s.std}, {"min", s.min},
          {"max", s.max}, {"p05", s.p05}, {"p50", s.p50}, {"p95", s.p95}};
}

Json run_ensemble(const ResolvedRun& run, ArtifactWriter& out, std::size_t jobs) {
  const auto n = run.config.at("ensemble").at("realizations").get<std::size_t>();
  EnsembleOptions options;
  options.convention = run.convention;
  options.jobs = jobs;
  options.max_total_intervals = run.config.at("ensemble").at("max_total_intervals").get<std::uint64_t>();
  const EnsembleStats stats = ensemble_run(run.chain, run.disorder, n, run.t_max, run.step, options);

  std::string csv = "realization,seed,f_max,t_mf\n";
  for (std::size_t r = 0; r < stats.peaks.size(); ++r)
    csv += std::to_string(r) + ',' + std::to_string(stats.seeds[r]) + ',' + format_number(stats.peaks[r].f_max) +
           ',' + format_number(stats.peaks[r].t_mf) + '\n';
  out.write("ensemble.csv", csv);

  Json stats_doc = stats_json(stats);
  stats_doc["noise"] = noise_label(run.disorder);
  stats_doc["convention"] = to_string(run.convention);
  out.write_json("stats.json", stats_doc);

  // representative trace of realization 0
  const auto grid = record_grid(run);
  const AmplitudeTrace trace = run.disorder.has_dynamic()
                                   ? evolve_piecewise(run.chain, run.disorder, 0, run.t_max, grid)
                                   : fidelity_trace(sample_static_disorder(run.chain, run.disorder, 0), grid);
  out.write("trace.csv", trace_csv(trace, run.convention));
  return {{"stats", stats_json(stats)}, {"noise", noise_label(run.disorder)}};
}

Json run_threshold(const ResolvedRun& run, ArtifactWriter& out, std::size_t jobs) {
  const Json& cfg = run.config.at("threshold");
  const std::string param = cfg.at("parameter").get<std::string>();
  const auto n = cfg.at("realizations").get<std::size_t>();
  EnsembleOptions options;
  options.convention = run.convention;
  options.jobs = jobs;
  options.max_total_intervals = run.config.at("ensemble").at("max_total_intervals").get<std::uint64_t>();

  Json probes = Json::array();
  auto metric = [&](double x) {
    Json doc = run.config;
    set_path(doc, param, x);
    const double mean = ensemble_run(chain_from(doc), disorder_from(doc), n, run.t_max, run.step, options).mean;
    probes.push_back({{"x", x}, {"mean_f_max", mean}});
    return mean;
  };
  const auto scan = cfg.at("scan_points").get<std::int64_t>();
  const ThresholdResult result =
      threshold_search(metric, cfg.at("target").get<double>(), cfg.at("lo").get<double>(),
                       cfg.at("hi").get<double>(), cfg.at("tol").get<double>(),
                       scan > 0 ? static_cast<std::size_t>(scan) : 0);
  const Json doc = {{"parameter", param},  {"target", cfg.at("target")}, {"value", result.value},
                    {"bracket_lo", result.lo}, {"bracket_hi", result.hi},   {"probes", probes},
                    {"convention", to_string(run.convention)}};
  out.write_json("threshold.json", doc);
  return {{"value", result.value}, {"bracket", {result.lo, result.hi}}};
}

Json run_scaling(const ResolvedRun& run, ArtifactWriter& out, std::size_t jobs) {
  const Json& cfg = run.config.at("scaling");
  const auto j0 = cfg.at("j0_values").get<std::vector<double>>();
  auto family = [&](double value) {
    Json doc = run.config;
    set_path(doc, "chain.profile.j0", value);
    return chain_from(doc);
  };
  const ScalingResult result =
      fit_tmf_scaling(j0, family, cfg.at("window_factor").get<double>(), run.convention, jobs);
  Json points = Json::array();
  for (std::size_t i = 0; i < j0.size(); ++i)
    points.push_back({{"j0", j0[i]}, {"t_mf", result.peaks[i].t_mf}, {"f_max", result.peaks[i].f_max},
                      {"at_boundary", result.peaks[i].at_boundary}});
  const Json doc = {{"slope", result.fit.slope},
                    {"intercept", result.fit.intercept},
                    {"residual", result.fit.residual},
                    {"window_factor", cfg.at("window_factor")},
                    {"points", points}};
  out.write_json("scaling.json", doc);
  return {{"slope", result.fit.slope}, {"residual", result.fit.residual}};
}

}  // namespace

/// Random small chains for the oracle comparison, drawn from the keyed
/// generator so the report is identical on every platform.
Json oracle_report(const Json& cfg) {
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const auto count = cfg.at("specs").get<std::size_t>();
  const auto lo = cfg.at("min_sites").get<std::size_t>();
  const auto hi = cfg.at("max_sites").get<std::size_t>();
  const double t_max = cfg.at("t_max").get<double>();
  const double tolerance = cfg.at("tolerance").get<double>();

  auto unit = [&](std::uint64_t k, std::uint64_t slot, std::uint64_t idx) {
    return 0.5 * (keyed_uniform(seed, k, slot, idx, Stream::OracleSampling) + 1.0);
  };

  Json rows = Json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto span = static_cast<double>(hi - lo + 1);
    const std::size_t n = std::min(hi, lo + static_cast<std::size_t>(unit(k, 0, 0) * span));
    std::vector<double> couplings(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) couplings[i] = 0.5 + unit(k, 1, i);
    ChainSpec spec = make_chain(std::move(couplings));
    for (std::size_t i = 0; i < n; ++i) spec.onsite[i] = unit(k, 2, i) - 0.5;
    const double t = t_max * unit(k, 3, 0);

    const Complex reduced = transfer_amplitude(eigendecompose(build_hamiltonian(spec)), spec.sender, spec.receiver, t);
    const Complex full = full_hilbert_oracle(spec, t);
    const double diff = std::abs(full - reduced);
    worst = std::max(worst, diff);
    rows.push_back({{"n_sites", n},
                    {"t", t},
                    {"reduced", {reduced.real(), reduced.imag()}},
                    {"oracle", {full.real(), full.imag()}},
                    {"abs_diff", diff}});
  }
  return {{"specs", rows}, {"max_abs_diff", worst}, {"tolerance", tolerance}, {"pass", worst <= tolerance},
          {"phase_alignment", "oracle amplitude multiplied by exp(-i t sum(onsite)/2)"}};
}

Json execute(const ResolvedRun& run, const std::filesystem::path& out_dir, std::size_t jobs, std::ostream& log) {
  const auto wall_start = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  if (jobs == 0) jobs = default_jobs();
  log << "spinwire: " << run.name << " (" << to_string(run.experiment) << ") -> " << out_dir.string() << std::endl;

  ArtifactWriter out(out_dir);
  Json summary;
  switch (run.experiment) {
    case Experiment::Trace: summary = run_trace(run, out); break;
    case Experiment::Contour: summary = run_contour(run, out, jobs); break;
    case Experiment::Ensemble: summary = run_ensemble(run, out, jobs); break;
    case Experiment::Threshold: summary = run_threshold(run, out, jobs); break;
    case Experiment::Scaling: summary = run_scaling(run, out, jobs); break;
    case Experiment::OracleCheck: {
      const Json report = oracle_report(run.config.at("oracle"));
      out.write_json("oracle.json", report);
      summary = {{"max_abs_diff", report.at("max_abs_diff")}, {"pass", report.at("pass")}};
      break;
    }
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::time_t started = std::chrono::system_clock::to_time_t(wall_start);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&started));

  Json manifest = {
      {"tool", "spinwire"},
      {"version", kToolVersion},
      {"experiment", to_string(run.experiment)},
      {"config", run.config},
      {"conventions",
       {{"fidelity", to_string(run.convention)},
        {"hopping", "-2J per bond (Pauli XX+YY); times are 1/2 of a spin-1/2 convention"},
        {"onsite", "onsite[i] is the one-magnon site energy"},
        {"csv_precision", "17 significant digits"}}},
      {"jobs", jobs},
      {"started_at", stamp},
      {"wall_clock_seconds", seconds},
      {"summary", summary},
      {"outputs", out.outputs()},
  };
  const std::string text = manifest.dump(2) + "\n";
  std::ofstream file(out_dir / "manifest.json", std::ios::trunc);
  if (!file || !(file << text)) throw IoError("failed writing manifest.json");
  return manifest;
}

int run_and_report(const Json& user, const RunOptions& options, std::ostream& log, std::ostream& err) {
  ResolvedRun run;
  try {
    run = prepare_run(user, options);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const Json manifest = execute(run, output_directory(options, run.name), options.jobs, log);
    if (run.experiment == Experiment::OracleCheck && !manifest.at("summary").at("pass").get<bool>()) {
      err << "oracle check failed: max |difference| = " << manifest.at("summary").at("max_abs_diff") << '\n';
      return kExitNumerical;
    }
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace spinwire::cli
